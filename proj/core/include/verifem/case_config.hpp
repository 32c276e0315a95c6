#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "verifem/equil_common.hpp"
#include "verifem/estimator.hpp"
#include "verifem/report_io.hpp"
#include "verifem/types.hpp"

namespace verifem {

// Run configuration, parsed from flat key = value text with [section]
// headers. Sections and keys:
//   [case]     fixture | mesh, methods, costs, k, penalty, reference_levels,
//              output_dir, timing_reps
//   [material] young, poisson
//   [loads]    body_force (fx fy), body_gradient (gxx gxy gyx gyy)
struct CaseConfig {
  std::string fixture;
  std::string mesh_path;
  std::vector<std::string> methods = {"eet", "spet", "eespt"};
  std::vector<CostKind> costs = {CostKind::J0};
  int k = 3;
  double penalty = 1e5;
  int reference_levels = 2;
  std::string output_dir = "out";
  int timing_reps = 3;
  Material material;
  bool has_body = false;
  Vec2 body_c = Vec2::Zero();
  Mat2 body_g = Mat2::Zero();
};

CaseConfig parse_config(std::istream& in, const std::string& origin);
CaseConfig read_config_file(const std::string& path);

// Throws ValidationError on an inconsistent configuration.
void validate_config(const CaseConfig& config);

struct CaseResult {
  std::vector<ErrorReport> reports;
  std::vector<ReportRow> rows;       // summary table, same order
  std::string output_dir;            // after the environment override
  double reference_value = 0.0;
};

// Solves the case, runs every requested (method, cost) estimator, writes
// summary.csv plus per-report element-field exports (CSV and VTK) into the
// output directory. VERIFEM_OUTPUT_DIR overrides config.output_dir.
CaseResult run_case(const CaseConfig& config);

}  // namespace verifem
