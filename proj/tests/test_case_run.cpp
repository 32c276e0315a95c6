#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "support.hpp"
#include "verifem/case_config.hpp"
#include "verifem/estimator.hpp"
#include "verifem/mesh_io.hpp"
#include "verifem/report_io.hpp"

using namespace vt;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

CaseConfig quick_config(const std::string& out_dir) {
  CaseConfig cfg;
  cfg.fixture = "patch_test";
  cfg.reference_levels = 1;
  cfg.timing_reps = 1;
  cfg.output_dir = out_dir;
  return cfg;
}

}  // namespace

TEST_SUITE("case_run") {

TEST_CASE("a fixture case writes the full output set") {
  CaseConfig cfg = quick_config("case_run_full");
  cfg.costs = {CostKind::J0, CostKind::J2};
  CaseResult res = run_case(cfg);

  // eet x {J0, J2}, spet (single row), eespt x {J0, J2}
  REQUIRE(res.rows.size() == 5);
  REQUIRE(res.reports.size() == 5);
  CHECK(res.rows[0].method == "EET");
  CHECK(res.rows[0].cost == "J0");
  CHECK(res.rows[1].cost == "J2");
  CHECK(res.rows[2].method == "SPET");
  CHECK(res.rows[2].cost == "-");
  CHECK(res.rows[3].method == "EESPT");

  Fixture fx = make_fixture("patch_test");
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  const double u_norm = std::sqrt(sol.energy_sq);
  for (const auto& row : res.rows) {
    CHECK(row.theta <= 1e-9 * u_norm);
    CHECK(row.theta == res.reports[&row - res.rows.data()].theta);
  }
  CHECK(res.reference_value <= 1e-10 * u_norm);

  namespace fs = std::filesystem;
  CHECK(res.output_dir == "case_run_full");
  for (const char* name :
       {"summary.csv", "fields_eet_j0.csv", "fields_eet_j0.vtk",
        "fields_eet_j2.csv", "fields_spet.csv", "fields_spet.vtk",
        "fields_eespt_j0.csv", "fields_eespt_j2.vtk"})
    CHECK(fs::exists(fs::path(res.output_dir) / name));

  // the first EET row is the timing base
  CHECK(res.rows[0].cpu_normalized == 1.0);

  // the density column is the squared contribution per unit area
  VecX esq = read_element_csv_column("case_run_full/fields_eet_j0.csv",
                                     "estimate_sq");
  VecX dens = read_element_csv_column("case_run_full/fields_eet_j0.csv",
                                      "estimate_density");
  REQUIRE(esq.size() == fx.mesh.n_elements());
  for (int e = 0; e < fx.mesh.n_elements(); ++e)
    CHECK(dens[e] == esq[e] / fx.mesh.area(e));
}

TEST_CASE("repeated runs reproduce every number except the timings") {
  CaseConfig a = quick_config("case_run_rep_a");
  CaseConfig b = quick_config("case_run_rep_b");
  CaseResult ra = run_case(a);
  CaseResult rb = run_case(b);
  REQUIRE(ra.rows.size() == rb.rows.size());
  for (size_t i = 0; i < ra.rows.size(); ++i) {
    CHECK(ra.rows[i].theta == rb.rows[i].theta);
    CHECK(ra.rows[i].ref_error == rb.rows[i].ref_error);
    // eta may be inf or nan on an exact case; compare the bit patterns
    CHECK(std::memcmp(&ra.rows[i].eta, &rb.rows[i].eta, sizeof(double)) == 0);
  }
  CHECK(slurp("case_run_rep_a/fields_eet_j0.csv") ==
        slurp("case_run_rep_b/fields_eet_j0.csv"));
  CHECK(slurp("case_run_rep_a/fields_spet.vtk") ==
        slurp("case_run_rep_b/fields_spet.vtk"));
}

TEST_CASE("the environment variable overrides the output directory") {
  CaseConfig cfg = quick_config("case_run_ignored");
  cfg.methods = {"eet"};
  REQUIRE(setenv("VERIFEM_OUTPUT_DIR", "case_run_env", 1) == 0);
  CaseResult res = run_case(cfg);
  unsetenv("VERIFEM_OUTPUT_DIR");
  CHECK(res.output_dir == "case_run_env");
  CHECK(std::filesystem::exists("case_run_env/summary.csv"));
  CHECK_FALSE(std::filesystem::exists("case_run_ignored/summary.csv"));
}

TEST_CASE("a mesh-file case runs end to end") {
  Fixture fx = two_triangle_shear();
  write_mesh_file("case_run_shear.mesh", fx.mesh, fx.loads);

  CaseConfig cfg;
  cfg.mesh_path = "case_run_shear.mesh";
  cfg.methods = {"eet", "eespt"};
  cfg.reference_levels = 2;
  cfg.timing_reps = 1;
  cfg.output_dir = "case_run_mesh_out";
  CaseResult res = run_case(cfg);

  REQUIRE(res.rows.size() == 2);
  CHECK(res.reference_value > 0.0);
  for (const auto& row : res.rows) {
    CHECK(row.theta > 0.0);
    CHECK(prager_synge_check(row.theta, res.reference_value));
    CHECK(row.eta >= 1.0 - 1e-9);
  }

  // the exported squared contributions recompose the estimate
  VecX esq = read_element_csv_column("case_run_mesh_out/fields_eet_j0.csv",
                                     "estimate_sq");
  CHECK(esq.sum() == doctest::Approx(res.rows[0].theta * res.rows[0].theta)
                         .epsilon(1e-12));
}

TEST_CASE("unknown fixtures and unreadable meshes are rejected") {
  CaseConfig cfg = quick_config("case_run_reject");
  cfg.fixture = "bogus";
  CHECK_THROWS_AS(run_case(cfg), ValidationError);

  CaseConfig missing;
  missing.mesh_path = "does_not_exist.mesh";
  missing.output_dir = "case_run_reject";
  CHECK_THROWS_AS(run_case(missing), ValidationError);
}

}  // TEST_SUITE
