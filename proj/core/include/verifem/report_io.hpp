#pragma once

#include <string>
#include <utility>
#include <vector>

#include "verifem/mesh.hpp"
#include "verifem/types.hpp"

namespace verifem {

// One line of the method-comparison table.
struct ReportRow {
  std::string method;
  std::string cost;
  double theta = 0.0;
  double ref_error = 0.0;
  double eta = 0.0;
  double cpu_normalized = 0.0;
};

// Numbers are printed with "%.17g" so a decimal round trip is exact.
void write_summary_csv(const std::string& path,
                       const std::vector<ReportRow>& rows);

using ElementFields = std::vector<std::pair<std::string, VecX>>;

// Per-element columns, one row per element, prefixed with the element id.
void write_element_csv(const std::string& path, const Mesh& mesh,
                       const ElementFields& fields);

// Legacy ASCII unstructured-grid export with one CELL_DATA scalar per field.
void write_vtk(const std::string& path, const Mesh& mesh,
               const ElementFields& fields);

// Reads one named column back from write_element_csv output (round-trip
// checks and downstream scripts).
VecX read_element_csv_column(const std::string& path,
                             const std::string& column);

}  // namespace verifem
