#include "verifem/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace verifem {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  return out;
}

}  // namespace

void write_summary_csv(const std::string& path,
                       const std::vector<ReportRow>& rows) {
  std::ofstream out = open_out(path);
  out << "method,cost,theta,ref_error,eta,cpu_normalized\n";
  for (const ReportRow& r : rows)
    out << r.method << ',' << r.cost << ',' << num(r.theta) << ','
        << num(r.ref_error) << ',' << num(r.eta) << ','
        << num(r.cpu_normalized) << '\n';
}

void write_element_csv(const std::string& path, const Mesh& mesh,
                       const ElementFields& fields) {
  std::ofstream out = open_out(path);
  out << "element";
  for (const auto& [name, values] : fields) {
    if (values.size() != mesh.n_elements())
      throw ValidationError("field " + name + " not sized to element count");
    out << ',' << name;
  }
  out << '\n';
  for (int e = 0; e < mesh.n_elements(); ++e) {
    out << e;
    for (const auto& [name, values] : fields) out << ',' << num(values[e]);
    out << '\n';
  }
}

void write_vtk(const std::string& path, const Mesh& mesh,
               const ElementFields& fields) {
  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "per-element fields\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_nodes() << " double\n";
  for (const Vec2& p : mesh.nodes)
    out << num(p[0]) << ' ' << num(p[1]) << " 0\n";
  out << "CELLS " << mesh.n_elements() << ' ' << 4 * mesh.n_elements() << '\n';
  for (const auto& el : mesh.elements)
    out << "3 " << el[0] << ' ' << el[1] << ' ' << el[2] << '\n';
  out << "CELL_TYPES " << mesh.n_elements() << '\n';
  for (int e = 0; e < mesh.n_elements(); ++e) out << "5\n";
  out << "CELL_DATA " << mesh.n_elements() << '\n';
  for (const auto& [name, values] : fields) {
    if (values.size() != mesh.n_elements())
      throw ValidationError("field " + name + " not sized to element count");
    out << "SCALARS " << name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int e = 0; e < mesh.n_elements(); ++e) out << num(values[e]) << '\n';
  }
}

VecX read_element_csv_column(const std::string& path,
                             const std::string& column) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError(path + ": empty file");

  int col = -1;
  {
    std::stringstream header(line);
    std::string name;
    for (int i = 0; std::getline(header, name, ','); ++i)
      if (name == column) col = i;
  }
  if (col < 0) throw ValidationError(path + ": no column " + column);

  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    for (int i = 0; i <= col; ++i)
      if (!std::getline(row, cell, ','))
        throw ValidationError(path + ": short row");
    values.push_back(std::stod(cell));
  }
  return Eigen::Map<const VecX>(values.data(), values.size());
}

}  // namespace verifem
