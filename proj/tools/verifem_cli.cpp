#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "verifem/case_config.hpp"
#include "verifem/fixtures.hpp"
#include "verifem/mesh_io.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  verifem::CaseConfig config = verifem::read_config_file(config_path);
  verifem::CaseResult result = verifem::run_case(config);
  std::printf("%-6s %-4s %14s %14s %10s %8s\n", "method", "cost", "theta",
              "ref_error", "eta", "cpu");
  for (const auto& row : result.rows)
    std::printf("%-6s %-4s %14.6e %14.6e %10.4f %8.3f\n", row.method.c_str(),
                row.cost.c_str(), row.theta, row.ref_error, row.eta,
                row.cpu_normalized);
  std::printf("wrote %s/summary.csv\n", result.output_dir.c_str());
  return 0;
}

int cmd_fixtures_list() {
  for (const auto& name : verifem::fixture_names()) {
    verifem::Fixture fx = verifem::make_fixture(name);
    std::printf("%-24s %5zu nodes %5zu elements\n", name.c_str(),
                fx.mesh.nodes.size(), fx.mesh.elements.size());
  }
  return 0;
}

int cmd_mesh_info(const std::string& path) {
  verifem::MeshCase mc = verifem::read_mesh_file(path);
  const verifem::Mesh& mesh = mc.mesh;
  int n_boundary = 0;
  int n_dirichlet = 0;
  for (size_t g = 0; g < mesh.edges.size(); ++g) {
    if (mesh.edges[g].elem[1] >= 0) continue;
    ++n_boundary;
    const auto& bc = mc.loads.boundary[g];
    if (bc.fix[0] || bc.fix[1]) ++n_dirichlet;
  }
  double area = 0.0;
  verifem::Vec2 lo = mesh.nodes.front();
  verifem::Vec2 hi = mesh.nodes.front();
  for (const auto& x : mesh.nodes) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  for (size_t e = 0; e < mesh.elements.size(); ++e)
    area += mesh.area(static_cast<int>(e));
  std::printf("nodes          %zu\n", mesh.nodes.size());
  std::printf("elements       %zu\n", mesh.elements.size());
  std::printf("edges          %zu (%d boundary)\n", mesh.edges.size(),
              n_boundary);
  std::printf("dirichlet      %d edges\n", n_dirichlet);
  std::printf("neumann        %d edges\n", n_boundary - n_dirichlet);
  std::printf("area           %.17g\n", area);
  std::printf("bounding box   [%g, %g] x [%g, %g]\n", lo.x(), hi.x(), lo.y(),
              hi.y());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verifem: guaranteed error bounds for plane-stress FE solutions"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "solve a case and write its reports");
  run->add_option("config", config_path, "case configuration file")->required();

  auto* fixtures = app.add_subcommand("fixtures", "built-in test cases");
  fixtures->require_subcommand(1);
  auto* fixtures_list = fixtures->add_subcommand("list", "print the roster");

  std::string mesh_path;
  auto* mesh = app.add_subcommand("mesh", "mesh file utilities");
  mesh->require_subcommand(1);
  auto* mesh_info = mesh->add_subcommand("info", "print mesh statistics");
  mesh_info->add_option("path", mesh_path, "mesh file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (fixtures_list->parsed()) return cmd_fixtures_list();
    if (mesh_info->parsed()) return cmd_mesh_info(mesh_path);
  } catch (const verifem::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const verifem::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
