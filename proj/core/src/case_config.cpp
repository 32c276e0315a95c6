#include "verifem/case_config.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "verifem/eespt.hpp"
#include "verifem/eet.hpp"
#include "verifem/element_solve.hpp"
#include "verifem/fem.hpp"
#include "verifem/fixtures.hpp"
#include "verifem/mesh_io.hpp"
#include "verifem/reference.hpp"
#include "verifem/spet.hpp"

namespace verifem {
namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& what) {
  std::ostringstream msg;
  msg << origin << ":" << line << ": " << what;
  throw ValidationError(msg.str());
}

double parse_num(const std::string& origin, int line, const std::string& s) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) fail(origin, line, "trailing characters in '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(origin, line, "expected a number, got '" + s + "'");
  }
}

int parse_int(const std::string& origin, int line, const std::string& s) {
  double v = parse_num(origin, line, s);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) fail(origin, line, "expected an integer, got '" + s + "'");
  return i;
}

std::vector<double> parse_nums(const std::string& origin, int line,
                               const std::string& s, size_t count) {
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_num(origin, line, tok));
  if (out.size() != count) {
    std::ostringstream msg;
    msg << "expected " << count << " numbers, got " << out.size();
    fail(origin, line, msg.str());
  }
  return out;
}

CostKind parse_cost(const std::string& origin, int line, const std::string& s) {
  if (s == "J0") return CostKind::J0;
  if (s == "J1") return CostKind::J1;
  if (s == "J2") return CostKind::J2;
  fail(origin, line, "unknown cost function '" + s + "'");
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Estimate {
  double theta = 0.0;
  VecX element_sq;
};

Estimate run_method(const Mesh& mesh, const Material& material,
                    const FemSolution& sol, const LoadCase& loads,
                    const std::string& method, CostKind cost, int k,
                    double penalty) {
  if (method == "spet") {
    SpetResult r = spet_estimate(mesh, material, sol, loads, 4);
    return {r.theta, std::move(r.element_sq)};
  }
  TractionField tr =
      method == "eet" ? eet_tractions(mesh, material, sol, loads, cost)
                      : eespt_tractions(mesh, material, sol, loads, cost, penalty);
  AdmissibleStress recon = element_dual_stress(mesh, material, loads, tr, 1 + k);
  auto [theta, esq] = cre(mesh, material, sol, recon);
  return {theta, std::move(esq)};
}

std::string method_label(const std::string& method) {
  std::string out = method;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

}  // namespace

CaseConfig parse_config(std::istream& in, const std::string& origin) {
  CaseConfig config;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(origin, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "case" && section != "material" && section != "loads")
        fail(origin, line, "unknown section [" + section + "]");
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) fail(origin, line, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty()) fail(origin, line, "expected key = value");
    if (section == "case") {
      if (key == "fixture") {
        config.fixture = value;
      } else if (key == "mesh") {
        config.mesh_path = value;
      } else if (key == "methods") {
        config.methods = split_list(value);
      } else if (key == "costs") {
        config.costs.clear();
        for (const auto& c : split_list(value))
          config.costs.push_back(parse_cost(origin, line, c));
      } else if (key == "k") {
        config.k = parse_int(origin, line, value);
      } else if (key == "penalty") {
        config.penalty = parse_num(origin, line, value);
      } else if (key == "reference_levels") {
        config.reference_levels = parse_int(origin, line, value);
      } else if (key == "output_dir") {
        config.output_dir = value;
      } else if (key == "timing_reps") {
        config.timing_reps = parse_int(origin, line, value);
      } else {
        fail(origin, line, "unknown key '" + key + "' in [case]");
      }
    } else if (section == "material") {
      if (key == "young") {
        config.material.young = parse_num(origin, line, value);
      } else if (key == "poisson") {
        config.material.poisson = parse_num(origin, line, value);
      } else {
        fail(origin, line, "unknown key '" + key + "' in [material]");
      }
    } else if (section == "loads") {
      if (key == "body_force") {
        auto v = parse_nums(origin, line, value, 2);
        config.body_c = Vec2(v[0], v[1]);
        config.has_body = true;
      } else if (key == "body_gradient") {
        auto v = parse_nums(origin, line, value, 4);
        config.body_g << v[0], v[1], v[2], v[3];
        config.has_body = true;
      } else {
        fail(origin, line, "unknown key '" + key + "' in [loads]");
      }
    } else {
      fail(origin, line, "key before any section header");
    }
  }
  return config;
}

CaseConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path);
  return parse_config(in, path);
}

void validate_config(const CaseConfig& config) {
  if (config.fixture.empty() == config.mesh_path.empty())
    throw ValidationError("config must set exactly one of fixture and mesh");
  if (config.methods.empty())
    throw ValidationError("config must request at least one method");
  for (const auto& m : config.methods)
    if (m != "eet" && m != "spet" && m != "eespt")
      throw ValidationError("unknown method '" + m + "'");
  if (config.costs.empty())
    throw ValidationError("config must request at least one cost function");
  if (config.k < 1 || config.k > 3)
    throw ValidationError("k must be 1, 2 or 3");
  if (!(config.penalty > 0.0))
    throw ValidationError("penalty must be positive");
  if (config.reference_levels < 0)
    throw ValidationError("reference_levels must be non-negative");
  if (config.timing_reps < 1)
    throw ValidationError("timing_reps must be at least 1");
  if (!(config.material.young > 0.0))
    throw ValidationError("young must be positive");
  if (!(config.material.poisson > -1.0 && config.material.poisson < 0.5))
    throw ValidationError("poisson must lie in (-1, 0.5)");
}

CaseResult run_case(const CaseConfig& config) {
  validate_config(config);

  Mesh mesh;
  LoadCase loads;
  std::string label;
  if (!config.fixture.empty()) {
    Fixture fx = make_fixture(config.fixture);
    mesh = std::move(fx.mesh);
    loads = std::move(fx.loads);
    label = config.fixture;
  } else {
    MeshCase mc = read_mesh_file(config.mesh_path);
    mesh = std::move(mc.mesh);
    loads = std::move(mc.loads);
    label = config.mesh_path;
  }
  if (config.has_body) {
    loads.body_c = config.body_c;
    loads.body_g = config.body_g;
  }
  const Material& material = config.material;

  CaseResult result;
  const char* env = std::getenv("VERIFEM_OUTPUT_DIR");
  result.output_dir = env != nullptr && *env != '\0' ? env : config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(result.output_dir, ec);
  if (ec)
    throw ValidationError("cannot create output directory " +
                          result.output_dir + ": " + ec.message());

  VecX areas(mesh.elements.size());
  for (size_t e = 0; e < mesh.elements.size(); ++e)
    areas[static_cast<int>(e)] = mesh.area(static_cast<int>(e));

  try {
    FemSolution sol = assemble_solve(mesh, material, loads);

    Timer ref_timer;
    ReferenceError ref =
        reference_error(mesh, material, loads, sol, config.reference_levels);
    double seconds_reference = ref_timer.seconds();
    result.reference_value = ref.value;

    for (const auto& method : config.methods) {
      // SPET has no traction cost function; it contributes a single row.
      std::vector<CostKind> costs =
          method == "spet" ? std::vector<CostKind>{CostKind::J0} : config.costs;
      for (CostKind cost : costs) {
        Estimate est;
        std::vector<double> times;
        for (int rep = 0; rep < config.timing_reps; ++rep) {
          Timer t;
          est = run_method(mesh, material, sol, loads, method, cost, config.k,
                           config.penalty);
          times.push_back(t.seconds());
        }
        std::string cost_label = method == "spet" ? "-" : cost_name(cost);
        ErrorReport report =
            effectivity(method_label(method), cost_label, est.theta,
                        est.element_sq, ref.value, ref.element_sq);
        report.seconds_reconstruction = median(times);
        report.seconds_reference = seconds_reference;
        result.reports.push_back(std::move(report));
      }
    }
  } catch (const ValidationError& e) {
    throw ValidationError("case " + label + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError("case " + label + ": " + e.what());
  }

  // Normalize CPU cost against the first EET row (first row otherwise).
  double base = result.reports.front().seconds_reconstruction;
  for (const auto& r : result.reports)
    if (r.method == "EET") {
      base = r.seconds_reconstruction;
      break;
    }
  for (const auto& r : result.reports) {
    ReportRow row;
    row.method = r.method;
    row.cost = r.cost;
    row.theta = r.theta;
    row.ref_error = r.ref_error;
    row.eta = r.eta;
    row.cpu_normalized =
        base > 0.0 ? r.seconds_reconstruction / base : 1.0;
    result.rows.push_back(std::move(row));
  }

  auto out_path = [&](const std::string& name) {
    return (std::filesystem::path(result.output_dir) / name).string();
  };
  write_summary_csv(out_path("summary.csv"), result.rows);
  for (const auto& r : result.reports) {
    VecX density = r.element_sq.cwiseQuotient(areas);
    ElementFields fields = {{"estimate_sq", r.element_sq},
                            {"estimate_density", density},
                            {"ref_sq", r.ref_element_sq},
                            {"local_eta", r.local_eta}};
    std::string stem = "fields_" + r.method;
    if (r.cost != "-") stem += "_" + r.cost;
    std::transform(stem.begin(), stem.end(), stem.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    write_element_csv(out_path(stem + ".csv"), mesh, fields);
    write_vtk(out_path(stem + ".vtk"), mesh, fields);
  }
  return result;
}

}  // namespace verifem
