#include "verifem/mesh_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace verifem {

namespace {

struct Rule {
  enum class Kind { line, circle, edge, any } kind = Kind::any;
  int axis = 0;
  double value = 0.0;
  Vec2 center = Vec2::Zero();
  Vec2 pa = Vec2::Zero(), pb = Vec2::Zero();  // edge predicate endpoints
  EdgeBC bc;
  bool dirichlet = false;

  bool matches(const Vec2& a, const Vec2& b) const {
    constexpr double tol = 1e-9;
    switch (kind) {
      case Kind::line:
        return std::abs(a[axis] - value) < tol &&
               std::abs(b[axis] - value) < tol;
      case Kind::circle:
        return std::abs((a - center).norm() - value) < tol &&
               std::abs((b - center).norm() - value) < tol;
      case Kind::edge:
        return (a == pa && b == pb) || (a == pb && b == pa);
      case Kind::any:
        return true;
    }
    return false;
  }
};

[[noreturn]] void fail(const std::string& origin, int lineno,
                       const std::string& what) {
  throw ValidationError(origin + ":" + std::to_string(lineno) + ": " + what);
}

// Next non-empty line with comments stripped.
bool next_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream probe(line);
    std::string tok;
    if (probe >> tok) return true;
  }
  return false;
}

EdgeBC parse_condition(std::istringstream& in, const std::string& origin,
                       int lineno, bool* dirichlet) {
  std::string kind;
  if (!(in >> kind)) fail(origin, lineno, "missing boundary condition");
  EdgeBC bc;
  if (kind == "neumann") {
    Vec2 t;
    if (!(in >> t[0] >> t[1])) fail(origin, lineno, "neumann needs tx ty");
    bc.traction.row(0) = t.transpose();
    bc.traction.row(1) = t.transpose();
    *dirichlet = false;
  } else if (kind == "dirichlet") {
    int fx = 0, fy = 0;
    Vec2 u;
    if (!(in >> fx >> fy >> u[0] >> u[1]))
      fail(origin, lineno, "dirichlet needs fx fy ux uy");
    if ((fx != 0 && fx != 1) || (fy != 0 && fy != 1) || (fx == 0 && fy == 0))
      fail(origin, lineno, "dirichlet mask must fix at least one component");
    bc.fix = {fx == 1, fy == 1};
    bc.disp.row(0) = u.transpose();
    bc.disp.row(1) = u.transpose();
    Vec2 t = Vec2::Zero();
    if (in >> t[0]) {
      if (!(in >> t[1])) fail(origin, lineno, "trailing traction needs tx ty");
      bc.traction.row(0) = t.transpose();
      bc.traction.row(1) = t.transpose();
    }
    *dirichlet = true;
  } else {
    fail(origin, lineno, "unknown condition '" + kind + "'");
  }
  std::string extra;
  if (in >> extra) fail(origin, lineno, "trailing tokens after condition");
  return bc;
}

}  // namespace

MeshCase read_mesh(std::istream& in, const std::string& origin) {
  int lineno = 0;
  std::string line, tok;

  if (!next_line(in, line, lineno)) fail(origin, lineno, "empty mesh file");
  {
    std::istringstream head(line);
    int version = 0;
    if (!(head >> tok >> version) || tok != "verifem-mesh" || version != 1)
      fail(origin, lineno, "expected header 'verifem-mesh 1'");
  }

  if (!next_line(in, line, lineno)) fail(origin, lineno, "missing nodes");
  int n_nodes = 0;
  {
    std::istringstream head(line);
    if (!(head >> tok >> n_nodes) || tok != "nodes" || n_nodes < 3)
      fail(origin, lineno, "expected 'nodes <count>'");
  }
  std::vector<Vec2> nodes(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    if (!next_line(in, line, lineno)) fail(origin, lineno, "missing node row");
    std::istringstream row(line);
    if (!(row >> nodes[i][0] >> nodes[i][1]))
      fail(origin, lineno, "node row needs x y");
  }

  if (!next_line(in, line, lineno)) fail(origin, lineno, "missing elements");
  int n_elems = 0;
  {
    std::istringstream head(line);
    if (!(head >> tok >> n_elems) || tok != "elements" || n_elems < 1)
      fail(origin, lineno, "expected 'elements <count>'");
  }
  std::vector<std::array<int, 3>> elements(n_elems);
  for (int e = 0; e < n_elems; ++e) {
    if (!next_line(in, line, lineno))
      fail(origin, lineno, "missing element row");
    std::istringstream row(line);
    if (!(row >> elements[e][0] >> elements[e][1] >> elements[e][2]))
      fail(origin, lineno, "element row needs three node ids");
  }

  if (!next_line(in, line, lineno) ||
      !(std::istringstream(line) >> tok) || tok != "boundary")
    fail(origin, lineno, "expected 'boundary'");

  std::vector<Rule> rules;
  while (next_line(in, line, lineno)) {
    std::istringstream row(line);
    Rule rule;
    std::string pred;
    row >> pred;
    if (pred == "on_line") {
      std::string axis;
      if (!(row >> axis >> rule.value) || (axis != "x" && axis != "y"))
        fail(origin, lineno, "on_line needs x|y <value>");
      rule.kind = Rule::Kind::line;
      rule.axis = axis == "x" ? 0 : 1;
    } else if (pred == "on_circle") {
      if (!(row >> rule.center[0] >> rule.center[1] >> rule.value))
        fail(origin, lineno, "on_circle needs cx cy r");
      rule.kind = Rule::Kind::circle;
    } else if (pred == "edge") {
      int a = 0, b = 0;
      if (!(row >> a >> b) || a < 0 || a >= n_nodes || b < 0 || b >= n_nodes)
        fail(origin, lineno, "edge needs two valid node ids");
      rule.kind = Rule::Kind::edge;
      rule.pa = nodes[a];
      rule.pb = nodes[b];
    } else if (pred == "default") {
      rule.kind = Rule::Kind::any;
    } else {
      fail(origin, lineno, "unknown predicate '" + pred + "'");
    }
    rule.bc = parse_condition(row, origin, lineno, &rule.dirichlet);
    rules.push_back(rule);
  }
  if (rules.empty()) fail(origin, lineno, "boundary section has no rules");

  const auto find_rule = [&rules](const Vec2& a, const Vec2& b) -> const Rule* {
    for (const Rule& r : rules)
      if (r.matches(a, b)) return &r;
    return nullptr;
  };

  MeshCase out;
  out.mesh = build_mesh(
      std::move(nodes), std::move(elements),
      [&](const Vec2& a, const Vec2& b) {
        const Rule* r = find_rule(a, b);
        if (!r)
          throw ValidationError(
              origin + ": no boundary rule matches the edge near (" +
              std::to_string(a[0]) + ", " + std::to_string(a[1]) + ")");
        return r->dirichlet ? EdgeTag::dirichlet : EdgeTag::neumann;
      });

  out.loads.boundary.assign(out.mesh.n_edges(), EdgeBC{});
  for (int g = 0; g < out.mesh.n_edges(); ++g) {
    const Edge& ed = out.mesh.edges[g];
    if (!ed.on_boundary()) continue;
    const Rule* r =
        find_rule(out.mesh.nodes[ed.n0], out.mesh.nodes[ed.n1]);
    out.loads.boundary[g] = r->bc;
  }
  validate_loads(out.mesh, out.loads);
  return out;
}

MeshCase read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  return read_mesh(in, path);
}

void write_mesh_file(const std::string& path, const Mesh& mesh,
                     const LoadCase& loads) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out.precision(17);
  out << "verifem-mesh 1\n";
  out << "nodes " << mesh.n_nodes() << '\n';
  for (const Vec2& p : mesh.nodes) out << p[0] << ' ' << p[1] << '\n';
  out << "elements " << mesh.n_elements() << '\n';
  for (const auto& el : mesh.elements)
    out << el[0] << ' ' << el[1] << ' ' << el[2] << '\n';
  out << "boundary\n";
  for (int g = 0; g < mesh.n_edges(); ++g) {
    const Edge& ed = mesh.edges[g];
    if (!ed.on_boundary()) continue;
    const EdgeBC& bc = loads.boundary[g];
    if ((bc.disp.row(0) - bc.disp.row(1)).cwiseAbs().maxCoeff() > 0.0 ||
        (bc.traction.row(0) - bc.traction.row(1)).cwiseAbs().maxCoeff() > 0.0)
      throw ValidationError(
          "write_mesh_file: only constant per-edge data is expressible");
    out << "edge " << ed.n0 << ' ' << ed.n1 << ' ';
    if (ed.tag == EdgeTag::dirichlet) {
      out << "dirichlet " << (bc.fix[0] ? 1 : 0) << ' ' << (bc.fix[1] ? 1 : 0)
          << ' ' << bc.disp(0, 0) << ' ' << bc.disp(0, 1);
      if (bc.traction.row(0).cwiseAbs().maxCoeff() > 0.0)
        out << ' ' << bc.traction(0, 0) << ' ' << bc.traction(0, 1);
    } else {
      out << "neumann " << bc.traction(0, 0) << ' ' << bc.traction(0, 1);
    }
    out << '\n';
  }
}

}  // namespace verifem
