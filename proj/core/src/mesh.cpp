#include "verifem/mesh.hpp"

#include <algorithm>
#include <map>

namespace verifem {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

double Mesh::area(int e) const {
  const auto& el = elements[e];
  return signed_area(nodes[el[0]], nodes[el[1]], nodes[el[2]]);
}

Vec2 Mesh::centroid(int e) const {
  const auto& el = elements[e];
  return (nodes[el[0]] + nodes[el[1]] + nodes[el[2]]) / 3.0;
}

Eigen::Matrix<double, 3, 2> Mesh::barycentric_gradients(int e) const {
  const auto& el = elements[e];
  const Vec2& p0 = nodes[el[0]];
  const Vec2& p1 = nodes[el[1]];
  const Vec2& p2 = nodes[el[2]];
  const double inv2a = 1.0 / (2.0 * area(e));
  Eigen::Matrix<double, 3, 2> g;
  g.row(0) = inv2a * Vec2(p1.y() - p2.y(), p2.x() - p1.x()).transpose();
  g.row(1) = inv2a * Vec2(p2.y() - p0.y(), p0.x() - p2.x()).transpose();
  g.row(2) = inv2a * Vec2(p0.y() - p1.y(), p1.x() - p0.x()).transpose();
  return g;
}

double Mesh::edge_length(int g) const {
  const Edge& ed = edges[g];
  return (nodes[ed.n1] - nodes[ed.n0]).norm();
}

Vec2 Mesh::edge_tangent(int g) const {
  const Edge& ed = edges[g];
  return (nodes[ed.n1] - nodes[ed.n0]).normalized();
}

Vec2 Mesh::edge_normal(int g) const {
  const Edge& ed = edges[g];
  const Vec2 t = edge_tangent(g);
  Vec2 n(t.y(), -t.x());
  const Vec2 mid = 0.5 * (nodes[ed.n0] + nodes[ed.n1]);
  if (n.dot(centroid(ed.elem[0]) - mid) > 0.0) n = -n;
  return n;
}

int Mesh::edge_sign(int g, int e) const {
  return edges[g].elem[0] == e ? 1 : -1;
}

int Mesh::local_edge(int g, int e) const {
  const auto& ee = element_edges[e];
  for (int k = 0; k < 3; ++k)
    if (ee[k] == g) return k;
  return -1;
}

int Mesh::local_node(int n, int e) const {
  const auto& el = elements[e];
  for (int k = 0; k < 3; ++k)
    if (el[k] == n) return k;
  return -1;
}

double Mesh::bbox_diagonal() const {
  Vec2 lo = nodes.front(), hi = nodes.front();
  for (const Vec2& p : nodes) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

Mesh build_mesh(std::vector<Vec2> nodes,
                std::vector<std::array<int, 3>> elements,
                const EdgeTagger& tag_boundary) {
  Mesh m;
  m.nodes = std::move(nodes);
  m.elements = std::move(elements);

  const int nn = m.n_nodes();
  const int ne = m.n_elements();
  if (nn < 3 || ne < 1) throw ValidationError("mesh: needs nodes and elements");

  for (int e = 0; e < ne; ++e) {
    for (int k = 0; k < 3; ++k) {
      const int v = m.elements[e][k];
      if (v < 0 || v >= nn)
        throw ValidationError("mesh: element " + std::to_string(e) +
                              " references node out of range");
    }
    const auto& el = m.elements[e];
    if (el[0] == el[1] || el[1] == el[2] || el[0] == el[2])
      throw ValidationError("mesh: element " + std::to_string(e) +
                            " has repeated nodes");
    if (!(m.area(e) > 0.0))
      throw ValidationError("mesh: element " + std::to_string(e) +
                            " is degenerate or not counter-clockwise");
  }

  // Derive edges; the map is keyed by (n0, n1) so iteration order is the
  // canonical edge order.
  std::map<std::pair<int, int>, Edge> edge_map;
  for (int e = 0; e < ne; ++e) {
    const auto& el = m.elements[e];
    for (int k = 0; k < 3; ++k) {
      int a = el[(k + 1) % 3], b = el[(k + 2) % 3];
      if (a > b) std::swap(a, b);
      Edge& ed = edge_map[{a, b}];
      if (ed.n0 < 0) {
        ed.n0 = a;
        ed.n1 = b;
        ed.elem[0] = e;
      } else if (ed.elem[1] < 0) {
        ed.elem[1] = e;
      } else {
        throw ValidationError("mesh: non-manifold edge (" + std::to_string(a) +
                              ", " + std::to_string(b) + ")");
      }
    }
  }

  m.edges.reserve(edge_map.size());
  std::map<std::pair<int, int>, int> edge_id;
  for (auto& [key, ed] : edge_map) {
    edge_id[key] = static_cast<int>(m.edges.size());
    m.edges.push_back(ed);
  }

  m.element_edges.assign(ne, {-1, -1, -1});
  for (int e = 0; e < ne; ++e) {
    const auto& el = m.elements[e];
    for (int k = 0; k < 3; ++k) {
      int a = el[(k + 1) % 3], b = el[(k + 2) % 3];
      if (a > b) std::swap(a, b);
      m.element_edges[e][k] = edge_id.at({a, b});
    }
  }

  m.boundary_node.assign(nn, 0);
  for (Edge& ed : m.edges) {
    if (!ed.on_boundary()) continue;
    ed.tag = tag_boundary(m.nodes[ed.n0], m.nodes[ed.n1]);
    if (ed.tag == EdgeTag::interior)
      throw ValidationError("mesh: untagged boundary edge (" +
                            std::to_string(ed.n0) + ", " +
                            std::to_string(ed.n1) + ")");
    m.boundary_node[ed.n0] = 1;
    m.boundary_node[ed.n1] = 1;
  }

  m.node_elements.assign(nn, {});
  for (int e = 0; e < ne; ++e)
    for (int k = 0; k < 3; ++k) m.node_elements[m.elements[e][k]].push_back(e);
  m.node_edges.assign(nn, {});
  for (int g = 0; g < m.n_edges(); ++g) {
    m.node_edges[m.edges[g].n0].push_back(g);
    m.node_edges[m.edges[g].n1].push_back(g);
  }
  return m;
}

RefineStep refine_once(const Mesh& mesh) {
  RefineStep step;
  step.coarse_nodes = mesh.n_nodes();

  std::vector<Vec2> nodes = mesh.nodes;
  step.node_parents.resize(mesh.n_nodes());
  for (int i = 0; i < mesh.n_nodes(); ++i) step.node_parents[i] = {i, i};
  for (int g = 0; g < mesh.n_edges(); ++g) {
    const Edge& ed = mesh.edges[g];
    nodes.push_back(0.5 * (mesh.nodes[ed.n0] + mesh.nodes[ed.n1]));
    step.node_parents.push_back({ed.n0, ed.n1});
  }
  const auto midnode = [&](int g) { return step.coarse_nodes + g; };

  std::vector<std::array<int, 3>> elements;
  elements.reserve(4 * mesh.n_elements());
  step.parent_elem.reserve(4 * mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    // Midpoint of local edge k (opposite local node k).
    const int m0 = midnode(mesh.element_edges[e][0]);
    const int m1 = midnode(mesh.element_edges[e][1]);
    const int m2 = midnode(mesh.element_edges[e][2]);
    elements.push_back({el[0], m2, m1});
    elements.push_back({m2, el[1], m0});
    elements.push_back({m1, m0, el[2]});
    elements.push_back({m0, m1, m2});
    for (int c = 0; c < 4; ++c) step.parent_elem.push_back(e);
  }

  // Children of a coarse boundary edge contain its midpoint node, which
  // identifies the parent; everything else is interior.
  const auto tagger = [&](const Vec2&, const Vec2&) { return EdgeTag::neumann; };
  Mesh fine = build_mesh(std::move(nodes), std::move(elements), tagger);
  step.parent_edge.assign(fine.n_edges(), -1);
  for (int g = 0; g < fine.n_edges(); ++g) {
    Edge& ed = fine.edges[g];
    if (!ed.on_boundary()) {
      ed.tag = EdgeTag::interior;
      continue;
    }
    const int mid = std::max(ed.n0, ed.n1);
    const int parent = mid - step.coarse_nodes;
    if (parent < 0 || parent >= mesh.n_edges() ||
        !mesh.edges[parent].on_boundary())
      throw NumericalError("refine: boundary edge lineage broken");
    step.parent_edge[g] = parent;
    ed.tag = mesh.edges[parent].tag;
  }
  step.fine = std::move(fine);
  return step;
}

Refinement refine_uniform(const Mesh& mesh, int levels) {
  if (levels < 0) throw ValidationError("refine: levels must be >= 0");
  Refinement ref;
  ref.fine = mesh;
  ref.parent_elem.resize(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) ref.parent_elem[e] = e;
  for (int l = 0; l < levels; ++l) {
    RefineStep step = refine_once(ref.fine);
    std::vector<int> parent(step.fine.n_elements());
    for (int e = 0; e < step.fine.n_elements(); ++e)
      parent[e] = ref.parent_elem[step.parent_elem[e]];
    ref.parent_elem = std::move(parent);
    ref.fine = step.fine;
    ref.steps.push_back(std::move(step));
  }
  return ref;
}

Patch vertex_patch(const Mesh& mesh, int vertex) {
  Patch p;
  p.vertex = vertex;
  p.elems = mesh.node_elements[vertex];
  p.spokes = mesh.node_edges[vertex];
  p.interior = !mesh.node_on_boundary(vertex);
  return p;
}

}  // namespace verifem
