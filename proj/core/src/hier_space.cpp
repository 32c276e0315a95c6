#include "verifem/hier_space.hpp"

#include <map>

namespace verifem {

HierSpace build_hier_space(const Mesh& mesh, const std::vector<int>& elems,
                           int degree) {
  HierSpace s(degree);
  s.elems = elems;

  std::map<int, int> node_dof;
  std::map<int, int> edge_dof;  // first dof of the edge block
  for (int e : elems) {
    for (int a = 0; a < 3; ++a) node_dof.emplace(mesh.elements[e][a], -1);
    for (int k = 0; k < 3; ++k) edge_dof.emplace(mesh.element_edges[e][k], -1);
  }

  int next = 0;
  for (auto& [n, dof] : node_dof) {
    dof = next++;
    s.nodes.push_back(n);
    s.info.push_back({TriBasis::Dof::vertex, n, 1});
  }
  const int per_edge = degree - 1;
  for (auto& [g, dof] : edge_dof) {
    dof = next;
    next += per_edge;
    s.edges.push_back(g);
    for (int k = 2; k <= degree; ++k)
      s.info.push_back({TriBasis::Dof::edge, g, k});
  }

  s.elem_dofs.resize(elems.size());
  s.orient.resize(elems.size());
  for (size_t li = 0; li < elems.size(); ++li) {
    const int e = elems[li];
    for (int k = 0; k < 3; ++k) {
      const int g = mesh.element_edges[e][k];
      const int a = mesh.elements[e][(k + 1) % 3];
      s.orient[li][k] = a == mesh.edges[g].n0 ? 1 : -1;
    }
    for (const auto& d : s.basis.dofs()) {
      int dof = -1;
      if (d.kind == TriBasis::Dof::vertex) {
        dof = node_dof.at(mesh.elements[e][d.entity]);
      } else if (d.kind == TriBasis::Dof::edge) {
        dof = edge_dof.at(mesh.element_edges[e][d.entity]) + d.order - 2;
      } else {
        dof = next++;
        s.info.push_back({TriBasis::Dof::interior, e, d.order});
      }
      s.elem_dofs[li].push_back(dof);
    }
  }
  s.n_scalar = next;
  return s;
}

std::vector<char> hier_fixed(const Mesh& mesh, const LoadCase& loads,
                             const HierSpace& space) {
  const NodeConstraints nc = node_constraints(mesh, loads);
  std::vector<char> fixed(2 * space.n_scalar, 0);
  for (int j = 0; j < space.n_scalar; ++j) {
    const auto& d = space.info[j];
    if (d.kind == TriBasis::Dof::vertex) {
      for (int c = 0; c < 2; ++c)
        fixed[2 * j + c] = nc.fixed[2 * d.entity + c] ? 1 : 0;
    } else if (d.kind == TriBasis::Dof::edge) {
      if (mesh.edges[d.entity].tag == EdgeTag::dirichlet)
        for (int c = 0; c < 2; ++c)
          fixed[2 * j + c] = loads.boundary[d.entity].fix[c] ? 1 : 0;
    }
  }
  return fixed;
}

}  // namespace verifem
