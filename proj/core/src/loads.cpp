#include "verifem/loads.hpp"

#include <cmath>

namespace verifem {

bool LoadCase::traction_known(const Mesh& mesh, int g, int c) const {
  const Edge& ed = mesh.edges[g];
  if (!ed.on_boundary()) return false;
  if (ed.tag == EdgeTag::neumann) return true;
  return !boundary[g].fix[c];
}

void validate_loads(const Mesh& mesh, const LoadCase& loads) {
  if (static_cast<int>(loads.boundary.size()) != mesh.n_edges())
    throw ValidationError("loads: boundary data size does not match mesh");

  for (int g = 0; g < mesh.n_edges(); ++g) {
    const Edge& ed = mesh.edges[g];
    const EdgeBC& bc = loads.boundary[g];
    const bool any_fix = bc.fix[0] || bc.fix[1];
    if (!ed.on_boundary()) {
      if (any_fix)
        throw ValidationError("loads: interior edge with displacement data");
      continue;
    }
    if (ed.tag == EdgeTag::dirichlet && !any_fix)
      throw ValidationError("loads: dirichlet edge fixes no component");
    if (ed.tag == EdgeTag::neumann && any_fix)
      throw ValidationError("loads: neumann edge fixes a component");
  }

  // Prescribed values of edges sharing a node must agree there.
  const double tol = 1e-12 * std::max(1.0, mesh.bbox_diagonal());
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    for (int c = 0; c < 2; ++c) {
      bool seen = false;
      double val = 0.0;
      for (int g : mesh.node_edges[i]) {
        const Edge& ed = mesh.edges[g];
        if (!ed.on_boundary() || !loads.boundary[g].fix[c]) continue;
        const int r = ed.n0 == i ? 0 : 1;
        const double v = loads.boundary[g].disp(r, c);
        if (seen && std::abs(v - val) > tol)
          throw ValidationError(
              "loads: conflicting dirichlet values at node " +
              std::to_string(i));
        seen = true;
        val = v;
      }
    }
  }
}

LoadCase refine_loads(const Mesh& coarse, const RefineStep& step,
                      const LoadCase& loads) {
  LoadCase fine;
  fine.body_c = loads.body_c;
  fine.body_g = loads.body_g;
  fine.boundary.assign(step.fine.n_edges(), EdgeBC{});
  for (int g = 0; g < step.fine.n_edges(); ++g) {
    const int pg = step.parent_edge[g];
    if (pg < 0) continue;
    const EdgeBC& src = loads.boundary[pg];
    EdgeBC& dst = fine.boundary[g];
    dst.fix = src.fix;
    const Edge& fe = step.fine.edges[g];
    const Edge& ce = coarse.edges[pg];
    for (int r = 0; r < 2; ++r) {
      const int node = r == 0 ? fe.n0 : fe.n1;
      Eigen::RowVector2d disp, trac;
      if (node == ce.n0) {
        disp = src.disp.row(0);
        trac = src.traction.row(0);
      } else if (node == ce.n1) {
        disp = src.disp.row(1);
        trac = src.traction.row(1);
      } else {  // midpoint
        disp = 0.5 * (src.disp.row(0) + src.disp.row(1));
        trac = 0.5 * (src.traction.row(0) + src.traction.row(1));
      }
      dst.disp.row(r) = disp;
      dst.traction.row(r) = trac;
    }
  }
  return fine;
}

NodeConstraints node_constraints(const Mesh& mesh, const LoadCase& loads) {
  NodeConstraints nc;
  nc.fixed.assign(2 * mesh.n_nodes(), 0);
  nc.value = VecX::Zero(2 * mesh.n_nodes());
  for (int g = 0; g < mesh.n_edges(); ++g) {
    const Edge& ed = mesh.edges[g];
    if (!ed.on_boundary()) continue;
    const EdgeBC& bc = loads.boundary[g];
    for (int c = 0; c < 2; ++c) {
      if (!bc.fix[c]) continue;
      nc.fixed[2 * ed.n0 + c] = 1;
      nc.fixed[2 * ed.n1 + c] = 1;
      nc.value[2 * ed.n0 + c] = bc.disp(0, c);
      nc.value[2 * ed.n1 + c] = bc.disp(1, c);
    }
  }
  return nc;
}

}  // namespace verifem
