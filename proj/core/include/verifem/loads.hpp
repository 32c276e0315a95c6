#pragma once

#include <array>
#include <vector>

#include "verifem/mesh.hpp"
#include "verifem/types.hpp"

namespace verifem {

// Boundary data for one edge, degree-1 polynomials stored as values at the
// canonical endpoints: row r = value at (r == 0 ? n0 : n1), column c =
// component. A component is either displacement-prescribed (fix[c]) with data
// in disp, or traction-loaded with data in traction (the physical traction,
// outward normal). A dirichlet-tagged edge fixes at least one component; a
// symmetry condition fixes exactly one. Neumann edges fix none.
struct EdgeBC {
  std::array<bool, 2> fix{false, false};
  Mat2 disp = Mat2::Zero();
  Mat2 traction = Mat2::Zero();
};

// Loading of one problem: per-edge boundary data plus an affine body force
// f(x) = body_c + body_g x, all of polynomial degree <= 1 so they remain
// exactly representable under uniform refinement.
struct LoadCase {
  std::vector<EdgeBC> boundary;  // size = mesh.n_edges(), interior entries idle
  Vec2 body_c = Vec2::Zero();
  Mat2 body_g = Mat2::Zero();

  Vec2 body_force(const Vec2& x) const { return body_c + body_g * x; }
  // True when component c of edge g carries known traction data (a neumann
  // edge, or the unfixed component of a dirichlet edge).
  bool traction_known(const Mesh& mesh, int g, int c) const;
};

// Checks tag/data agreement and that dirichlet values of adjacent edges agree
// at shared nodes. Throws ValidationError.
void validate_loads(const Mesh& mesh, const LoadCase& loads);

// Transfers a load case across one refinement step; exact because the data is
// degree 1 along each edge.
LoadCase refine_loads(const Mesh& coarse, const RefineStep& step,
                      const LoadCase& loads);

// Per-node displacement constraints implied by the dirichlet edges: fixed
// flag and prescribed value for each of the 2*n_nodes scalar dofs.
struct NodeConstraints {
  std::vector<char> fixed;
  VecX value;
};
NodeConstraints node_constraints(const Mesh& mesh, const LoadCase& loads);

}  // namespace verifem
