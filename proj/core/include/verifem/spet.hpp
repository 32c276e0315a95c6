#pragma once

#include <vector>

#include "verifem/element_solve.hpp"
#include "verifem/fem.hpp"
#include "verifem/hier_space.hpp"
#include "verifem/loads.hpp"
#include "verifem/mesh.hpp"
#include "verifem/types.hpp"

namespace verifem {

// One flux-free patch problem: the local correction field around a vertex,
// driven by the FE residual weighted with that vertex's hat function.
struct PatchSolution {
  PatchSolution(int vertex, HierSpace space)
      : vertex(vertex), space(std::move(space)) {}

  int vertex;
  HierSpace space;
  VecX coeffs;              // 2 * n_scalar, zero at constrained dofs
  std::vector<char> fixed;  // per (scalar dof, component)
};

// Weak-residual load vector of the patch problem, interleaved over the space
// dofs. Rows of degree-1 vertex modes are exactly zero: the residual is only
// tested against the high-order part of the test field, which is what keeps
// free patches solvable. The remaining rows carry
//   R(la v) = int f . (la v) + int_t F . (la v) - int sigma_h : eps(la v)
// with la the hat of the patch vertex and t the traction-known components.
VecX patch_rhs(const Mesh& mesh, const Material& material,
               const FemSolution& sol, const LoadCase& loads,
               const HierSpace& space, int vertex);

// Solves the patch problem with homogeneous substitution on constrained dofs.
// Rigid motions that survive the constraints are pinned by zero-mean rows,
// which is harmless because the load vector annihilates them.
PatchSolution solve_patch(const Mesh& mesh, const Material& material,
                          const FemSolution& sol, const LoadCase& loads,
                          int vertex, int degree);

struct SpetResult {
  double theta = 0.0;
  VecX element_sq;  // per-element squared contributions, sums to theta^2
  AdmissibleStress stress;
};

// Runs every patch, accumulates the correction field and returns the global
// estimate together with the admissible stress sigma_h + K eps(sum_i e_i).
SpetResult spet_estimate(const Mesh& mesh, const Material& material,
                         const FemSolution& sol, const LoadCase& loads,
                         int degree);

}  // namespace verifem
