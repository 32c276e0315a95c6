#pragma once

#include <vector>

#include "verifem/loads.hpp"
#include "verifem/mesh.hpp"
#include "verifem/types.hpp"

namespace verifem {

// Linear (p = 1) displacement solution. u holds both free and prescribed
// dofs interleaved (2i, 2i+1); stress is the constant Voigt stress per
// element; energy_sq is the squared energy norm of the whole field.
struct FemSolution {
  VecX u;
  std::vector<Vec3> stress;
  double energy_sq = 0.0;
  NodeConstraints constraints;
};

// Assembles the plane-stress stiffness, eliminates prescribed dofs by
// row/column substitution and solves with a direct sparse factorization.
// Throws NumericalError when the system is under-constrained or the residual
// check fails.
FemSolution assemble_solve(const Mesh& mesh, const Material& material,
                           const LoadCase& loads);

// Energy norm of a nodal p = 1 field (size 2*n_nodes).
double energy_norm(const Mesh& mesh, const Material& material, const VecX& u);

// Complementary energy norm of a per-element constant Voigt stress field.
double complementary_norm(const Mesh& mesh, const Material& material,
                          const std::vector<Vec3>& stress);

// Residual of the equilibrium equations at the free dofs, one entry per
// scalar dof (zero at fixed dofs); the Galerkin orthogonality check.
VecX fem_residual(const Mesh& mesh, const Material& material,
                  const LoadCase& loads, const FemSolution& sol);

}  // namespace verifem
