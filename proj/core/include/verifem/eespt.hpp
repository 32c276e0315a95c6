#pragma once

#include <vector>

#include "verifem/equil_common.hpp"
#include "verifem/fem.hpp"
#include "verifem/loads.hpp"
#include "verifem/mesh.hpp"
#include "verifem/types.hpp"

namespace verifem {

// Per-edge traction targets: the two vertex-weighted fields whose sum equals
// the canonical FE traction projection and which carry zero moment against
// the opposite endpoint's hat. Row k of each matrix is the value at endpoint
// k of the edge, columns are components.
struct EdgeTargets {
  Mat2 at_n0 = Mat2::Zero();  // field attached to vertex n0
  Mat2 at_n1 = Mat2::Zero();  // field attached to vertex n1
};

// Solves the 8x8 local moment/sum system on every edge.
std::vector<EdgeTargets> eespt_targets(const Mesh& mesh,
                                       const FemSolution& sol,
                                       const LoadCase& loads);

// Patch traction system of one vertex: unknown vertex-weighted tractions on
// the spokes, tested against the broken-linear space on the patch elements.
struct PatchTractionSystem {
  int vertex = -1;
  std::vector<int> spokes;  // 4 unknowns per spoke: [n0x n0y n1x n1y]
  std::vector<int> elems;   // ascending; test dof = 6*pos + 2*local + comp
  int n_tr = 0;
  MatX a;          // n_tr rows, one column per broken test dof
  VecX rhs;        // per test dof; nonzero only at the patch vertex rows
  std::vector<int> retained;  // test dofs kept after kernel fixing
  std::vector<int> dropped;   // test dofs fixed by the deterministic rule
  MatX weight;     // cost matrix, block 4x4 per spoke, plus diagonal penalty
                   // terms at the coefficients of known boundary values
  VecX target;
};

// Assembles the system, removes the test-space kernel (continuous patch
// fields vanishing on boundary spokes) by fixing dofs in ascending
// (element, local node, component) order, and verifies full column rank of
// the retained constraint block.
PatchTractionSystem build_patch_system(const Mesh& mesh,
                                       const Material& material,
                                       const FemSolution& sol,
                                       const LoadCase& loads,
                                       const std::vector<EdgeTargets>& targets,
                                       int vertex, CostKind cost,
                                       double penalty);

// Minimizes the weighted distance to the target under the retained
// constraints; returns the stacked spoke coefficients.
VecX solve_patch_system(const PatchTractionSystem& system);

// Full pipeline: targets, one patch solve per vertex, and edge-wise summation
// of the two endpoint contributions.
TractionField eespt_tractions(const Mesh& mesh, const Material& material,
                              const FemSolution& sol, const LoadCase& loads,
                              CostKind cost, double penalty = 1e5);

}  // namespace verifem
