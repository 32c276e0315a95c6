#pragma once

#include <vector>

#include "verifem/equil_common.hpp"

namespace verifem {

// Traction-moment system of one vertex. Unknowns are the moments
// b_g = int_g h phi_i per spoke edge g (two components each, in spoke
// order); the prolongation rows demand that each fan element balances its
// load vector Q_E, the enforced rows pin the moments of known traction data,
// and the weight/target pair defines the distance to the averaged FE
// tractions that is minimized over the remaining freedom.
struct NodeSystem {
  int vertex = -1;
  std::vector<int> spokes;
  std::vector<int> elems;   // retained prolongation order (dropped one absent)
  int dropped_elem = -1;    // closed fans only: highest element id of the fan
  MatX prolongation;        // n_ind x n_unk
  VecX prolongation_rhs;
  MatX enforced;            // n_enf x n_unk
  VecX enforced_rhs;
  MatX weight;              // n_unk x n_unk, SPD block diagonal
  VecX target;
  int n_unk = 0;
  int n_ind = 0;
  int n_enf = 0;
};

// Assembles the system for one vertex; verifies the load compatibility that
// the FE equilibrium guarantees at free components (NumericalError beyond
// 1e-8 relative).
NodeSystem build_node_system(const Mesh& mesh, const Material& material,
                             const FemSolution& sol, const LoadCase& loads,
                             int vertex, CostKind cost);

// Minimizes the weighted distance to the target subject to the enforced and
// prolongation rows, all of them: rows made redundant by the load
// compatibility are resolved by a rank-revealing factorization, and the
// remaining ones pin the reaction moments at partially fixed vertices.
// Returns the moments (2 per spoke).
VecX solve_node_system(const NodeSystem& system);

// Full technique: solve every vertex system and recover the edge tractions
// from the moments through the edge mass matrices.
TractionField eet_tractions(const Mesh& mesh, const Material& material,
                            const FemSolution& sol, const LoadCase& loads,
                            CostKind cost);

}  // namespace verifem
