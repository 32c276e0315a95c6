#pragma once

#include "verifem/fem.hpp"
#include "verifem/loads.hpp"
#include "verifem/mesh.hpp"
#include "verifem/types.hpp"

namespace verifem {

// Discretization error measured against an overkill solution on the
// uniformly refined nested mesh.
struct ReferenceError {
  // Energy-difference formula; switches to the direct value when the energy
  // subtraction cancels below its roundoff floor (the two are analytically
  // equal on nested meshes, but only the direct form stays accurate at zero).
  double value = 0.0;
  double value_direct = 0.0;  // fine-mesh integration of the error field
  VecX element_sq;            // per coarse element, from the direct route
};

// Solves the refined problem and returns both routes. Nestedness makes them
// agree: the coarse solution prolongs exactly, so no projection is involved.
// Throws NumericalError when the energy difference turns negative beyond
// roundoff, which would mean the spaces are not nested.
ReferenceError reference_error(const Mesh& mesh, const Material& material,
                               const LoadCase& loads, const FemSolution& sol,
                               int levels);

// Midpoint interpolation of a nodal field through one refinement step.
VecX prolong(const RefineStep& step, const VecX& coarse_field);

}  // namespace verifem
