#pragma once

#include <string>
#include <utility>

#include "verifem/element_solve.hpp"
#include "verifem/fem.hpp"
#include "verifem/mesh.hpp"
#include "verifem/types.hpp"

namespace verifem {

// Constitutive relation error of an admissible stress paired with the FE
// displacement: global value and per-element squared contributions.
std::pair<double, VecX> cre(const Mesh& mesh, const Material& material,
                            const FemSolution& sol,
                            const AdmissibleStress& admissible);

// The hypercircle bound: the estimate must dominate the reference error up to
// roundoff slack.
bool prager_synge_check(double theta, double reference_error);

struct ErrorReport {
  std::string method;
  std::string cost;  // empty for methods without a cost function
  double theta = 0.0;
  double ref_error = 0.0;
  double eta = 0.0;
  VecX element_sq;      // estimate, squared per element
  VecX ref_element_sq;  // reference, squared per element
  VecX local_eta;       // NaN where the reference contribution vanishes
  double seconds_reconstruction = 0.0;
  double seconds_reference = 0.0;
};

// Combines estimate and reference decompositions into a report. Elements
// whose reference contribution is below 1e-14 of the largest get no local
// index (NaN).
ErrorReport effectivity(std::string method, std::string cost, double theta,
                        VecX element_sq, double ref_error,
                        VecX ref_element_sq);

}  // namespace verifem
