#include "verifem/estimator.hpp"

#include <cmath>
#include <limits>

#include "verifem/quadrature.hpp"

namespace verifem {

std::pair<double, VecX> cre(const Mesh& mesh, const Material& material,
                            const FemSolution& sol,
                            const AdmissibleStress& admissible) {
  const Mat3 comp = material.compliance();
  const TriRule& rule = triangle_rule(2 * admissible.basis.degree());
  VecX esq = VecX::Zero(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double area = mesh.area(e);
    double acc = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 d =
          admissible.eval(mesh, material, e, rule.points[q]) - sol.stress[e];
      acc += 2.0 * area * rule.weights[q] * d.dot(comp * d);
    }
    esq[e] = acc;
  }
  return {std::sqrt(esq.sum()), esq};
}

bool prager_synge_check(double theta, double reference_error) {
  return theta >= reference_error * (1.0 - 1e-9);
}

ErrorReport effectivity(std::string method, std::string cost, double theta,
                        VecX element_sq, double ref_error,
                        VecX ref_element_sq) {
  ErrorReport r;
  r.method = std::move(method);
  r.cost = std::move(cost);
  r.theta = theta;
  r.ref_error = ref_error;
  r.eta = ref_error > 0.0 ? theta / ref_error
                          : std::numeric_limits<double>::quiet_NaN();
  r.element_sq = std::move(element_sq);
  r.ref_element_sq = std::move(ref_element_sq);

  const int n = static_cast<int>(r.element_sq.size());
  r.local_eta = VecX::Constant(n, std::numeric_limits<double>::quiet_NaN());
  double max_ref = 0.0;
  for (int e = 0; e < n; ++e)
    max_ref = std::max(max_ref, std::sqrt(r.ref_element_sq[e]));
  for (int e = 0; e < n; ++e) {
    const double ref_e = std::sqrt(r.ref_element_sq[e]);
    if (ref_e > 1e-14 * max_ref)
      r.local_eta[e] = std::sqrt(r.element_sq[e]) / ref_e;
  }
  return r;
}

}  // namespace verifem
