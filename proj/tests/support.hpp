#pragma once

#include <random>

#include "verifem/equil_common.hpp"
#include "verifem/fem.hpp"
#include "verifem/fixtures.hpp"
#include "verifem/mesh.hpp"
#include "verifem/types.hpp"

namespace vt {

using namespace verifem;

inline std::mt19937& rng() {
  static std::mt19937 gen(20240817);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

// Random point strictly inside the reference triangle.
inline Vec2 interior_point() {
  double a = uniform(0.05, 0.9);
  double b = uniform(0.05, 0.95 - a);
  return Vec2(a, b);
}

// Edge tractions of a constant Voigt stress, stored in the canonical
// orientation expected by TractionField.
inline TractionField constant_traction(const Mesh& mesh, const Vec3& sigma) {
  Mat2 s;
  s << sigma[0], sigma[2], sigma[2], sigma[1];
  TractionField field;
  field.values.resize(mesh.n_edges());
  for (int g = 0; g < mesh.n_edges(); ++g) {
    Vec2 t = s * mesh.edge_normal(g);
    field.values[g].row(0) = t.transpose();
    field.values[g].row(1) = t.transpose();
  }
  return field;
}

// Equality-constrained least squares by nullspace parameterization:
// min (x - target)' w (x - target)  s.t.  c x = d. Deliberately a different
// algorithm from the production KKT solves (SVD pseudoinverse + reduced
// normal equations) so agreement is a genuine cross-check.
inline VecX constrained_lsq_oracle(const MatX& w, const VecX& target,
                                   const MatX& c, const VecX& d) {
  const int n = static_cast<int>(target.size());
  if (c.rows() == 0) return target;
  Eigen::JacobiSVD<MatX> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double tol =
      1e-12 * std::max(1.0, svd.singularValues().size() > 0
                                ? svd.singularValues()[0]
                                : 0.0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol) ++rank;
  // particular solution via pseudoinverse
  VecX xp = VecX::Zero(n);
  for (int i = 0; i < rank; ++i)
    xp += svd.matrixV().col(i) *
          (svd.matrixU().col(i).dot(d) / svd.singularValues()[i]);
  MatX null = svd.matrixV().rightCols(n - rank);
  if (null.cols() == 0) return xp;
  MatX red = null.transpose() * w * null;
  VecX rhs = null.transpose() * w * (target - xp);
  VecX y = red.ldlt().solve(rhs);
  return xp + null * y;
}

}  // namespace vt
