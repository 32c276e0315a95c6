#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace verifem {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Invalid input data: mesh, load case, configuration.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solve or consistency check failed beyond tolerance.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plane-stress isotropic material.
//
// Voigt convention throughout: strain (exx, eyy, gxy) with engineering shear
// gxy = 2*exy, stress (sxx, syy, sxy), so that sigma = stiffness() * eps and
// sigma . eps is the energy density Tr[K eps eps].
struct Material {
  double young = 1.0;
  double poisson = 0.3;

  Material() = default;
  Material(double e, double nu) : young(e), poisson(nu) {
    if (!(young > 0.0))
      throw ValidationError("material: Young modulus must be positive");
    if (!(poisson > -1.0 && poisson < 0.5))
      throw ValidationError("material: Poisson ratio must lie in (-1, 0.5)");
  }

  Mat3 stiffness() const {
    const double c = young / (1.0 - poisson * poisson);
    Mat3 k;
    k << c, c * poisson, 0.0,
         c * poisson, c, 0.0,
         0.0, 0.0, c * (1.0 - poisson) / 2.0;
    return k;
  }

  Mat3 compliance() const {
    Mat3 s;
    s << 1.0 / young, -poisson / young, 0.0,
         -poisson / young, 1.0 / young, 0.0,
         0.0, 0.0, 2.0 * (1.0 + poisson) / young;
    return s;
  }
};

}  // namespace verifem
