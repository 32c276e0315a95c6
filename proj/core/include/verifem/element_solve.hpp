#pragma once

#include <array>
#include <vector>

#include "verifem/basis.hpp"
#include "verifem/equil_common.hpp"
#include "verifem/fem.hpp"
#include "verifem/loads.hpp"
#include "verifem/mesh.hpp"
#include "verifem/types.hpp"

namespace verifem {

// Piecewise-polynomial stress field, stored as a per-element displacement
// expansion plus an optional constant part:
//   sigma(x) = base + K eps(sum_i coeffs(i,:) N_i)(x).
struct AdmissibleStress {
  AdmissibleStress(BasisKind kind, int degree, int n_elems)
      : basis(kind, degree),
        base(n_elems, Vec3::Zero()),
        coeffs(n_elems, MatX::Zero(basis.size(), 2)),
        orient(n_elems, {1, 1, 1}) {}

  TriBasis basis;
  std::vector<Vec3> base;                 // per-element Voigt constant
  std::vector<MatX> coeffs;               // per-element size() x 2
  std::vector<std::array<int, 3>> orient;  // hierarchical edge orientations

  // Voigt stress at reference point xi of element e.
  Vec3 eval(const Mesh& mesh, const Material& material, int e,
            const Vec2& xi) const;
};

// Strain rows (exx, eyy, gxy) for interleaved (x, y) displacement dofs given
// physical shape gradients (one row per function).
MatX strain_rows(const MatX& grad_phys);

// Physical shape gradients from reference ones on element e.
MatX physical_gradients(const Mesh& mesh, int e, const MatX& grad_ref);

// Barycentric coordinates of physical point x in element e.
Vec3 barycentric_coords(const Mesh& mesh, int e, const Vec2& x);

// Solves the local Neumann problem on each element: find the degree-q
// displacement with mean value and mean rotation zero whose stress balances
// the body force inside and the prescribed edge tractions (taken with the
// element's side sign) on the boundary. The resulting stress field is the
// admissible reconstruction for traction-based estimators.
AdmissibleStress element_dual_stress(const Mesh& mesh,
                                     const Material& material,
                                     const LoadCase& loads,
                                     const TractionField& traction,
                                     int degree);

}  // namespace verifem
