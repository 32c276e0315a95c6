#include "verifem/element_solve.hpp"

#include "verifem/parallel.hpp"
#include "verifem/quadrature.hpp"

namespace verifem {

MatX physical_gradients(const Mesh& mesh, int e, const MatX& grad_ref) {
  const MatX dlam = mesh.barycentric_gradients(e);
  Mat2 map;  // reference coordinates are (lambda_1, lambda_2)
  map.row(0) = dlam.row(1);
  map.row(1) = dlam.row(2);
  return grad_ref * map;
}

Vec3 barycentric_coords(const Mesh& mesh, int e, const Vec2& x) {
  const MatX dlam = mesh.barycentric_gradients(e);
  const Vec2 d = x - mesh.nodes[mesh.elements[e][0]];
  Vec3 lam(1.0, 0.0, 0.0);
  lam += dlam * d;
  return lam;
}

MatX strain_rows(const MatX& grad_phys) {
  const int n = static_cast<int>(grad_phys.rows());
  MatX b = MatX::Zero(3, 2 * n);
  for (int i = 0; i < n; ++i) {
    b(0, 2 * i) = grad_phys(i, 0);
    b(1, 2 * i + 1) = grad_phys(i, 1);
    b(2, 2 * i) = grad_phys(i, 1);
    b(2, 2 * i + 1) = grad_phys(i, 0);
  }
  return b;
}

Vec3 AdmissibleStress::eval(const Mesh& mesh, const Material& material, int e,
                            const Vec2& xi) const {
  const MatX g = physical_gradients(mesh, e, basis.eval_grad(xi, orient[e]));
  Vec3 strain = Vec3::Zero();
  for (int i = 0; i < basis.size(); ++i) {
    strain[0] += coeffs[e](i, 0) * g(i, 0);
    strain[1] += coeffs[e](i, 1) * g(i, 1);
    strain[2] += coeffs[e](i, 0) * g(i, 1) + coeffs[e](i, 1) * g(i, 0);
  }
  return base[e] + material.stiffness() * strain;
}

AdmissibleStress element_dual_stress(const Mesh& mesh,
                                     const Material& material,
                                     const LoadCase& loads,
                                     const TractionField& traction,
                                     int degree) {
  AdmissibleStress out(BasisKind::lagrange, degree, mesh.n_elements());
  const TriBasis& basis = out.basis;
  const int n = basis.size();
  const Mat3 stiff = material.stiffness();

  const TriRule& rule_a = triangle_rule(2 * (degree - 1));
  const TriRule& rule_b = triangle_rule(degree + 1);
  const EdgeRule& rule_e = edge_rule(degree + 1);

  parallel_for(mesh.n_elements(), [&](int e) {
    const double area = mesh.area(e);
    MatX a = MatX::Zero(2 * n, 2 * n);
    VecX rhs = VecX::Zero(2 * n);
    MatX c = MatX::Zero(3, 2 * n);  // mean displacement and mean rotation

    for (size_t q = 0; q < rule_a.points.size(); ++q) {
      const MatX g =
          physical_gradients(mesh, e, basis.eval_grad(rule_a.points[q]));
      const MatX b = strain_rows(g);
      const double w = 2.0 * area * rule_a.weights[q];
      a += w * b.transpose() * stiff * b;
      for (int i = 0; i < n; ++i) {
        c(2, 2 * i) -= w * g(i, 1);
        c(2, 2 * i + 1) += w * g(i, 0);
      }
    }
    for (size_t q = 0; q < rule_b.points.size(); ++q) {
      const Vec2 xi = rule_b.points[q];
      const VecX phi = basis.eval(xi);
      const double w = 2.0 * area * rule_b.weights[q];
      const Vec2 x = mesh.nodes[mesh.elements[e][0]] * (1.0 - xi[0] - xi[1]) +
                     mesh.nodes[mesh.elements[e][1]] * xi[0] +
                     mesh.nodes[mesh.elements[e][2]] * xi[1];
      const Vec2 f = loads.body_force(x);
      for (int i = 0; i < n; ++i) {
        rhs[2 * i] += w * f[0] * phi[i];
        rhs[2 * i + 1] += w * f[1] * phi[i];
        c(0, 2 * i) += w * phi[i];
        c(1, 2 * i + 1) += w * phi[i];
      }
    }

    for (int k = 0; k < 3; ++k) {
      const int g = mesh.element_edges[e][k];
      const Edge& ed = mesh.edges[g];
      const double l = mesh.edge_length(g);
      const double sign = mesh.edge_sign(g, e);
      for (size_t q = 0; q < rule_e.points.size(); ++q) {
        const double t = rule_e.points[q];
        const Vec2 x = (1.0 - t) * mesh.nodes[ed.n0] + t * mesh.nodes[ed.n1];
        const Vec3 lam = barycentric_coords(mesh, e, x);
        const VecX phi = basis.eval(Vec2(lam[1], lam[2]));
        const Vec2 tr = sign * traction.eval(g, t);
        const double w = l * rule_e.weights[q];
        for (int i = 0; i < n; ++i) {
          rhs[2 * i] += w * tr[0] * phi[i];
          rhs[2 * i + 1] += w * tr[1] * phi[i];
        }
      }
    }

    MatX kkt = MatX::Zero(2 * n + 3, 2 * n + 3);
    kkt.topLeftCorner(2 * n, 2 * n) = a;
    kkt.block(2 * n, 0, 3, 2 * n) = c;
    kkt.block(0, 2 * n, 2 * n, 3) = c.transpose();
    VecX full = VecX::Zero(2 * n + 3);
    full.head(2 * n) = rhs;

    Eigen::PartialPivLU<MatX> lu(kkt);
    const VecX sol = lu.solve(full);
    const double scale = std::max(1.0, full.lpNorm<Eigen::Infinity>());
    if ((kkt * sol - full).lpNorm<Eigen::Infinity>() > 1e-8 * scale)
      throw NumericalError("element dual solve failed on element " +
                           std::to_string(e));
    for (int i = 0; i < n; ++i) out.coeffs[e].row(i) = sol.segment<2>(2 * i);
  });
  return out;
}

}  // namespace verifem
