#include "verifem/fem.hpp"

#include <Eigen/Sparse>

#include "verifem/quadrature.hpp"

namespace verifem {

namespace {

using Triplet = Eigen::Triplet<double>;

// Strain-displacement matrix of one element: eps = b * ue with ue the six
// nodal dofs (node-major, component-minor).
Eigen::Matrix<double, 3, 6> strain_matrix(const Mesh& mesh, int e) {
  const auto g = mesh.barycentric_gradients(e);
  Eigen::Matrix<double, 3, 6> b = Eigen::Matrix<double, 3, 6>::Zero();
  for (int a = 0; a < 3; ++a) {
    b(0, 2 * a) = g(a, 0);
    b(1, 2 * a + 1) = g(a, 1);
    b(2, 2 * a) = g(a, 1);
    b(2, 2 * a + 1) = g(a, 0);
  }
  return b;
}

VecX assemble_rhs(const Mesh& mesh, const LoadCase& loads) {
  VecX f = VecX::Zero(2 * mesh.n_nodes());

  const TriRule& rule = triangle_rule(2);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    const Vec2& p0 = mesh.nodes[el[0]];
    const Vec2& p1 = mesh.nodes[el[1]];
    const Vec2& p2 = mesh.nodes[el[2]];
    const double jac = 2.0 * mesh.area(e);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2& xi = rule.points[q];
      const double l0 = 1.0 - xi.x() - xi.y();
      const Vec2 x = l0 * p0 + xi.x() * p1 + xi.y() * p2;
      const Vec2 fd = loads.body_force(x);
      const double lam[3] = {l0, xi.x(), xi.y()};
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 2; ++c)
          f[2 * el[a] + c] += rule.weights[q] * jac * lam[a] * fd[c];
    }
  }

  for (int g = 0; g < mesh.n_edges(); ++g) {
    const Edge& ed = mesh.edges[g];
    if (!ed.on_boundary()) continue;
    const EdgeBC& bc = loads.boundary[g];
    const double l = mesh.edge_length(g);
    for (int c = 0; c < 2; ++c) {
      if (!loads.traction_known(mesh, g, c)) continue;
      const double t0 = bc.traction(0, c), t1 = bc.traction(1, c);
      f[2 * ed.n0 + c] += l * (t0 / 3.0 + t1 / 6.0);
      f[2 * ed.n1 + c] += l * (t0 / 6.0 + t1 / 3.0);
    }
  }
  return f;
}

}  // namespace

FemSolution assemble_solve(const Mesh& mesh, const Material& material,
                           const LoadCase& loads) {
  validate_loads(mesh, loads);

  FemSolution sol;
  sol.constraints = node_constraints(mesh, loads);
  const int ndof = 2 * mesh.n_nodes();

  int n_fixed = 0;
  std::vector<int> free_index(ndof, -1);
  std::vector<int> free_dofs;
  for (int d = 0; d < ndof; ++d) {
    if (sol.constraints.fixed[d]) {
      ++n_fixed;
    } else {
      free_index[d] = static_cast<int>(free_dofs.size());
      free_dofs.push_back(d);
    }
  }
  if (n_fixed < 3)
    throw NumericalError("fem: fewer than three constrained dofs, "
                         "rigid modes are not removed");
  const int nfree = static_cast<int>(free_dofs.size());

  const Mat3 c = material.stiffness();
  VecX f = assemble_rhs(mesh, loads);
  VecX rhs(nfree);
  for (int k = 0; k < nfree; ++k) rhs[k] = f[free_dofs[k]];

  std::vector<Triplet> triplets;
  triplets.reserve(36 * mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto b = strain_matrix(mesh, e);
    const Eigen::Matrix<double, 6, 6> ke =
        mesh.area(e) * b.transpose() * c * b;
    const auto& el = mesh.elements[e];
    int dof[6];
    for (int a = 0; a < 3; ++a) {
      dof[2 * a] = 2 * el[a];
      dof[2 * a + 1] = 2 * el[a] + 1;
    }
    for (int i = 0; i < 6; ++i) {
      const int gi = free_index[dof[i]];
      for (int j = 0; j < 6; ++j) {
        const int gj = free_index[dof[j]];
        if (gi >= 0 && gj >= 0) {
          triplets.emplace_back(gi, gj, ke(i, j));
        } else if (gi >= 0 && gj < 0) {
          rhs[gi] -= ke(i, j) * sol.constraints.value[dof[j]];
        }
      }
    }
  }

  Eigen::SparseMatrix<double> k(nfree, nfree);
  k.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(k);
  if (solver.info() != Eigen::Success)
    throw NumericalError("fem: factorization failed");
  VecX uf = solver.solve(rhs);
  // one refinement pass; the energy-difference reference route needs the
  // Galerkin orthogonality residual near roundoff, not just solver tolerance
  uf += solver.solve(rhs - k * uf);
  const double res = (k * uf - rhs).norm();
  if (!(res <= 1e-8 * std::max(1.0, rhs.norm())))
    throw NumericalError("fem: solver residual too large");

  sol.u = VecX::Zero(ndof);
  for (int d = 0; d < ndof; ++d)
    sol.u[d] = sol.constraints.fixed[d] ? sol.constraints.value[d]
                                        : uf[free_index[d]];

  sol.stress.resize(mesh.n_elements());
  sol.energy_sq = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto b = strain_matrix(mesh, e);
    Eigen::Matrix<double, 6, 1> ue;
    const auto& el = mesh.elements[e];
    for (int a = 0; a < 3; ++a)
      for (int cc = 0; cc < 2; ++cc) ue[2 * a + cc] = sol.u[2 * el[a] + cc];
    const Vec3 eps = b * ue;
    sol.stress[e] = c * eps;
    sol.energy_sq += mesh.area(e) * sol.stress[e].dot(eps);
  }
  return sol;
}

double energy_norm(const Mesh& mesh, const Material& material, const VecX& u) {
  const Mat3 c = material.stiffness();
  double sum = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto b = strain_matrix(mesh, e);
    Eigen::Matrix<double, 6, 1> ue;
    const auto& el = mesh.elements[e];
    for (int a = 0; a < 3; ++a)
      for (int cc = 0; cc < 2; ++cc) ue[2 * a + cc] = u[2 * el[a] + cc];
    const Vec3 eps = b * ue;
    sum += mesh.area(e) * eps.dot(c * eps);
  }
  return std::sqrt(std::max(0.0, sum));
}

double complementary_norm(const Mesh& mesh, const Material& material,
                          const std::vector<Vec3>& stress) {
  const Mat3 s = material.compliance();
  double sum = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e)
    sum += mesh.area(e) * stress[e].dot(s * stress[e]);
  return std::sqrt(std::max(0.0, sum));
}

VecX fem_residual(const Mesh& mesh, const Material& material,
                  const LoadCase& loads, const FemSolution& sol) {
  VecX r = assemble_rhs(mesh, loads);
  const Mat3 c = material.stiffness();
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto b = strain_matrix(mesh, e);
    Eigen::Matrix<double, 6, 1> ue;
    const auto& el = mesh.elements[e];
    for (int a = 0; a < 3; ++a)
      for (int cc = 0; cc < 2; ++cc) ue[2 * a + cc] = sol.u[2 * el[a] + cc];
    const Eigen::Matrix<double, 6, 1> fe =
        mesh.area(e) * b.transpose() * (c * (b * ue));
    for (int a = 0; a < 3; ++a)
      for (int cc = 0; cc < 2; ++cc) r[2 * el[a] + cc] -= fe[2 * a + cc];
  }
  for (int d = 0; d < 2 * mesh.n_nodes(); ++d)
    if (sol.constraints.fixed[d]) r[d] = 0.0;
  return r;
}

}  // namespace verifem
