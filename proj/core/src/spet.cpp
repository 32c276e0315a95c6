#include "verifem/spet.hpp"

#include <optional>

#include "verifem/parallel.hpp"
#include "verifem/quadrature.hpp"

namespace verifem {

namespace {

Vec2 map_point(const Mesh& mesh, int e, const Vec2& xi) {
  return mesh.nodes[mesh.elements[e][0]] * (1.0 - xi[0] - xi[1]) +
         mesh.nodes[mesh.elements[e][1]] * xi[0] +
         mesh.nodes[mesh.elements[e][2]] * xi[1];
}

std::array<int, 3> element_orientations(const Mesh& mesh, int e) {
  std::array<int, 3> o;
  for (int k = 0; k < 3; ++k) {
    const int g = mesh.element_edges[e][k];
    o[k] = mesh.elements[e][(k + 1) % 3] == mesh.edges[g].n0 ? 1 : -1;
  }
  return o;
}

}  // namespace

VecX patch_rhs(const Mesh& mesh, const Material& material,
               const FemSolution& sol, const LoadCase& loads,
               const HierSpace& space, int vertex) {
  (void)material;
  VecX rhs = VecX::Zero(2 * space.n_scalar);
  const TriRule& tri = triangle_rule(8);
  const EdgeRule& er = edge_rule(8);
  const int n = space.basis.size();

  for (size_t li = 0; li < space.elems.size(); ++li) {
    const int e = space.elems[li];
    const int a = mesh.local_node(vertex, e);
    const MatX dlam = mesh.barycentric_gradients(e);
    const Vec2 hat_grad = dlam.row(a).transpose();
    const double area = mesh.area(e);
    const Vec3& sig = sol.stress[e];

    for (size_t q = 0; q < tri.points.size(); ++q) {
      const Vec2 xi = tri.points[q];
      const Vec3 lam(1.0 - xi[0] - xi[1], xi[0], xi[1]);
      const double hat = lam[a];
      const VecX phi = space.basis.eval(xi, space.orient[li]);
      const MatX g = physical_gradients(
          mesh, e, space.basis.eval_grad(xi, space.orient[li]));
      const Vec2 f = loads.body_force(map_point(mesh, e, xi));
      const double w = 2.0 * area * tri.weights[q];
      for (int j = 0; j < n; ++j) {
        const int sj = space.elem_dofs[li][j];
        if (space.info[sj].kind == TriBasis::Dof::vertex) continue;
        const Vec2 gv = hat * g.row(j).transpose() + phi[j] * hat_grad;
        rhs[2 * sj] += w * (f[0] * hat * phi[j] - sig[0] * gv[0] - sig[2] * gv[1]);
        rhs[2 * sj + 1] +=
            w * (f[1] * hat * phi[j] - sig[1] * gv[1] - sig[2] * gv[0]);
      }
    }

    for (int k = 0; k < 3; ++k) {
      const int ge = mesh.element_edges[e][k];
      const Edge& ed = mesh.edges[ge];
      if (!ed.on_boundary()) continue;
      const double l = mesh.edge_length(ge);
      const Mat2& tr = loads.boundary[ge].traction;
      const bool known[2] = {loads.traction_known(mesh, ge, 0),
                             loads.traction_known(mesh, ge, 1)};
      if (!known[0] && !known[1]) continue;
      for (size_t q = 0; q < er.points.size(); ++q) {
        const double t = er.points[q];
        const Vec2 x = (1.0 - t) * mesh.nodes[ed.n0] + t * mesh.nodes[ed.n1];
        const Vec3 lam = barycentric_coords(mesh, e, x);
        const double hat = lam[a];
        const VecX phi =
            space.basis.eval(Vec2(lam[1], lam[2]), space.orient[li]);
        const Vec2 f = ((1.0 - t) * tr.row(0) + t * tr.row(1)).transpose();
        const double w = l * er.weights[q];
        for (int j = 0; j < n; ++j) {
          const int sj = space.elem_dofs[li][j];
          if (space.info[sj].kind == TriBasis::Dof::vertex) continue;
          for (int c = 0; c < 2; ++c)
            if (known[c]) rhs[2 * sj + c] += w * f[c] * hat * phi[j];
        }
      }
    }
  }
  return rhs;
}

PatchSolution solve_patch(const Mesh& mesh, const Material& material,
                          const FemSolution& sol, const LoadCase& loads,
                          int vertex, int degree) {
  if (degree < 2)
    throw ValidationError("spet: patch space degree must exceed 1");
  const Patch patch = vertex_patch(mesh, vertex);
  PatchSolution out(vertex, build_hier_space(mesh, patch.elems, degree));
  const HierSpace& sp = out.space;
  out.fixed = hier_fixed(mesh, loads, sp);
  const VecX rhs = patch_rhs(mesh, material, sol, loads, sp, vertex);

  const int n2 = 2 * sp.n_scalar;
  const int n = sp.basis.size();
  MatX a = MatX::Zero(n2, n2);
  const TriRule& tri = triangle_rule(2 * (degree - 1));
  const Mat3 stiff = material.stiffness();
  for (size_t li = 0; li < sp.elems.size(); ++li) {
    const int e = sp.elems[li];
    const double area = mesh.area(e);
    MatX ke = MatX::Zero(2 * n, 2 * n);
    for (size_t q = 0; q < tri.points.size(); ++q) {
      const MatX g = physical_gradients(
          mesh, e, sp.basis.eval_grad(tri.points[q], sp.orient[li]));
      const MatX b = strain_rows(g);
      ke += 2.0 * area * tri.weights[q] * b.transpose() * stiff * b;
    }
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d)
            a(2 * sp.elem_dofs[li][j] + c, 2 * sp.elem_dofs[li][k] + d) +=
                ke(2 * j + c, 2 * k + d);
  }

  std::vector<int> free_ix;
  for (int f = 0; f < n2; ++f)
    if (!out.fixed[f]) free_ix.push_back(f);
  const int nf = static_cast<int>(free_ix.size());
  MatX aff(nf, nf);
  VecX rf(nf);
  for (int r = 0; r < nf; ++r) {
    rf[r] = rhs[free_ix[r]];
    for (int c = 0; c < nf; ++c) aff(r, c) = a(free_ix[r], free_ix[c]);
  }

  // Rigid fields, expressed on the vertex dofs about the patch centroid.
  Vec2 cen = Vec2::Zero();
  for (int nd : sp.nodes) cen += mesh.nodes[nd];
  cen /= static_cast<double>(sp.nodes.size());
  MatX rigid = MatX::Zero(n2, 3);
  for (int j = 0; j < sp.n_scalar; ++j) {
    if (sp.info[j].kind != TriBasis::Dof::vertex) continue;
    const Vec2 p = mesh.nodes[sp.info[j].entity] - cen;
    rigid(2 * j, 0) = 1.0;
    rigid(2 * j + 1, 1) = 1.0;
    rigid(2 * j, 2) = -p[1];
    rigid(2 * j + 1, 2) = p[0];
  }

  // Rigid motions compatible with the homogeneous constraints still span a
  // kernel; pick them as the nullspace of the constrained-dof values.
  MatX combos;
  const int m = n2 - nf;
  if (m == 0) {
    combos = Mat3::Identity();
  } else {
    MatX cons(m, 3);
    int r = 0;
    for (int f = 0; f < n2; ++f)
      if (out.fixed[f]) cons.row(r++) = rigid.row(f);
    Eigen::JacobiSVD<MatX> svd(cons, Eigen::ComputeFullV);
    const VecX sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > 1e-9 * std::max(1.0, sv[0])) ++rank;
    combos = svd.matrixV().rightCols(3 - rank);
  }
  const int nk = static_cast<int>(combos.cols());

  MatX lrows = MatX::Zero(nk, nf);
  if (nk > 0) {
    MatX lfull = MatX::Zero(nk, n2);
    const TriRule& lr = triangle_rule(degree + 1);
    for (size_t li = 0; li < sp.elems.size(); ++li) {
      const int e = sp.elems[li];
      const double area = mesh.area(e);
      for (size_t q = 0; q < lr.points.size(); ++q) {
        const Vec2 xi = lr.points[q];
        const VecX phi = sp.basis.eval(xi, sp.orient[li]);
        const Vec2 p = map_point(mesh, e, xi) - cen;
        const double w = 2.0 * area * lr.weights[q];
        for (int j = 0; j < n; ++j) {
          const int sj = sp.elem_dofs[li][j];
          for (int k = 0; k < nk; ++k) {
            const Vec2 rk(combos(0, k) - combos(2, k) * p[1],
                          combos(1, k) + combos(2, k) * p[0]);
            lfull(k, 2 * sj) += w * phi[j] * rk[0];
            lfull(k, 2 * sj + 1) += w * phi[j] * rk[1];
          }
        }
      }
    }
    for (int r = 0; r < nk; ++r)
      for (int c = 0; c < nf; ++c) lrows(r, c) = lfull(r, free_ix[c]);
  }

  MatX kkt = MatX::Zero(nf + nk, nf + nk);
  kkt.topLeftCorner(nf, nf) = aff;
  kkt.block(nf, 0, nk, nf) = lrows;
  kkt.block(0, nf, nf, nk) = lrows.transpose();
  VecX full = VecX::Zero(nf + nk);
  full.head(nf) = rf;

  Eigen::PartialPivLU<MatX> lu(kkt);
  const VecX x = lu.solve(full);
  const double scale = std::max(1.0, rf.lpNorm<Eigen::Infinity>());
  if ((aff * x.head(nf) - rf).lpNorm<Eigen::Infinity>() > 1e-10 * scale)
    throw NumericalError("spet: patch solve failed at vertex " +
                         std::to_string(vertex));

  out.coeffs = VecX::Zero(n2);
  for (int r = 0; r < nf; ++r) out.coeffs[free_ix[r]] = x[r];
  return out;
}

SpetResult spet_estimate(const Mesh& mesh, const Material& material,
                         const FemSolution& sol, const LoadCase& loads,
                         int degree) {
  std::vector<std::optional<PatchSolution>> patches(mesh.n_nodes());
  parallel_for(mesh.n_nodes(), [&](int i) {
    patches[i] = solve_patch(mesh, material, sol, loads, i, degree);
  });

  SpetResult out{0.0, VecX::Zero(mesh.n_elements()),
                 AdmissibleStress(BasisKind::hierarchical, degree,
                                  mesh.n_elements())};
  for (int e = 0; e < mesh.n_elements(); ++e) {
    out.stress.base[e] = sol.stress[e];
    out.stress.orient[e] = element_orientations(mesh, e);
  }
  for (const auto& ps : patches) {
    for (size_t li = 0; li < ps->space.elems.size(); ++li) {
      const int e = ps->space.elems[li];
      for (int j = 0; j < ps->space.basis.size(); ++j) {
        const int sj = ps->space.elem_dofs[li][j];
        out.stress.coeffs[e](j, 0) += ps->coeffs[2 * sj];
        out.stress.coeffs[e](j, 1) += ps->coeffs[2 * sj + 1];
      }
    }
  }

  const Mat3 stiff = material.stiffness();
  const TriRule& tri = triangle_rule(2 * (degree - 1));
  const int n = out.stress.basis.size();
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double area = mesh.area(e);
    double esq = 0.0;
    for (size_t q = 0; q < tri.points.size(); ++q) {
      const MatX g = physical_gradients(
          mesh, e,
          out.stress.basis.eval_grad(tri.points[q], out.stress.orient[e]));
      Vec3 eps = Vec3::Zero();
      for (int i = 0; i < n; ++i) {
        eps[0] += out.stress.coeffs[e](i, 0) * g(i, 0);
        eps[1] += out.stress.coeffs[e](i, 1) * g(i, 1);
        eps[2] += out.stress.coeffs[e](i, 0) * g(i, 1) +
                  out.stress.coeffs[e](i, 1) * g(i, 0);
      }
      esq += 2.0 * area * tri.weights[q] * eps.dot(stiff * eps);
    }
    out.element_sq[e] = esq;
  }
  out.theta = std::sqrt(out.element_sq.sum());
  return out;
}

}  // namespace verifem
