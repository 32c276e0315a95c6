#include "verifem/eespt.hpp"

#include <algorithm>
#include <cmath>

#include "verifem/parallel.hpp"

namespace verifem {

std::vector<EdgeTargets> eespt_targets(const Mesh& mesh,
                                       const FemSolution& sol,
                                       const LoadCase& loads) {
  std::vector<EdgeTargets> out(mesh.n_edges());
  for (int g = 0; g < mesh.n_edges(); ++g) {
    const double l = mesh.edge_length(g);
    const Mat2 proj = fe_stress_projection(mesh, sol, loads, g);

    // Unknowns per component: [a0 a1 b0 b1], the nodal values of the two
    // vertex-weighted fields. Moment rows kill the cross moments, sum rows
    // pin the nodal totals to the projection.
    Eigen::Matrix4d b;
    b << l / 6.0, l / 3.0, 0.0, 0.0,
         0.0, 0.0, l / 3.0, l / 6.0,
         1.0, 0.0, 1.0, 0.0,
         0.0, 1.0, 0.0, 1.0;
    Eigen::PartialPivLU<Eigen::Matrix4d> lu(b);
    for (int c = 0; c < 2; ++c) {
      const Eigen::Vector4d q(0.0, 0.0, proj(0, c), proj(1, c));
      const Eigen::Vector4d x = lu.solve(q);
      if ((b * x - q).lpNorm<Eigen::Infinity>() >
          1e-12 * std::max(1.0, q.lpNorm<Eigen::Infinity>()))
        throw NumericalError("eespt: target system singular on edge " +
                             std::to_string(g));
      out[g].at_n0(0, c) = x[0];
      out[g].at_n0(1, c) = x[1];
      out[g].at_n1(0, c) = x[2];
      out[g].at_n1(1, c) = x[3];
    }
  }
  return out;
}

PatchTractionSystem build_patch_system(const Mesh& mesh,
                                       const Material& material,
                                       const FemSolution& sol,
                                       const LoadCase& loads,
                                       const std::vector<EdgeTargets>& targets,
                                       int vertex, CostKind cost,
                                       double penalty) {
  PatchTractionSystem s;
  s.vertex = vertex;
  const Patch patch = vertex_patch(mesh, vertex);
  s.spokes = patch.spokes;
  s.elems = patch.elems;  // already ascending
  s.n_tr = 4 * static_cast<int>(s.spokes.size());
  const int n_test = 6 * static_cast<int>(s.elems.size());

  s.a = MatX::Zero(s.n_tr, n_test);
  for (size_t sp = 0; sp < s.spokes.size(); ++sp) {
    const int g = s.spokes[sp];
    const Edge& ed = mesh.edges[g];
    const double l = mesh.edge_length(g);
    for (int side = 0; side < 2; ++side) {
      const int e = ed.elem[side];
      if (e < 0) continue;
      const int pe = static_cast<int>(
          std::find(s.elems.begin(), s.elems.end(), e) - s.elems.begin());
      const double sign = mesh.edge_sign(g, e);
      for (int m = 0; m < 2; ++m) {  // endpoint whose hat is tested
        const int a = mesh.local_node(m == 0 ? ed.n0 : ed.n1, e);
        for (int k = 0; k < 2; ++k) {
          const double mass = k == m ? l / 3.0 : l / 6.0;
          for (int c = 0; c < 2; ++c)
            s.a(4 * sp + 2 * k + c, 6 * pe + 2 * a + c) += sign * mass;
        }
      }
    }
  }

  const std::vector<Vec2> q = node_load_vectors(mesh, sol, loads, vertex);
  s.rhs = VecX::Zero(n_test);
  for (size_t pe = 0; pe < s.elems.size(); ++pe) {
    const int a = mesh.local_node(vertex, s.elems[pe]);
    for (int c = 0; c < 2; ++c) s.rhs[6 * pe + 2 * a + c] = q[pe][c];
  }

  // The test-space kernel consists of the continuous patch fields vanishing
  // on boundary spokes. Express the map on continuous nodal fields and take
  // its nullspace.
  std::vector<int> pnodes;
  for (int e : s.elems)
    for (int a = 0; a < 3; ++a) pnodes.push_back(mesh.elements[e][a]);
  std::sort(pnodes.begin(), pnodes.end());
  pnodes.erase(std::unique(pnodes.begin(), pnodes.end()), pnodes.end());

  MatX embed = MatX::Zero(n_test, 2 * pnodes.size());
  for (size_t pe = 0; pe < s.elems.size(); ++pe)
    for (int a = 0; a < 3; ++a) {
      const int pn = static_cast<int>(
          std::lower_bound(pnodes.begin(), pnodes.end(),
                           mesh.elements[s.elems[pe]][a]) -
          pnodes.begin());
      for (int c = 0; c < 2; ++c) embed(6 * pe + 2 * a + c, 2 * pn + c) = 1.0;
    }

  Eigen::FullPivLU<MatX> lu(s.a * embed);
  lu.setThreshold(1e-10);
  MatX kernel = embed * lu.kernel();
  const int kdim = lu.dimensionOfKernel();

  // Fix the lowest (element, local node, component) dof each kernel direction
  // can still reach; Gaussian elimination keeps the remaining directions out
  // of already-fixed dofs.
  std::vector<char> is_dropped(n_test, 0);
  int left = kdim;
  for (int d = 0; d < n_test && left > 0; ++d) {
    int piv = -1;
    double best = 0.0;
    for (int k = 0; k < left; ++k)
      if (std::abs(kernel(d, k)) > best) {
        best = std::abs(kernel(d, k));
        piv = k;
      }
    if (piv < 0 || best <= 1e-9 * kernel.col(piv).norm()) continue;
    kernel.col(piv).swap(kernel.col(left - 1));
    for (int k = 0; k < left - 1; ++k)
      kernel.col(k) -=
          (kernel(d, k) / kernel(d, left - 1)) * kernel.col(left - 1);
    --left;
    is_dropped[d] = 1;
    s.dropped.push_back(d);
  }
  if (left != 0)
    throw NumericalError("eespt: kernel fixing failed at vertex " +
                         std::to_string(vertex));
  for (int d = 0; d < n_test; ++d)
    if (!is_dropped[d]) s.retained.push_back(d);

  MatX atil(s.n_tr, s.retained.size());
  for (size_t c = 0; c < s.retained.size(); ++c)
    atil.col(c) = s.a.col(s.retained[c]);
  Eigen::ColPivHouseholderQR<MatX> qr(atil);
  qr.setThreshold(1e-10);
  if (qr.rank() != static_cast<int>(s.retained.size()))
    throw NumericalError("eespt: retained test space rank-deficient at vertex " +
                         std::to_string(vertex));

  s.weight = MatX::Zero(s.n_tr, s.n_tr);
  s.target = VecX::Zero(s.n_tr);
  for (size_t sp = 0; sp < s.spokes.size(); ++sp) {
    const int g = s.spokes[sp];
    Eigen::Matrix4d w = cost_weight(cost, mesh, material, g);
    // The penalty is a plain diagonal addition on the coefficients of known
    // boundary values, not a scaling of the cost matrix: folding it into the
    // edge-mass weight would make the enforcement strength shrink with the
    // edge length.
    for (int c = 0; c < 2; ++c)
      if (loads.traction_known(mesh, g, c)) {
        w(c, c) += penalty;
        w(2 + c, 2 + c) += penalty;
      }
    s.weight.block<4, 4>(4 * sp, 4 * sp) = w;
    const Mat2& t =
        mesh.edges[g].n0 == vertex ? targets[g].at_n0 : targets[g].at_n1;
    for (int k = 0; k < 2; ++k)
      for (int c = 0; c < 2; ++c) s.target[4 * sp + 2 * k + c] = t(k, c);
  }
  return s;
}

VecX solve_patch_system(const PatchTractionSystem& s) {
  const int nr = static_cast<int>(s.retained.size());
  MatX atil(s.n_tr, nr);
  VecX rtil(nr);
  for (int c = 0; c < nr; ++c) {
    atil.col(c) = s.a.col(s.retained[c]);
    rtil[c] = s.rhs[s.retained[c]];
  }

  const int n = s.n_tr + nr;
  MatX kkt = MatX::Zero(n, n);
  kkt.topLeftCorner(s.n_tr, s.n_tr) = s.weight;
  kkt.topRightCorner(s.n_tr, nr) = atil;
  kkt.bottomLeftCorner(nr, s.n_tr) = atil.transpose();
  VecX rhs(n);
  rhs.head(s.n_tr) = s.weight * s.target;
  rhs.tail(nr) = rtil;

  Eigen::PartialPivLU<MatX> lu(kkt);
  const VecX x = lu.solve(rhs);
  const VecX f = x.head(s.n_tr);
  const double scale = std::max(1.0, rtil.lpNorm<Eigen::Infinity>());
  if ((atil.transpose() * f - rtil).lpNorm<Eigen::Infinity>() > 1e-10 * scale)
    throw NumericalError("eespt: patch system solve failed at vertex " +
                         std::to_string(s.vertex));
  return f;
}

TractionField eespt_tractions(const Mesh& mesh, const Material& material,
                              const FemSolution& sol, const LoadCase& loads,
                              CostKind cost, double penalty) {
  const std::vector<EdgeTargets> targets = eespt_targets(mesh, sol, loads);
  std::vector<VecX> solved(mesh.n_nodes());
  std::vector<std::vector<int>> spokes(mesh.n_nodes());
  parallel_for(mesh.n_nodes(), [&](int i) {
    const PatchTractionSystem s = build_patch_system(
        mesh, material, sol, loads, targets, i, cost, penalty);
    solved[i] = solve_patch_system(s);
    spokes[i] = s.spokes;
  });

  TractionField h;
  h.values.assign(mesh.n_edges(), Mat2::Zero());
  for (int g = 0; g < mesh.n_edges(); ++g) {
    const Edge& ed = mesh.edges[g];
    for (const int vertex : {ed.n0, ed.n1}) {
      const auto& sp = spokes[vertex];
      const int pos = static_cast<int>(
          std::find(sp.begin(), sp.end(), g) - sp.begin());
      for (int k = 0; k < 2; ++k)
        for (int c = 0; c < 2; ++c)
          h.values[g](k, c) += solved[vertex][4 * pos + 2 * k + c];
    }
  }
  return h;
}

}  // namespace verifem
