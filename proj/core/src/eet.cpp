#include "verifem/eet.hpp"

#include <algorithm>

#include "verifem/parallel.hpp"

namespace verifem {

namespace {

// Moments of degree-1 edge data against the hat of one endpoint.
Vec2 edge_moment(const Mesh& mesh, const Mat2& nodal, int g, int vertex) {
  const Edge& ed = mesh.edges[g];
  const double l = mesh.edge_length(g);
  const double wa = vertex == ed.n0 ? l / 3.0 : l / 6.0;
  const double wb = vertex == ed.n0 ? l / 6.0 : l / 3.0;
  return (wa * nodal.row(0) + wb * nodal.row(1)).transpose();
}

}  // namespace

NodeSystem build_node_system(const Mesh& mesh, const Material& material,
                             const FemSolution& sol, const LoadCase& loads,
                             int vertex, CostKind cost) {
  NodeSystem s;
  s.vertex = vertex;
  const Patch patch = vertex_patch(mesh, vertex);
  s.spokes = patch.spokes;
  s.n_unk = 2 * static_cast<int>(s.spokes.size());

  std::vector<int> column(mesh.n_edges(), -1);
  for (size_t k = 0; k < s.spokes.size(); ++k)
    column[s.spokes[k]] = 2 * static_cast<int>(k);

  const std::vector<Vec2> q = node_load_vectors(mesh, sol, loads, vertex);

  // A closed fan has one dependent vector equation; an open one does not.
  s.dropped_elem = patch.interior ? patch.elems.back() : -1;
  for (int e : patch.elems)
    if (e != s.dropped_elem) s.elems.push_back(e);
  s.n_ind = 2 * static_cast<int>(s.elems.size());

  s.prolongation = MatX::Zero(s.n_ind, s.n_unk);
  s.prolongation_rhs = VecX::Zero(s.n_ind);
  for (size_t r = 0; r < s.elems.size(); ++r) {
    const int e = s.elems[r];
    const size_t qi = std::find(patch.elems.begin(), patch.elems.end(), e) -
                      patch.elems.begin();
    for (int k = 0; k < 3; ++k) {
      const int g = mesh.element_edges[e][k];
      if (column[g] < 0) continue;  // the edge opposite the vertex
      const double sign = mesh.edge_sign(g, e);
      for (int c = 0; c < 2; ++c)
        s.prolongation(2 * r + c, column[g] + c) = sign;
    }
    for (int c = 0; c < 2; ++c) s.prolongation_rhs[2 * r + c] = q[qi][c];
  }

  std::vector<std::pair<int, double>> enforced;  // (column, rhs)
  for (size_t k = 0; k < s.spokes.size(); ++k) {
    const int g = s.spokes[k];
    if (!mesh.edges[g].on_boundary()) continue;
    const Vec2 m = edge_moment(mesh, loads.boundary[g].traction, g, vertex);
    for (int c = 0; c < 2; ++c)
      if (loads.traction_known(mesh, g, c))
        enforced.emplace_back(2 * static_cast<int>(k) + c, m[c]);
  }
  s.n_enf = static_cast<int>(enforced.size());
  s.enforced = MatX::Zero(s.n_enf, s.n_unk);
  s.enforced_rhs = VecX::Zero(s.n_enf);
  for (int r = 0; r < s.n_enf; ++r) {
    s.enforced(r, enforced[r].first) = 1.0;
    s.enforced_rhs[r] = enforced[r].second;
  }

  s.weight = MatX::Zero(s.n_unk, s.n_unk);
  s.target = VecX::Zero(s.n_unk);
  for (size_t k = 0; k < s.spokes.size(); ++k) {
    const int g = s.spokes[k];
    s.weight.block<2, 2>(2 * k, 2 * k) =
        cost_weight_dir(cost, mesh, material, g);
    const Mat2 proj = fe_stress_projection(mesh, sol, loads, g);
    s.target.segment<2>(2 * k) = edge_moment(mesh, proj, g, vertex);
  }

  // Load compatibility at free components: the full fan balance reduces to
  // the FE equilibrium of this vertex.
  const NodeConstraints& nc = sol.constraints;
  double scale = 1.0;
  for (const Vec2& qe : q) scale = std::max(scale, qe.cwiseAbs().maxCoeff());
  for (int c = 0; c < 2; ++c) {
    if (nc.fixed[2 * vertex + c]) continue;
    double residual = 0.0;
    for (const Vec2& qe : q) residual += qe[c];
    for (const auto& [col, rhs] : enforced)
      if (col % 2 == c) residual -= rhs;
    if (std::abs(residual) > 1e-8 * scale)
      throw NumericalError("eet: load compatibility violated at vertex " +
                           std::to_string(vertex) +
                           ", the FE solution is not in equilibrium");
  }
  return s;
}

VecX solve_node_system(const NodeSystem& s) {
  const int n = s.n_unk + s.n_enf + s.n_ind;

  MatX kkt = MatX::Zero(n, n);
  VecX rhs = VecX::Zero(n);
  kkt.topLeftCorner(s.n_unk, s.n_unk) = s.weight;
  rhs.head(s.n_unk) = s.weight * s.target;
  kkt.block(s.n_unk, 0, s.n_enf, s.n_unk) = s.enforced;
  kkt.block(0, s.n_unk, s.n_unk, s.n_enf) = s.enforced.transpose();
  rhs.segment(s.n_unk, s.n_enf) = s.enforced_rhs;
  kkt.block(s.n_unk + s.n_enf, 0, s.n_ind, s.n_unk) = s.prolongation;
  kkt.block(0, s.n_unk + s.n_enf, s.n_unk, s.n_ind) =
      s.prolongation.transpose();
  rhs.segment(s.n_unk + s.n_enf, s.n_ind) = s.prolongation_rhs;

  // Every balance row is imposed. At vertices whose component is free in
  // both conditions the rows overlap the enforced data (the load
  // compatibility makes them consistent); the complete orthogonal
  // decomposition resolves the redundancy while keeping the unique minimizer
  // in the primal block. At partially fixed vertices the extra rows pin the
  // reaction moments and are independent, so nothing may be truncated.
  Eigen::CompleteOrthogonalDecomposition<MatX> cod(kkt);
  const VecX x = cod.solve(rhs);
  const VecX b = x.head(s.n_unk);

  const double scale =
      std::max({1.0, s.prolongation_rhs.lpNorm<Eigen::Infinity>(),
                s.enforced_rhs.size() > 0
                    ? s.enforced_rhs.lpNorm<Eigen::Infinity>()
                    : 0.0});
  double residual =
      (s.prolongation * b - s.prolongation_rhs).lpNorm<Eigen::Infinity>();
  if (s.n_enf > 0)
    residual = std::max(
        residual, (s.enforced * b - s.enforced_rhs).lpNorm<Eigen::Infinity>());
  if (!(residual <= 1e-9 * scale))
    throw NumericalError("eet: constraint residual too large at vertex " +
                         std::to_string(s.vertex));
  return b;
}

TractionField eet_tractions(const Mesh& mesh, const Material& material,
                            const FemSolution& sol, const LoadCase& loads,
                            CostKind cost) {
  std::vector<VecX> moments(mesh.n_nodes());
  std::vector<std::vector<int>> spokes(mesh.n_nodes());
  parallel_for(mesh.n_nodes(), [&](int i) {
    const NodeSystem s = build_node_system(mesh, material, sol, loads, i, cost);
    moments[i] = solve_node_system(s);
    spokes[i] = s.spokes;
  });

  TractionField h;
  h.values.assign(mesh.n_edges(), Mat2::Zero());
  for (int g = 0; g < mesh.n_edges(); ++g) {
    const Edge& ed = mesh.edges[g];
    const double l = mesh.edge_length(g);
    Vec2 b0, b1;  // moments against the hats of n0 and n1
    for (int side = 0; side < 2; ++side) {
      const int vertex = side == 0 ? ed.n0 : ed.n1;
      const auto& sp = spokes[vertex];
      const size_t k = std::find(sp.begin(), sp.end(), g) - sp.begin();
      (side == 0 ? b0 : b1) = moments[vertex].segment<2>(2 * k);
    }
    // Edge mass system (l/6) [2 1; 1 2] per component.
    Mat2 mass;
    mass << l / 3.0, l / 6.0, l / 6.0, l / 3.0;
    const Mat2 inv = mass.inverse();
    for (int c = 0; c < 2; ++c) {
      const Vec2 f = inv * Vec2(b0[c], b1[c]);
      h.values[g](0, c) = f[0];
      h.values[g](1, c) = f[1];
    }
  }
  return h;
}

}  // namespace verifem
