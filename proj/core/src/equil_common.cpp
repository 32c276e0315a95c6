#include "verifem/equil_common.hpp"

#include "verifem/quadrature.hpp"

namespace verifem {

namespace {

Mat2 voigt_to_matrix(const Vec3& s) {
  Mat2 m;
  m << s[0], s[2], s[2], s[1];
  return m;
}

}  // namespace

const char* cost_name(CostKind kind) {
  switch (kind) {
    case CostKind::J0: return "J0";
    case CostKind::J1: return "J1";
    case CostKind::J2: return "J2";
  }
  return "?";
}

Mat2 fe_stress_projection(const Mesh& mesh, const FemSolution& sol,
                          const LoadCase& loads, int g) {
  const Edge& ed = mesh.edges[g];
  const Vec2 n = mesh.edge_normal(g);
  Mat2 out = Mat2::Zero();
  if (!ed.on_boundary()) {
    // Both one-sided tractions, rotated to the canonical orientation by the
    // edge signs, reduce to the plain average against the canonical normal.
    const Vec2 avg = 0.5 * (voigt_to_matrix(sol.stress[ed.elem[0]]) +
                            voigt_to_matrix(sol.stress[ed.elem[1]])) * n;
    out.row(0) = avg.transpose();
    out.row(1) = avg.transpose();
    return out;
  }
  const Vec2 one_sided = voigt_to_matrix(sol.stress[ed.elem[0]]) * n;
  for (int c = 0; c < 2; ++c) {
    if (loads.traction_known(mesh, g, c)) {
      out(0, c) = loads.boundary[g].traction(0, c);
      out(1, c) = loads.boundary[g].traction(1, c);
    } else {
      out(0, c) = one_sided[c];
      out(1, c) = one_sided[c];
    }
  }
  return out;
}

std::vector<Vec2> node_load_vectors(const Mesh& mesh, const FemSolution& sol,
                                    const LoadCase& loads, int vertex) {
  std::vector<Vec2> q;
  const TriRule& rule = triangle_rule(2);
  for (int e : mesh.node_elements[vertex]) {
    const int a = mesh.local_node(vertex, e);
    const auto grads = mesh.barycentric_gradients(e);
    Vec2 qe = mesh.area(e) * voigt_to_matrix(sol.stress[e]) *
              grads.row(a).transpose();

    const auto& el = mesh.elements[e];
    const Vec2& p0 = mesh.nodes[el[0]];
    const Vec2& p1 = mesh.nodes[el[1]];
    const Vec2& p2 = mesh.nodes[el[2]];
    const double jac = 2.0 * mesh.area(e);
    for (size_t k = 0; k < rule.points.size(); ++k) {
      const Vec2& xi = rule.points[k];
      const double lam[3] = {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
      const Vec2 x = lam[0] * p0 + lam[1] * p1 + lam[2] * p2;
      qe -= rule.weights[k] * jac * lam[a] * loads.body_force(x);
    }
    q.push_back(qe);
  }
  return q;
}

Mat2 cost_weight_dir(CostKind kind, const Mesh& mesh,
                     const Material& material, int g) {
  const double l = mesh.edge_length(g);
  switch (kind) {
    case CostKind::J0:
      return Mat2::Identity();
    case CostKind::J1:
      return Mat2::Identity() / (l * l);
    case CostKind::J2: {
      const double e = material.young, nu = material.poisson;
      const Vec2 n = mesh.edge_normal(g);
      const Mat2 nn = n * n.transpose();
      const Mat2 d = (1.0 - 2.0 * nu) / (1.0 - nu) * nn +
                     2.0 * (Mat2::Identity() - nn);
      return (1.0 + nu) / e / (l * l) * d;
    }
  }
  return Mat2::Identity();
}

Eigen::Matrix4d cost_weight(CostKind kind, const Mesh& mesh,
                            const Material& material, int g) {
  const double l = mesh.edge_length(g);
  Mat2 mass;
  mass << l / 3.0, l / 6.0, l / 6.0, l / 3.0;
  const Mat2 d = cost_weight_dir(kind, mesh, material, g);
  Eigen::Matrix4d w;
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s)
      w.block<2, 2>(2 * r, 2 * s) = mass(r, s) * d;
  return w;
}

Vec3 element_equilibrium_residual(const Mesh& mesh, const LoadCase& loads,
                                  const TractionField& h, int e) {
  const Vec2 cen = mesh.centroid(e);
  const auto rigid = [&cen](const Vec2& x, int k) -> Vec2 {
    if (k == 0) return Vec2(1.0, 0.0);
    if (k == 1) return Vec2(0.0, 1.0);
    return Vec2(-(x.y() - cen.y()), x.x() - cen.x());
  };

  Vec3 r = Vec3::Zero();
  const EdgeRule& erule = edge_rule(3);
  for (int le = 0; le < 3; ++le) {
    const int g = mesh.element_edges[e][le];
    const Edge& ed = mesh.edges[g];
    const double sign = mesh.edge_sign(g, e);
    const double l = mesh.edge_length(g);
    for (size_t q = 0; q < erule.points.size(); ++q) {
      const double t = erule.points[q];
      const Vec2 x = (1.0 - t) * mesh.nodes[ed.n0] + t * mesh.nodes[ed.n1];
      const Vec2 tr = sign * h.eval(g, t);
      for (int k = 0; k < 3; ++k)
        r[k] += erule.weights[q] * l * tr.dot(rigid(x, k));
    }
  }

  const TriRule& rule = triangle_rule(3);
  const auto& el = mesh.elements[e];
  const double jac = 2.0 * mesh.area(e);
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const Vec2& xi = rule.points[q];
    const Vec2 x = (1.0 - xi.x() - xi.y()) * mesh.nodes[el[0]] +
                   xi.x() * mesh.nodes[el[1]] + xi.y() * mesh.nodes[el[2]];
    const Vec2 f = loads.body_force(x);
    for (int k = 0; k < 3; ++k)
      r[k] += rule.weights[q] * jac * f.dot(rigid(x, k));
  }
  return r;
}

}  // namespace verifem
