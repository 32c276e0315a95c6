#include "verifem/basis.hpp"

#include <cmath>

namespace verifem {

namespace {

// Monomials x^a y^b with a+b <= d in a fixed order.
std::vector<std::array<int, 2>> monomials(int d) {
  std::vector<std::array<int, 2>> m;
  for (int t = 0; t <= d; ++t)
    for (int a = t; a >= 0; --a) m.push_back({a, t - a});
  return m;
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Uniform lattice nodes in barycentric multiples of 1/d: vertices, then the
// interior nodes of local edge k walked from vertex (k+1) to (k+2), then the
// interior lattice.
std::vector<Vec2> lattice_nodes(int d) {
  const auto pt = [d](int i1, int i2) {
    return Vec2(double(i1) / d, double(i2) / d);
  };
  std::vector<Vec2> nodes = {pt(0, 0), pt(d, 0), pt(0, d)};
  if (d >= 2) {
    for (int t = 1; t < d; ++t) nodes.push_back(pt(d - t, t));  // edge 0: v1->v2
    for (int t = 1; t < d; ++t) nodes.push_back(pt(0, d - t));  // edge 1: v2->v0
    for (int t = 1; t < d; ++t) nodes.push_back(pt(t, 0));      // edge 2: v0->v1
  }
  for (int j = 1; j < d; ++j)
    for (int i = 1; i + j < d; ++i) nodes.push_back(pt(i, j));
  return nodes;
}

// Legendre P_{k-1} combinations entering the edge kernels:
// phi_k(s) = -4 P'_{k-1}(s) / ((k-1) k), so that lambda_a lambda_b phi_k
// restricted to the edge equals the integrated Legendre mode L_k.
double edge_kernel(int k, double s) {
  switch (k) {
    case 2: return -2.0;
    case 3: return -2.0 * s;
    case 4: return -(5.0 * s * s - 1.0) / 2.0;
    default: throw ValidationError("basis: edge kernel degree out of range");
  }
}

double edge_kernel_deriv(int k, double s) {
  switch (k) {
    case 2: return 0.0;
    case 3: return -2.0;
    case 4: return -5.0 * s;
    default: throw ValidationError("basis: edge kernel degree out of range");
  }
}

double legendre(int k, double x) {
  double p0 = 1.0, p1 = x;
  if (k == 0) return p0;
  if (k == 1) return p1;
  for (int n = 2; n <= k; ++n) {
    const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

TriBasis::TriBasis(BasisKind kind, int degree) : kind_(kind), degree_(degree) {
  if (degree < 1 || degree > 4)
    throw ValidationError("basis: triangle degree must be 1..4");

  const int d = degree;
  for (int v = 0; v < 3; ++v) dofs_.push_back({Dof::vertex, v, 1});
  if (kind == BasisKind::lagrange) {
    for (int e = 0; e < 3; ++e)
      for (int t = 1; t < d; ++t) dofs_.push_back({Dof::edge, e, t});
    const int ni = (d - 1) * (d - 2) / 2;
    for (int i = 0; i < ni; ++i) dofs_.push_back({Dof::interior, -1, d});

    const auto nodes = lattice_nodes(d);
    const auto mono = monomials(d);
    const int n = static_cast<int>(nodes.size());
    MatX v(n, n);
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m)
        v(i, m) = ipow(nodes[i].x(), mono[m][0]) * ipow(nodes[i].y(), mono[m][1]);
    coeff_ = v.inverse().transpose();
  } else {
    for (int e = 0; e < 3; ++e)
      for (int k = 2; k <= d; ++k) dofs_.push_back({Dof::edge, e, k});
    if (d >= 3) dofs_.push_back({Dof::interior, -1, 3});
    if (d >= 4) {
      dofs_.push_back({Dof::interior, -1, 4});
      dofs_.push_back({Dof::interior, -1, 4});
    }
  }
}

VecX TriBasis::eval(const Vec2& xi, const std::array<int, 3>& orient) const {
  const int n = size();
  VecX vals(n);
  if (kind_ == BasisKind::lagrange) {
    const auto mono = monomials(degree_);
    VecX m(n);
    for (int k = 0; k < n; ++k)
      m[k] = ipow(xi.x(), mono[k][0]) * ipow(xi.y(), mono[k][1]);
    vals = coeff_ * m;
    return vals;
  }

  const double l[3] = {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
  vals[0] = l[0];
  vals[1] = l[1];
  vals[2] = l[2];
  int idx = 3;
  for (int e = 0; e < 3; ++e) {
    int a = (e + 1) % 3, b = (e + 2) % 3;
    if (orient[e] < 0) std::swap(a, b);
    const double s = l[b] - l[a];
    const double pr = l[a] * l[b];
    for (int k = 2; k <= degree_; ++k) vals[idx++] = pr * edge_kernel(k, s);
  }
  if (degree_ >= 3) vals[idx++] = l[0] * l[1] * l[2];
  if (degree_ >= 4) {
    vals[idx++] = l[0] * l[1] * l[2] * (l[1] - l[0]);
    vals[idx++] = l[0] * l[1] * l[2] * (l[2] - l[0]);
  }
  return vals;
}

MatX TriBasis::eval_grad(const Vec2& xi, const std::array<int, 3>& orient) const {
  const int n = size();
  MatX g(n, 2);
  if (kind_ == BasisKind::lagrange) {
    const auto mono = monomials(degree_);
    MatX dm(n, 2);
    for (int k = 0; k < n; ++k) {
      const int a = mono[k][0], b = mono[k][1];
      dm(k, 0) = a == 0 ? 0.0 : a * ipow(xi.x(), a - 1) * ipow(xi.y(), b);
      dm(k, 1) = b == 0 ? 0.0 : b * ipow(xi.x(), a) * ipow(xi.y(), b - 1);
    }
    g = coeff_ * dm;
    return g;
  }

  const double l[3] = {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
  const Vec2 dl[3] = {Vec2(-1.0, -1.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
  g.row(0) = dl[0].transpose();
  g.row(1) = dl[1].transpose();
  g.row(2) = dl[2].transpose();
  int idx = 3;
  for (int e = 0; e < 3; ++e) {
    int a = (e + 1) % 3, b = (e + 2) % 3;
    if (orient[e] < 0) std::swap(a, b);
    const double s = l[b] - l[a];
    const Vec2 ds = dl[b] - dl[a];
    const double pr = l[a] * l[b];
    const Vec2 dpr = l[b] * dl[a] + l[a] * dl[b];
    for (int k = 2; k <= degree_; ++k) {
      g.row(idx++) =
          (dpr * edge_kernel(k, s) + pr * edge_kernel_deriv(k, s) * ds)
              .transpose();
    }
  }
  const double bub = l[0] * l[1] * l[2];
  const Vec2 dbub =
      l[1] * l[2] * dl[0] + l[0] * l[2] * dl[1] + l[0] * l[1] * dl[2];
  if (degree_ >= 3) g.row(idx++) = dbub.transpose();
  if (degree_ >= 4) {
    g.row(idx++) = (dbub * (l[1] - l[0]) + bub * (dl[1] - dl[0])).transpose();
    g.row(idx++) = (dbub * (l[2] - l[0]) + bub * (dl[2] - dl[0])).transpose();
  }
  return g;
}

EdgeBasis::EdgeBasis(BasisKind kind, int degree) : kind_(kind), degree_(degree) {
  if (degree < 1 || degree > 4)
    throw ValidationError("basis: edge degree must be 1..4");
}

VecX EdgeBasis::eval(double t) const {
  VecX vals(size());
  if (kind_ == BasisKind::lagrange) {
    // Nodal on the uniform lattice: endpoints first, then interior nodes.
    const int d = degree_;
    std::vector<double> nodes = {0.0, 1.0};
    for (int k = 1; k < d; ++k) nodes.push_back(double(k) / d);
    for (int i = 0; i <= d; ++i) {
      double v = 1.0;
      for (int j = 0; j <= d; ++j)
        if (j != i) v *= (t - nodes[j]) / (nodes[i] - nodes[j]);
      vals[i] = v;
    }
    return vals;
  }
  vals[0] = 1.0 - t;
  vals[1] = t;
  const double x = 2.0 * t - 1.0;
  for (int k = 2; k <= degree_; ++k)
    vals[k] = (legendre(k, x) - legendre(k - 2, x)) / (2.0 * k - 1.0);
  return vals;
}

}  // namespace verifem
