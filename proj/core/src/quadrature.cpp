#include "verifem/quadrature.hpp"

#include <cmath>
#include <mutex>

namespace verifem {

namespace {

constexpr int kMaxDegree = 10;

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

EdgeRule make_edge_rule(int degree) {
  EdgeRule r;
  r.exactness = degree;
  const int n = degree / 2 + 1;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.points[i] = 0.5 * (x[i] + 1.0);
    r.weights[i] = 0.5 * w[i];
  }
  return r;
}

// Conical product rule: map (u,v) in [0,1]^2 to (u, v(1-u)) with Jacobian
// (1-u). A polynomial of total degree d becomes degree d+1 in u and d in v.
TriRule make_triangle_rule(int degree) {
  TriRule r;
  r.exactness = degree;
  const int nu = (degree + 1) / 2 + 1;
  const int nv = degree / 2 + 1;
  std::vector<double> xu, wu, xv, wv;
  gauss_legendre(nu, xu, wu);
  gauss_legendre(nv, xv, wv);
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      r.points.emplace_back(u, v * (1.0 - u));
      r.weights.push_back(0.25 * wu[i] * wv[j] * (1.0 - u));
    }
  }
  return r;
}

}  // namespace

const TriRule& triangle_rule(int degree) {
  if (degree < 0 || degree > kMaxDegree)
    throw ValidationError("quadrature: triangle degree out of range");
  static std::vector<TriRule> cache(kMaxDegree + 1);
  static std::once_flag once;
  std::call_once(once, [] {
    for (int d = 0; d <= kMaxDegree; ++d) cache[d] = make_triangle_rule(d);
  });
  return cache[degree];
}

const EdgeRule& edge_rule(int degree) {
  if (degree < 0 || degree > 2 * kMaxDegree)
    throw ValidationError("quadrature: edge degree out of range");
  static std::vector<EdgeRule> cache(2 * kMaxDegree + 1);
  static std::once_flag once;
  std::call_once(once, [] {
    for (int d = 0; d <= 2 * kMaxDegree; ++d) cache[d] = make_edge_rule(d);
  });
  return cache[degree];
}

}  // namespace verifem
