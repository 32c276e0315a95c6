#pragma once

#include <vector>

#include "verifem/types.hpp"

namespace verifem {

// Quadrature on the reference triangle (0,0)-(1,0)-(0,1); weights sum to 1/2.
struct TriRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness = 0;
};

// Quadrature on the reference edge [0,1]; weights sum to 1.
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
  int exactness = 0;
};

// Exact for all polynomials of total degree <= degree (supported up to 10).
const TriRule& triangle_rule(int degree);
const EdgeRule& edge_rule(int degree);

}  // namespace verifem
