#pragma once

#include <vector>

#include "eqtri/config.hpp"

namespace eqtri {

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes by Newton iteration on P_n from the Chebyshev-like initial guess.
/// Throws ValidationError for order < 1.
GaussLegendre gauss_legendre(int order);

struct WeightedPoint {
  Point2D point;
  double weight = 0.0;
};

/// Tensor Gauss-Legendre rule on the billiard as an iterated integral:
/// y in [0, sqrt(3)a/2], x in [-y/sqrt(3), y/sqrt(3)] (half: x in [0, y/sqrt(3)]).
/// order^2 points; weights sum to the area.
std::vector<WeightedPoint> triangle_rule(const BilliardConfig& cfg, int order);

}  // namespace eqtri
