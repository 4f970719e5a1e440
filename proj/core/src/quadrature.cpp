#include "eqtri/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace eqtri {

GaussLegendre gauss_legendre(int order) {
  if (order < 1) throw ValidationError("quadrature order must be >= 1");
  const auto n = static_cast<std::size_t>(order);
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order == 1 ? 1.0 : order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

std::vector<WeightedPoint> triangle_rule(const BilliardConfig& cfg, int order) {
  cfg.validate();
  const GaussLegendre gl = gauss_legendre(order);
  const double h = cfg.height();
  const bool half = cfg.variant == Variant::half;
  std::vector<WeightedPoint> out;
  out.reserve(gl.nodes.size() * gl.nodes.size());
  for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
    const double y = 0.5 * h * (gl.nodes[j] + 1.0);
    const double wy = 0.5 * h * gl.weights[j];
    const double xmax = y / std::numbers::sqrt3;
    const double xmin = half ? 0.0 : -xmax;
    const double mid = 0.5 * (xmin + xmax);
    const double len = 0.5 * (xmax - xmin);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      out.push_back({{mid + len * gl.nodes[i], y}, wy * len * gl.weights[i]});
    }
  }
  return out;
}

}  // namespace eqtri
