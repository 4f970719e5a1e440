#include "eqtri/config.hpp"

#include <cmath>
#include <numbers>

namespace eqtri {

std::string_view to_string(Variant variant) {
  return variant == Variant::full ? "full" : "half";
}

Variant parse_variant(std::string_view text) {
  if (text == "full") return Variant::full;
  if (text == "half") return Variant::half;
  throw ValidationError("unknown variant '" + std::string(text) + "' (expected full|half)");
}

BilliardConfig BilliardConfig::dimensionless(Variant variant) {
  BilliardConfig cfg;
  cfg.variant = variant;
  return cfg;
}

void BilliardConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(side)) throw ValidationError("side length must be positive");
  if (!positive(mass)) throw ValidationError("mass must be positive");
  if (!positive(hbar)) throw ValidationError("hbar must be positive");
}

double BilliardConfig::area() const {
  const double full = std::numbers::sqrt3 * side * side / 4.0;
  return variant == Variant::full ? full : full / 2.0;
}

double BilliardConfig::perimeter() const {
  if (variant == Variant::full) return 3.0 * side;
  return (1.5 + std::numbers::sqrt3 / 2.0) * side;
}

double BilliardConfig::height() const { return std::numbers::sqrt3 * side / 2.0; }

double BilliardConfig::energy_unit() const {
  const double f = 4.0 * std::numbers::pi / 3.0;
  return hbar * hbar / (2.0 * mass * side * side) * f * f;
}

double BilliardConfig::revival_time() const {
  return 9.0 * mass * side * side / (4.0 * hbar * std::numbers::pi);
}

}  // namespace eqtri
