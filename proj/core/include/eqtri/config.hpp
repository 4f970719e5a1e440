#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eqtri {

/// Thrown when caller-supplied parameters violate a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The equilateral triangle, or the 30-60-90 triangle obtained by folding it
/// along the bisector x = 0.
enum class Variant { full, half };

std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view text);

/// Geometry and units of the billiard.
///
/// The triangle has vertices (0,0), (a/2, sqrt(3)a/2) and (-a/2, sqrt(3)a/2).
/// The half variant keeps the x >= 0 part. Defaults give the dimensionless
/// convention hbar = 2 mass = side = 1 in which every reported number is
/// quoted.
struct BilliardConfig {
  double side = 1.0;
  double mass = 0.5;
  double hbar = 1.0;
  Variant variant = Variant::full;

  static BilliardConfig dimensionless(Variant variant = Variant::full);

  /// Throws ValidationError unless side, mass and hbar are positive and finite.
  void validate() const;

  double area() const;
  double perimeter() const;
  double height() const;

  /// E0 = (hbar^2 / 2 mass side^2) (4 pi / 3)^2; every level is E0 times an integer.
  double energy_unit() const;

  /// T_rev = 9 mass side^2 / (4 hbar pi). E0 * T_rev / hbar = 2 pi exactly.
  double revival_time() const;

  BilliardConfig with_variant(Variant v) const {
    BilliardConfig copy = *this;
    copy.variant = v;
    return copy;
  }
};

}  // namespace eqtri
