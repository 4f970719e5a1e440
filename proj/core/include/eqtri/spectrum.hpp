#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "eqtri/config.hpp"

namespace eqtri {

/// Symmetry label of an eigenstate. `minus` and `plus` are the x-odd and
/// x-even members of a degenerate m > 2n pair; `special` is the single
/// m = 2n state.
enum class Symmetry { minus, plus, special };

std::string_view to_string(Symmetry sym);
Symmetry parse_symmetry(std::string_view text);

struct QuantumNumbers {
  int m = 2;
  int n = 1;
  Symmetry sym = Symmetry::special;

  friend bool operator==(const QuantumNumbers&, const QuantumNumbers&) = default;
};

/// Throws ValidationError unless n >= 1, m >= 2n, sym == special exactly when
/// m == 2n, and (for the half variant) sym == minus.
void validate(const QuantumNumbers& qn, Variant variant);

/// m^2 + n^2 - mn. Defined for any integer pair; non-negative everywhere.
constexpr std::int64_t epsilon(std::int64_t m, std::int64_t n) { return m * m + n * n - m * n; }

struct EnergyLevel {
  QuantumNumbers qn;
  std::int64_t epsilon = 0;
  double energy = 0.0;      ///< E0 * epsilon
  double wavenumber = 0.0;  ///< k with E = hbar^2 k^2 / 2 mass
  int degeneracy = 1;

  double ka(double side) const { return wavenumber * side; }
};

EnergyLevel energy(const QuantumNumbers& qn, const BilliardConfig& cfg);

/// Every level with epsilon <= epsilon_max, counted with multiplicity and
/// sorted by (epsilon, m, sym) with minus before plus.
std::vector<EnergyLevel> levels_up_to(const BilliardConfig& cfg, std::int64_t epsilon_max);

/// The `count` lowest levels counted with multiplicity: a degenerate m > 2n
/// pair contributes two entries in the full well.
std::vector<EnergyLevel> enumerate_levels(const BilliardConfig& cfg, std::size_t count);

/// Smooth Weyl count N0(E) = (A/4pi)(2mu/hbar^2) E - (P/4pi) sqrt(2mu E/hbar^2).
/// Throws ValidationError for E <= 0.
double weyl_count(const BilliardConfig& cfg, double energy);

/// Exact staircase N(E): number of entries of a sorted level list with energy <= E.
std::size_t staircase(const std::vector<EnergyLevel>& sorted_levels, double energy);

}  // namespace eqtri
