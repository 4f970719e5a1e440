#include "eqtri/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

namespace eqtri {

std::string_view to_string(Symmetry sym) {
  switch (sym) {
    case Symmetry::minus: return "minus";
    case Symmetry::plus: return "plus";
    case Symmetry::special: return "special";
  }
  return "?";
}

Symmetry parse_symmetry(std::string_view text) {
  if (text == "minus" || text == "-") return Symmetry::minus;
  if (text == "plus" || text == "+") return Symmetry::plus;
  if (text == "special" || text == "o") return Symmetry::special;
  throw ValidationError("unknown symmetry '" + std::string(text) + "' (expected plus|minus|special)");
}

void validate(const QuantumNumbers& qn, Variant variant) {
  if (qn.n < 1) throw ValidationError("quantum number n must be >= 1");
  if (qn.m < 2 * qn.n) throw ValidationError("quantum numbers must satisfy m >= 2n");
  if ((qn.m == 2 * qn.n) != (qn.sym == Symmetry::special))
    throw ValidationError("symmetry 'special' is required exactly when m == 2n");
  if (variant == Variant::half && qn.sym != Symmetry::minus)
    throw ValidationError("the half well admits only minus-symmetry states with m > 2n");
}

EnergyLevel energy(const QuantumNumbers& qn, const BilliardConfig& cfg) {
  cfg.validate();
  validate(qn, cfg.variant);
  EnergyLevel level;
  level.qn = qn;
  level.epsilon = epsilon(qn.m, qn.n);
  level.energy = cfg.energy_unit() * static_cast<double>(level.epsilon);
  level.wavenumber = 4.0 * std::numbers::pi / 3.0 *
                     std::sqrt(static_cast<double>(level.epsilon)) / cfg.side;
  level.degeneracy = (qn.m > 2 * qn.n && cfg.variant == Variant::full) ? 2 : 1;
  return level;
}

namespace {

bool level_less(const EnergyLevel& a, const EnergyLevel& b) {
  return std::tie(a.epsilon, a.qn.m, a.qn.n, a.qn.sym) <
         std::tie(b.epsilon, b.qn.m, b.qn.n, b.qn.sym);
}

}  // namespace

std::vector<EnergyLevel> levels_up_to(const BilliardConfig& cfg, std::int64_t epsilon_max) {
  cfg.validate();
  std::vector<EnergyLevel> out;
  // In the wedge m >= 2n, epsilon grows with m and its minimum 3n^2 sits at
  // m = 2n, so both loops can stop at the first value above the cutoff.
  for (std::int64_t n = 1; 3 * n * n <= epsilon_max; ++n) {
    for (std::int64_t m = 2 * n; epsilon(m, n) <= epsilon_max; ++m) {
      const int mi = static_cast<int>(m);
      const int ni = static_cast<int>(n);
      if (m == 2 * n) {
        if (cfg.variant == Variant::full) out.push_back(energy({mi, ni, Symmetry::special}, cfg));
        continue;
      }
      out.push_back(energy({mi, ni, Symmetry::minus}, cfg));
      if (cfg.variant == Variant::full) out.push_back(energy({mi, ni, Symmetry::plus}, cfg));
    }
  }
  std::sort(out.begin(), out.end(), level_less);
  return out;
}

std::vector<EnergyLevel> enumerate_levels(const BilliardConfig& cfg, std::size_t count) {
  if (count == 0) throw ValidationError("level count must be >= 1");
  cfg.validate();
  // Invert the leading Weyl term for a first guess, then widen until enough.
  const double per_eps = (cfg.variant == Variant::full ? 1.0 : 0.5) * std::numbers::pi / (3.0 * std::sqrt(3.0));
  auto cutoff = static_cast<std::int64_t>(1.2 * static_cast<double>(count) / per_eps) + 16;
  std::vector<EnergyLevel> levels = levels_up_to(cfg, cutoff);
  while (levels.size() < count) {
    cutoff *= 2;
    levels = levels_up_to(cfg, cutoff);
  }
  levels.resize(count);
  return levels;
}

double weyl_count(const BilliardConfig& cfg, double e) {
  cfg.validate();
  if (!(e > 0.0)) throw ValidationError("Weyl count requires E > 0");
  const double scale = 2.0 * cfg.mass / (cfg.hbar * cfg.hbar);
  const double four_pi = 4.0 * std::numbers::pi;
  return cfg.area() / four_pi * scale * e - cfg.perimeter() / four_pi * std::sqrt(scale * e);
}

std::size_t staircase(const std::vector<EnergyLevel>& sorted_levels, double e) {
  auto it = std::upper_bound(sorted_levels.begin(), sorted_levels.end(), e,
                             [](double value, const EnergyLevel& l) { return value < l.energy; });
  return static_cast<std::size_t>(it - sorted_levels.begin());
}

}  // namespace eqtri
