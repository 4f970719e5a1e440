#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "eqtri/spectrum.hpp"

using namespace eqtri;

namespace {

// Multiset of epsilon values by direct search over a generous box.
std::map<std::int64_t, int> brute_force(Variant variant, std::int64_t eps_max) {
  std::map<std::int64_t, int> out;
  for (int n = 1; n <= 200; ++n) {
    for (int m = 2 * n; m <= 400; ++m) {
      const auto e = epsilon(m, n);
      if (e > eps_max) continue;
      if (m == 2 * n) {
        if (variant == Variant::full) out[e] += 1;
      } else {
        out[e] += variant == Variant::full ? 2 : 1;
      }
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("lowest full-well levels") {
    const auto levels = enumerate_levels(BilliardConfig::dimensionless(), 6);
    REQUIRE(levels.size() == 6);
    const double expected[] = {7.255, 11.082, 11.082, 14.510, 15.102, 15.102};
    for (std::size_t i = 0; i < 6; ++i) CHECK(levels[i].ka(1.0) == doctest::Approx(expected[i]).epsilon(1e-4));
    CHECK(levels[0].qn == QuantumNumbers{2, 1, Symmetry::special});
    CHECK(levels[1].qn == QuantumNumbers{3, 1, Symmetry::minus});
    CHECK(levels[2].qn == QuantumNumbers{3, 1, Symmetry::plus});
    CHECK(levels[1].degeneracy == 2);
    CHECK(levels[0].degeneracy == 1);
  }

  TEST_CASE("half well keeps the odd states only") {
    const auto levels = enumerate_levels(BilliardConfig::dimensionless(Variant::half), 5);
    std::vector<std::int64_t> eps;
    for (const auto& lv : levels) {
      CHECK(lv.qn.sym == Symmetry::minus);
      CHECK(lv.degeneracy == 1);
      eps.push_back(lv.epsilon);
    }
    CHECK(eps == std::vector<std::int64_t>{7, 13, 19, 21, 28});
  }

  TEST_CASE("level list matches a brute-force multiset") {
    for (auto variant : {Variant::full, Variant::half}) {
      const auto cfg = BilliardConfig::dimensionless(variant);
      const auto levels = levels_up_to(cfg, 2000);
      std::map<std::int64_t, int> got;
      for (const auto& lv : levels) got[lv.epsilon] += 1;
      CHECK(got == brute_force(variant, 2000));
      CHECK(std::is_sorted(levels.begin(), levels.end(),
                           [](const EnergyLevel& a, const EnergyLevel& b) { return a.epsilon < b.epsilon; }));
    }
  }

  TEST_CASE("accidental degeneracies are counted with multiplicity") {
    // eps(10,1) = eps(11,5) = 91
    const auto levels = levels_up_to(BilliardConfig::dimensionless(), 91);
    const auto count = std::count_if(levels.begin(), levels.end(), [](const EnergyLevel& l) { return l.epsilon == 91; });
    CHECK(count == 4);
    CHECK(brute_force(Variant::full, 91).at(91) == 4);
  }

  TEST_CASE("enumerate_levels is a prefix of the sorted list") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto first = enumerate_levels(cfg, 1000);
    REQUIRE(first.size() == 1000);
    const auto all = levels_up_to(cfg, first.back().epsilon);
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(first[i].qn == all[i].qn);
  }

  TEST_CASE("energy and wavenumber follow the units") {
    BilliardConfig cfg{2.0, 3.0, 0.5, Variant::full};
    const auto lv = energy({5, 2, Symmetry::plus}, cfg);
    CHECK(lv.epsilon == 19);
    CHECK(lv.energy == doctest::Approx(19 * cfg.energy_unit()));
    CHECK(lv.energy == doctest::Approx(cfg.hbar * cfg.hbar * lv.wavenumber * lv.wavenumber / (2 * cfg.mass)));
    CHECK(lv.ka(cfg.side) == doctest::Approx(4.0 * std::numbers::pi / 3.0 * std::sqrt(19.0)));
  }

  TEST_CASE("quantum-number validation") {
    CHECK_THROWS_AS(validate({1, 1, Symmetry::minus}, Variant::full), ValidationError);
    CHECK_THROWS_AS(validate({4, 2, Symmetry::minus}, Variant::full), ValidationError);
    CHECK_THROWS_AS(validate({5, 2, Symmetry::special}, Variant::full), ValidationError);
    CHECK_THROWS_AS(validate({5, 2, Symmetry::plus}, Variant::half), ValidationError);
    CHECK_THROWS_AS(validate({3, 0, Symmetry::minus}, Variant::full), ValidationError);
    CHECK_NOTHROW(validate({5, 2, Symmetry::minus}, Variant::half));
    CHECK(parse_symmetry("+") == Symmetry::plus);
    CHECK(parse_symmetry("o") == Symmetry::special);
    CHECK_THROWS_AS(parse_symmetry("odd"), ValidationError);
  }

  TEST_CASE("weyl count and staircase") {
    const auto cfg = BilliardConfig::dimensionless();
    CHECK_THROWS_AS(weyl_count(cfg, 0.0), ValidationError);
    CHECK_THROWS_AS(weyl_count(cfg, -1.0), ValidationError);
    const auto levels = enumerate_levels(cfg, 1000);
    for (std::size_t i = 0; i < levels.size(); i += 37) {
      const double e = levels[i].energy;
      const double n = static_cast<double>(staircase(levels, e));
      CHECK(std::abs(n - weyl_count(cfg, e)) <= 3.0 * std::sqrt(n) + 5.0);
    }
    CHECK(staircase(levels, 0.5 * levels[0].energy) == 0);
    CHECK(staircase(levels, levels[1].energy) == 3);
  }
}
