#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "eqtri/length_spectrum.hpp"

using namespace eqtri;

namespace {

// Full width at half maximum of the |rho|^2 peak nearest to `target`.
double fwhm_near(const LengthSpectrum& s, double target) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < s.lengths.size(); ++i) {
    if (std::abs(s.lengths[i] - target) < 0.05 && s.power(i) > s.power(best)) best = i;
  }
  const double half = s.power(best) / 2.0;
  std::size_t lo = best;
  std::size_t hi = best;
  while (lo > 0 && s.power(lo) > half) --lo;
  while (hi + 1 < s.lengths.size() && s.power(hi) > half) ++hi;
  return s.lengths[hi] - s.lengths[lo];
}

double nearest_peak(const std::vector<Peak>& peaks, double target) {
  double best = 1e9;
  for (const auto& p : peaks) {
    if (std::abs(p.length - target) < std::abs(best - target)) best = p.length;
  }
  return best;
}

}  // namespace

TEST_SUITE("length_spectrum") {
  TEST_CASE("grid and input validation") {
    const auto g = uniform_grid(1.0, 0.25);
    CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK_THROWS_AS(uniform_grid(1.0, 0.0), ValidationError);
    const auto cfg = BilliardConfig::dimensionless();
    CHECK_THROWS_AS(compute_rho(cfg, 0, g), ValidationError);
    const std::vector<double> bad{0.0, 0.5, 0.4};
    CHECK_THROWS_AS(compute_rho(cfg, 10, bad), ValidationError);
  }

  TEST_CASE("rho at L = 0 counts the levels") {
    const std::vector<double> zero{0.0};
    const auto s = compute_rho(BilliardConfig::dimensionless(), 250, zero);
    CHECK(s.rho[0].real() == doctest::Approx(250.0));
    CHECK(s.rho[0].imag() == doctest::Approx(0.0));
    CHECK(s.normalized_power()[0] == doctest::Approx(1.0));
  }

  TEST_CASE("peaks sharpen and stay put as N grows") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto grid = uniform_grid(8.0, 0.002);
    const auto coarse = compute_rho(cfg, 250, grid);
    const auto fine = compute_rho(cfg, 1000, grid);
    for (double target : {3.0, std::sqrt(3.0), 4.5826}) {
      CAPTURE(target);
      CHECK(fwhm_near(fine, target) < fwhm_near(coarse, target));
      const double a = nearest_peak(detect_peaks(coarse, 1.0), target);
      const double b = nearest_peak(detect_peaks(fine, 1.0), target);
      CHECK(std::abs(a - target) < 0.05);
      CHECK(std::abs(b - target) < 0.05);
    }
  }

  TEST_CASE("damping suppresses the high-k tail") {
    const auto cfg = BilliardConfig::dimensionless();
    const std::vector<double> zero{0.0};
    const auto s = compute_rho(cfg, 100, zero, {0.01});
    CHECK(s.rho[0].real() < 100.0);
    CHECK(s.rho[0].real() > 0.0);
  }

  TEST_CASE("detection honours the exclusion window and threshold") {
    LengthSpectrum s;
    s.level_count = 1;
    for (int i = 0; i < 200; ++i) {
      s.lengths.push_back(i * 0.01);
      s.rho.push_back({1.0, 0.0});
    }
    s.rho[20] = {10.0, 0.0};   // L = 0.2, excluded
    s.rho[100] = {10.0, 0.0};  // L = 1.0, kept
    s.rho[150] = {1.5, 0.0};   // below 5x median
    const auto peaks = detect_peaks(s, 1.0);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].length == doctest::Approx(1.0));
    CHECK(detect_peaks(s, 1.0, {1.5, 0.1}).size() == 3);
    LengthSpectrum tiny;
    CHECK(detect_peaks(tiny, 1.0).empty());
  }

  TEST_CASE("matching reports the nearest peak") {
    const std::vector<Peak> peaks{{1.0, 5.0}, {3.02, 5.0}};
    const std::vector<PredictedLength> targets{{"a", 3.0}, {"b", 7.0}};
    const auto m = match_peaks(peaks, targets, 0.05);
    CHECK(m[0].matched);
    CHECK(*m[0].detected == doctest::Approx(3.02));
    CHECK(m[0].residual == doctest::Approx(0.02));
    CHECK_FALSE(m[1].matched);
    const auto none = match_peaks({}, targets, 0.05);
    CHECK_FALSE(none[0].detected.has_value());
    CHECK(std::isinf(none[0].residual));
  }

  TEST_CASE("predicted lengths label repetitions") {
    const auto pl = predicted_lengths(enumerate_orbits(6.5, Variant::full));
    bool saw = false;
    for (const auto& p : pl) saw = saw || (p.orbit == "2*(2,0)" && std::abs(p.length - 6.0) < 1e-12);
    CHECK(saw);
    const auto without = predicted_lengths(enumerate_orbits(6.5, Variant::full), false);
    CHECK(without.size() < pl.size());
  }

  TEST_CASE("result is independent of the thread count") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto grid = uniform_grid(3.0, 0.01);
    ::setenv("EQTRI_THREADS", "1", 1);
    const auto one = compute_rho(cfg, 300, grid);
    ::setenv("EQTRI_THREADS", "4", 1);
    const auto four = compute_rho(cfg, 300, grid);
    ::unsetenv("EQTRI_THREADS");
    CHECK(one.rho == four.rho);
  }

  TEST_CASE("half well adds the folded isolated orbit") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto grid = uniform_grid(10.0, 0.002);
    const auto cmp = compare_variants(cfg, 1000, grid, 0.05);
    CHECK(cmp.shared_features_agree);
    CHECK(cmp.half_only_features_present);
    CHECK(cmp.half_only_matches.size() == 6);
  }
}
