#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "eqtri/wavepacket.hpp"

using namespace eqtri;

namespace {

const double kWidth = 1.0 / (10.0 * std::numbers::sqrt2);
const double kCentroid = std::numbers::sqrt3 / 3.0;

std::complex<double> oracle(TrigKind kind, double kappa, double x0, double p0, double b) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double x, bool imag) {
    const double trig = kind == TrigKind::cos ? std::cos(kappa * x) : std::sin(kappa * x);
    const double env = std::exp(-(x - x0) * (x - x0) / (2.0 * b * b));
    const double ph = p0 * (x - x0);
    return env * trig * (imag ? std::sin(ph) : std::cos(ph));
  };
  // Fixed panels short enough that each spans about one oscillation.
  const double lo = x0 - 12.0 * b;
  const double width = 24.0 * b / 400.0;
  double re = 0.0;
  double im = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double a = lo + k * width;
    re += gauss_kronrod<double, 61>::integrate([&](double x) { return f(x, false); }, a, a + width, 0);
    im += gauss_kronrod<double, 61>::integrate([&](double x) { return f(x, true); }, a, a + width, 0);
  }
  return {re, im};
}

double gaussian_density(const GaussianPacket& pk, Point2D p) {
  const double r2 = (p.x - pk.x0) * (p.x - pk.x0) + (p.y - pk.y0) * (p.y - pk.y0);
  return std::exp(-r2 / (pk.width * pk.width)) / (std::numbers::pi * pk.width * pk.width);
}

}  // namespace

TEST_SUITE("wavepacket") {
  TEST_CASE("closed-form Gaussian integrals match adaptive quadrature") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int draw = 0; draw < 25; ++draw) {
      const double b = 0.03 + 0.17 * u(rng);
      const double x0 = 2.0 * u(rng) - 1.0;
      const double p0 = 400.0 * u(rng) - 200.0;
      const double kappa = (u(rng) < 0.5 ? p0 : -p0) + (6.0 * u(rng) - 3.0) / b;
      for (auto kind : {TrigKind::cos, TrigKind::sin}) {
        const auto got = gaussian_trig_integral(kind, kappa, x0, p0, b);
        const auto want = oracle(kind, kappa, x0, p0, b);
        CAPTURE(draw);
        CHECK(std::abs(got - want) <= 1e-10 * std::abs(want));
      }
    }
  }

  TEST_CASE("integral validation") {
    CHECK_THROWS_AS(gaussian_trig_integral(TrigKind::cos, 1.0, 0.0, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(gaussian_trig_integral(TrigKind::cos, 1.0, 0.0, 0.0, 0.1, -1.0), ValidationError);
    CHECK_THROWS_AS(GaussianPacket::from_polar(0, 0.5, 1.0, 0.0, -0.1).validate(), ValidationError);
  }

  TEST_CASE("packet accessors") {
    const auto pk = GaussianPacket::from_polar(0.0, 0.5, 10.0, 30.0, 0.2);
    CHECK(pk.momentum() == doctest::Approx(10.0));
    CHECK(pk.angle_deg() == doctest::Approx(30.0));
    CHECK(pk.position_spread() * pk.momentum_spread(1.0) == doctest::Approx(0.5));
  }

  TEST_CASE("centroid packet at rest") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto pk = GaussianPacket::from_polar(0.0, kCentroid, 0.0, 0.0, kWidth);
    const auto table = expand(pk, cfg);
    CHECK(table.captured_norm >= 0.999);
    CHECK(table.warnings.empty());
    CHECK(energy_expectation(table, cfg) == doctest::Approx(packet_energy(pk, cfg)).epsilon(1e-3));
    double worst = 0.0;
    for (const auto& c : table.coefficients) {
      if ((c.qn.m + c.qn.n) % 3 != 0) worst = std::max(worst, std::abs(c.amplitude));
    }
    CHECK(worst < 1e-10);
    // The even-in-x packet has no overlap with the odd states.
    for (const auto& c : table.coefficients) {
      if (c.qn.sym == Symmetry::minus) CHECK(std::abs(c.amplitude) < 1e-12);
    }
  }

  TEST_CASE("spectral weights") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto table = expand(GaussianPacket::from_polar(0.05, 0.5, 0.0, 0.0, kWidth), cfg);
    const auto w = spectral_weights(table);
    double total = 0.0;
    for (std::size_t i = 0; i < w.weight.size(); ++i) {
      total += w.weight[i];
      if (i > 0) CHECK(w.epsilon[i] > w.epsilon[i - 1]);
    }
    CHECK(total == doctest::Approx(table.captured_norm).epsilon(1e-13));
  }

  TEST_CASE("autocorrelation starts at the captured norm and is T_rev periodic") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto table = expand(GaussianPacket::from_polar(0.1, 0.45, 0.0, 0.0, kWidth), cfg);
    const double t = cfg.revival_time();
    const std::vector<double> times{0.0, 0.123 * t, t, 1.123 * t, 7.0 * t};
    const auto a = autocorrelation(table, cfg, times);
    CHECK(std::abs(a.values[0]) == doctest::Approx(table.captured_norm).epsilon(1e-14));
    CHECK(std::abs(a.values[2] - a.values[0]) < 1e-12);
    CHECK(std::abs(a.values[3] - a.values[1]) < 1e-12);
    CHECK(std::abs(a.values[4] - a.values[0]) < 1e-12);
    CHECK_FALSE(a.tau.has_value());
  }

  TEST_CASE("density at t = 0 reproduces the Gaussian") {
    const auto cfg = BilliardConfig::dimensionless();
    // Well inside: the mirror-image overlap exp(-d^2/b^2) is below 1e-6.
    const auto pk = GaussianPacket::from_polar(0.0, 0.56, 40.0, 20.0, kWidth);
    const auto table = expand(pk, cfg);
    const double peak = 1.0 / (std::numbers::pi * kWidth * kWidth);
    const std::vector<Point2D> pts{{0.0, 0.56}, {0.03, 0.58}, {-0.06, 0.52}, {0.05, 0.62}, {0.0, 0.48}};
    const auto d = density_at(table, cfg, 0.0, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(d[i] - gaussian_density(pk, pts[i])) < 1e-6 * peak);
  }

  TEST_CASE("grid snapshot agrees with direct summation and integrates to the norm") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto pk = GaussianPacket::from_polar(0.0, 0.5, 100.0, 45.0, kWidth);
    const auto table = expand(pk, cfg);
    const double t = 0.0137;
    const auto grid = density_snapshot(table, cfg, t, {81, 71});
    std::vector<Point2D> pts;
    std::vector<std::pair<std::size_t, std::size_t>> where;
    for (std::size_t iy = 5; iy < 71; iy += 13) {
      for (std::size_t ix = 3; ix < 81; ix += 11) {
        if (!grid.inside[iy * 81 + ix]) continue;
        pts.push_back({grid.xs[ix], grid.ys[iy]});
        where.push_back({ix, iy});
      }
    }
    REQUIRE(pts.size() > 5);
    const auto direct = density_at(table, cfg, t, pts);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      CHECK(grid.at(where[k].first, where[k].second) == doctest::Approx(direct[k]).scale(1.0).epsilon(1e-9));
    }
    const auto fine = density_snapshot(table, cfg, t, {401, 401});
    const double cell = (fine.xs[1] - fine.xs[0]) * (fine.ys[1] - fine.ys[0]);
    double total = 0.0;
    for (double v : fine.density) total += v * cell;
    CHECK(total == doctest::Approx(table.captured_norm).epsilon(2e-2));
  }

  TEST_CASE("placement warnings") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto close = GaussianPacket::from_polar(0.0, 0.8, 0.0, 0.0, kWidth);
    const auto pl = check_placement(close, cfg);
    CHECK_FALSE(pl.well_inside);
    CHECK(pl.wall_distance == doctest::Approx(std::sqrt(3.0) / 2.0 - 0.8));
    CHECK(pl.required == doctest::Approx(3.0 * kWidth / std::sqrt(2.0)));
    const auto table = expand(close, cfg);
    CHECK_FALSE(table.warnings.empty());
    const auto outside = check_placement(GaussianPacket::from_polar(0.4, 0.2, 0.0, 0.0, kWidth), cfg);
    CHECK(outside.wall_distance < 0.0);
    const auto half = check_placement(GaussianPacket::from_polar(0.02, 0.5, 0.0, 0.0, kWidth), cfg.with_variant(Variant::half));
    CHECK(half.wall_distance == doctest::Approx(0.02));
  }

  TEST_CASE("energy expectation refuses a truncated expansion") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto pk = GaussianPacket::from_polar(0.0, kCentroid, 0.0, 0.0, kWidth);
    const auto table = expand(pk, cfg, Truncation{20.0});
    CHECK(table.captured_norm < 0.999);
    CHECK_FALSE(table.warnings.empty());
    CHECK_THROWS_AS(energy_expectation(table, cfg), ValidationError);
  }

  TEST_CASE("half-well expansion uses odd states only") {
    const auto cfg = BilliardConfig::dimensionless(Variant::half);
    const auto table = expand(GaussianPacket::from_polar(0.2, 0.6, 30.0, 60.0, 0.03), cfg);
    CHECK(table.captured_norm == doctest::Approx(1.0).epsilon(1e-6));
    for (const auto& c : table.coefficients) CHECK(c.qn.sym == Symmetry::minus);
    CHECK(table.find({3, 1, Symmetry::minus}).has_value());
    CHECK_FALSE(table.find({3, 1, Symmetry::plus}).has_value());
  }

  TEST_CASE("timescales from packet parameters") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto pk = GaussianPacket::from_polar(0.0, kCentroid, 1500.0, 0.0, kWidth);
    const auto ts = timescales(pk, cfg);
    CHECK(*ts.spreading == doctest::Approx(2.5e-3));
    CHECK(ts.speed == doctest::Approx(3000.0));
    CHECK(ts.closed_orbit_period(1, 0) == doctest::Approx(std::sqrt(3.0) / 3000.0));
    CHECK(ts.closed_orbit_period(1, 1) == doctest::Approx(1e-3));
    CHECK(ts.revival == doctest::Approx(9.0 * 0.5 / (4.0 * std::numbers::pi)));
  }

  TEST_CASE("central quantum numbers put p T_m = q T_n on the closed-orbit period") {
    const auto cfg = BilliardConfig::dimensionless();
    // launch along the (3,1) family, which is (p,q) = (2,1)
    const double theta = std::atan(1.0 / (3.0 * std::sqrt(3.0))) * 180.0 / std::numbers::pi;
    const auto pk = GaussianPacket::from_polar(0.0, kCentroid, 1500.0, theta, kWidth);
    const auto ts = timescales(pk, cfg);
    REQUIRE(ts.period_m.has_value());
    REQUIRE(ts.period_n.has_value());
    const double tcl = ts.closed_orbit_period(2, 1);
    CHECK(2.0 * *ts.period_m == doctest::Approx(tcl).epsilon(1e-9));
    CHECK(1.0 * *ts.period_n == doctest::Approx(tcl).epsilon(1e-9));
    // The central level carries the packet energy.
    const double e = cfg.energy_unit() * (ts.central_m * ts.central_m + ts.central_n * ts.central_n -
                                          ts.central_m * ts.central_n);
    CHECK(e == doctest::Approx(1500.0 * 1500.0 / (2.0 * cfg.mass)).epsilon(1e-12));
  }

  TEST_CASE("timescales from a level") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto ts = timescales(4, 2, cfg);
    CHECK(*ts.period_m == doctest::Approx(cfg.revival_time() / 6.0));
    CHECK_FALSE(ts.period_n.has_value());
    CHECK_FALSE(ts.spreading.has_value());
    const auto rest = timescales(GaussianPacket::from_polar(0, 0.5, 0.0, 0.0, 0.1), cfg);
    CHECK_THROWS_AS(rest.closed_orbit_period(1, 0), ValidationError);
  }

  TEST_CASE("revival scan on the centroid packet") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto table = expand(GaussianPacket::from_polar(0.0, kCentroid, 0.0, 0.0, kWidth), cfg);
    const std::vector<int> fr{1, 9};
    const auto rep = revival_scan(table, cfg, fr);
    REQUIRE(rep.fractions.size() == 2);
    CHECK(rep.fractions[0].all_revived);
    CHECK(rep.fractions[1].samples.size() == 9);
    CHECK(rep.fractions[1].all_revived);
    for (const auto& s : rep.fractions[1].samples) CHECK(s.local_max);
    const std::vector<int> bad{0};
    CHECK_THROWS_AS(revival_scan(table, cfg, bad), ValidationError);
  }

  TEST_CASE("closed-orbit markers") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto pk = GaussianPacket::from_polar(0.0, kCentroid, 1500.0, 0.0, kWidth);
    const auto table = expand(pk, cfg, Truncation{200.0});
    const double tau = 1.0 / 3000.0;
    const std::vector<double> times{0.0, 12.0 * tau};
    const auto a = autocorrelation(table, cfg, times, pk);
    REQUIRE(a.tau.has_value());
    CHECK(*a.tau == doctest::Approx(tau));
    bool saw = false;
    for (const auto& m : a.markers) {
      CHECK(m.period <= 12.0 * tau + 1e-15);
      saw = saw || (m.orbit == "(2,0)" && std::abs(m.period / tau - 3.0) < 1e-9);
    }
    CHECK(saw);
  }

  TEST_CASE("autocorrelation is independent of the thread count") {
    const auto cfg = BilliardConfig::dimensionless();
    const auto table = expand(GaussianPacket::from_polar(0.0, 0.5, 300.0, 12.0, kWidth), cfg);
    std::vector<double> times(301);
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = 1e-5 * i;
    ::setenv("EQTRI_THREADS", "1", 1);
    const auto one = autocorrelation(table, cfg, times);
    ::setenv("EQTRI_THREADS", "3", 1);
    const auto three = autocorrelation(table, cfg, times);
    ::unsetenv("EQTRI_THREADS");
    CHECK(one.values == three.values);
  }
}
