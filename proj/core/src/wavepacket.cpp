#include "eqtri/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "eqtri/orbits.hpp"
#include "eqtri/parallel.hpp"

namespace eqtri {

namespace {

using boost::math::cos_pi;
using boost::math::sin_pi;
using cplx = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrt3 = std::numbers::sqrt3;

// One separable term  weight * X_j(x) * sin(2 pi l y / (sqrt(3) a)),  with
// X_j = cos or sin of 2 pi j x / (3a) and j >= 0.
struct Term {
  TrigKind kind;
  int j;
  int l;
  double weight;
};

// Terms of the normalized eigenfunction, including the sqrt(2) of the half well.
std::vector<Term> terms_of(const QuantumNumbers& qn, Variant variant, double side) {
  const int m = qn.m;
  const int n = qn.n;
  const double pair = std::sqrt(16.0 / (3.0 * kSqrt3)) / side;
  const double special = std::sqrt(8.0 / (3.0 * kSqrt3)) / side;
  const double fold = variant == Variant::half ? kSqrt2 : 1.0;
  switch (qn.sym) {
    case Symmetry::minus:
      // -sin((2n-m) X) = +sin((m-2n) X) since m > 2n
      return {{TrigKind::sin, 2 * m - n, n, fold * pair},
              {TrigKind::sin, m - 2 * n, m, fold * pair},
              {TrigKind::sin, m + n, m - n, -fold * pair}};
    case Symmetry::plus:
      return {{TrigKind::cos, 2 * m - n, n, pair},
              {TrigKind::cos, m - 2 * n, m, -pair},
              {TrigKind::cos, m + n, m - n, pair}};
    case Symmetry::special:
      // cos(2 pi n x / a) = X_{3n}; the constant term is X_0 = cos(0).
      return {{TrigKind::cos, 3 * n, n, 2.0 * special}, {TrigKind::cos, 0, 2 * n, -special}};
  }
  return {};
}

double x_wavenumber(int j, double side) { return 2.0 * kPi * j / (3.0 * side); }
double y_wavenumber(int l, double side) { return 2.0 * kPi * l / (kSqrt3 * side); }

// frac(epsilon * frac(s)) so that whole revival periods drop out exactly.
double revival_phase(std::int64_t eps, double s) {
  const double sf = s - std::floor(s);
  const double x = static_cast<double>(eps) * sf;
  return x - std::floor(x);
}

struct Extent {
  int j_max = 0;
  int l_max = 0;
};

Extent extent_of(const ExpansionTable& table, double side) {
  Extent e;
  for (const auto& c : table.coefficients) {
    for (const auto& t : terms_of(c.qn, table.variant, side)) {
      e.j_max = std::max(e.j_max, t.j);
      e.l_max = std::max(e.l_max, t.l);
    }
  }
  return e;
}

std::vector<cplx> evolved_amplitudes(const ExpansionTable& table, const BilliardConfig& cfg, double t) {
  const double s = t / cfg.revival_time();
  std::vector<cplx> out(table.coefficients.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double ph = revival_phase(table.coefficients[i].epsilon, s);
    // exp(-i E t / hbar) = exp(-2 pi i eps s)
    out[i] = table.coefficients[i].amplitude * cplx(cos_pi(2.0 * ph), -sin_pi(2.0 * ph));
  }
  return out;
}

}  // namespace

GaussianPacket GaussianPacket::from_polar(double x0, double y0, double p0, double theta_deg, double width) {
  const double th = theta_deg * kPi / 180.0;
  return {x0, y0, p0 * std::cos(th), p0 * std::sin(th), width};
}

void GaussianPacket::validate() const {
  for (double v : {x0, y0, p0x, p0y, width}) {
    if (!std::isfinite(v)) throw ValidationError("packet parameters must be finite");
  }
  if (!(width > 0.0)) throw ValidationError("packet width b must be positive");
}

double GaussianPacket::momentum() const { return std::hypot(p0x, p0y); }
double GaussianPacket::angle_deg() const { return std::atan2(p0y, p0x) * 180.0 / kPi; }
double GaussianPacket::position_spread() const { return width / kSqrt2; }
double GaussianPacket::momentum_spread(double hbar) const { return hbar / (kSqrt2 * width); }

Placement check_placement(const GaussianPacket& packet, const BilliardConfig& cfg) {
  packet.validate();
  cfg.validate();
  const double h = cfg.height();
  double d = std::min({h - packet.y0, (packet.y0 - kSqrt3 * packet.x0) / 2.0,
                       (packet.y0 + kSqrt3 * packet.x0) / 2.0});
  if (cfg.variant == Variant::half) d = std::min(d, packet.x0);
  Placement p;
  p.wall_distance = d;
  p.required = 3.0 * packet.position_spread();
  p.well_inside = d >= p.required;
  return p;
}

std::complex<double> gaussian_trig_integral(TrigKind kind, double wavenumber, double x0, double p0,
                                            double width, double hbar) {
  if (!(width > 0.0)) throw ValidationError("packet width b must be positive");
  if (!(hbar > 0.0)) throw ValidationError("hbar must be positive");
  const double b2 = width * width;
  const double k0 = p0 / hbar;
  const double up = wavenumber + k0;
  const double dn = -wavenumber + k0;
  const cplx e_plus = std::polar(std::exp(-0.5 * b2 * up * up), wavenumber * x0);
  const cplx e_minus = std::polar(std::exp(-0.5 * b2 * dn * dn), -wavenumber * x0);
  const double pref = width * std::sqrt(2.0 * kPi) / 2.0;
  if (kind == TrigKind::cos) return pref * (e_plus + e_minus);
  return pref * (e_plus - e_minus) / cplx(0.0, 1.0);
}

Truncation Truncation::for_packet(const GaussianPacket& packet, const BilliardConfig& cfg) {
  packet.validate();
  cfg.validate();
  return {packet.momentum() / cfg.hbar + 10.0 / packet.width};
}

std::int64_t Truncation::epsilon_max(const BilliardConfig& cfg) const {
  const double r = k_max * cfg.side * 3.0 / (4.0 * kPi);
  return static_cast<std::int64_t>(std::floor(r * r));
}

std::optional<std::complex<double>> ExpansionTable::find(const QuantumNumbers& qn) const {
  for (const auto& c : coefficients) {
    if (c.qn == qn) return c.amplitude;
  }
  return std::nullopt;
}

ExpansionTable expand(const GaussianPacket& packet, const BilliardConfig& cfg,
                      std::optional<Truncation> truncation) {
  packet.validate();
  cfg.validate();
  const Truncation trunc = truncation.value_or(Truncation::for_packet(packet, cfg));
  if (!(trunc.k_max > 0.0) || !std::isfinite(trunc.k_max)) throw ValidationError("truncation k_max must be finite and positive");

  ExpansionTable table;
  table.variant = cfg.variant;
  table.epsilon_max = trunc.epsilon_max(cfg);
  table.placement = check_placement(packet, cfg);
  const auto levels = levels_up_to(cfg, table.epsilon_max);

  int j_max = 0;
  int l_max = 0;
  for (const auto& lv : levels) {
    j_max = std::max(j_max, 2 * lv.qn.m);
    l_max = std::max(l_max, 2 * lv.qn.m);
  }
  // All-space integrals per axis, shared by every coefficient.
  std::vector<cplx> ix_cos(j_max + 1), ix_sin(j_max + 1), iy_sin(l_max + 1);
  for (int j = 0; j <= j_max; ++j) {
    const double kx = x_wavenumber(j, cfg.side);
    ix_cos[j] = gaussian_trig_integral(TrigKind::cos, kx, packet.x0, packet.p0x, packet.width, cfg.hbar);
    ix_sin[j] = gaussian_trig_integral(TrigKind::sin, kx, packet.x0, packet.p0x, packet.width, cfg.hbar);
  }
  for (int l = 0; l <= l_max; ++l) {
    iy_sin[l] = gaussian_trig_integral(TrigKind::sin, y_wavenumber(l, cfg.side), packet.y0, packet.p0y,
                                       packet.width, cfg.hbar);
  }
  // The two 1D normalizations (b sqrt(pi))^(-1/2) multiply to 1/(b sqrt(pi)).
  const double packet_norm = 1.0 / (packet.width * std::sqrt(kPi));

  table.coefficients.resize(levels.size());
  parallel_for(levels.size(), [&](std::size_t i) {
    const auto& lv = levels[i];
    cplx acc = 0.0;
    for (const auto& t : terms_of(lv.qn, cfg.variant, cfg.side)) {
      const cplx ix = t.kind == TrigKind::cos ? ix_cos[t.j] : ix_sin[t.j];
      acc += t.weight * ix * iy_sin[t.l];
    }
    table.coefficients[i] = {lv.qn, lv.epsilon, packet_norm * acc};
  });

  std::vector<double> probs(table.coefficients.size());
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::norm(table.coefficients[i].amplitude);
  table.captured_norm = pairwise_sum(probs);

  if (!table.placement.well_inside) {
    std::ostringstream msg;
    msg << "packet center is " << table.placement.wall_distance << " from a wall, closer than 3*dx = "
        << table.placement.required;
    table.warnings.push_back(msg.str());
  }
  if (table.norm_deficit() > 1e-3) {
    std::ostringstream msg;
    msg << "norm deficit " << table.norm_deficit() << " exceeds 1e-3 (packet too close to a wall or truncation too tight)";
    table.warnings.push_back(msg.str());
  }
  return table;
}

double energy_expectation(const ExpansionTable& table, const BilliardConfig& cfg) {
  if (table.captured_norm < 0.999) throw ValidationError("energy expectation needs captured_norm >= 0.999");
  std::vector<double> terms(table.coefficients.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i] = std::norm(table.coefficients[i].amplitude) * static_cast<double>(table.coefficients[i].epsilon);
  }
  return cfg.energy_unit() * pairwise_sum(terms);
}

double packet_energy(const GaussianPacket& packet, const BilliardConfig& cfg) {
  packet.validate();
  cfg.validate();
  const double zero_point = cfg.hbar * cfg.hbar / (packet.width * packet.width);
  return (packet.p0x * packet.p0x + packet.p0y * packet.p0y + zero_point) / (2.0 * cfg.mass);
}

SpectralWeights spectral_weights(const ExpansionTable& table) {
  std::map<std::int64_t, std::vector<double>> grouped;
  for (const auto& c : table.coefficients) grouped[c.epsilon].push_back(std::norm(c.amplitude));
  SpectralWeights w;
  w.epsilon.reserve(grouped.size());
  w.weight.reserve(grouped.size());
  for (const auto& [eps, probs] : grouped) {
    w.epsilon.push_back(eps);
    w.weight.push_back(pairwise_sum(probs));
  }
  return w;
}

std::vector<double> AutocorrSeries::magnitude() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::abs(values[i]);
  return out;
}

AutocorrSeries autocorrelation(const ExpansionTable& table, const BilliardConfig& cfg,
                               std::span<const double> times) {
  cfg.validate();
  // Levels far off the momentum shell carry weights near exp(-50); dropping
  // those below 1e-32 of the total changes A by less than rounding.
  SpectralWeights w = spectral_weights(table);
  {
    const double cut = 1e-32 * std::accumulate(w.weight.begin(), w.weight.end(), 0.0);
    std::size_t kept = 0;
    for (std::size_t k = 0; k < w.weight.size(); ++k) {
      if (w.weight[k] < cut) continue;
      w.epsilon[kept] = w.epsilon[k];
      w.weight[kept++] = w.weight[k];
    }
    w.epsilon.resize(kept);
    w.weight.resize(kept);
  }
  const double t_rev = cfg.revival_time();
  AutocorrSeries series;
  series.times.assign(times.begin(), times.end());
  series.values.resize(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    const double s = times[i] / t_rev;
    std::vector<double> re(w.epsilon.size());
    std::vector<double> im(w.epsilon.size());
    for (std::size_t k = 0; k < w.epsilon.size(); ++k) {
      const double ph = revival_phase(w.epsilon[k], s);
      re[k] = w.weight[k] * cos_pi(2.0 * ph);
      im[k] = w.weight[k] * sin_pi(2.0 * ph);
    }
    series.values[i] = {pairwise_sum(re), pairwise_sum(im)};
  });
  return series;
}

std::vector<OrbitMarker> closed_orbit_markers(const BilliardConfig& cfg, double speed, double t_max) {
  std::vector<OrbitMarker> out;
  if (!(speed > 0.0)) return out;
  for (const auto& fam : enumerate_orbits(speed * t_max, cfg.variant, cfg.side)) {
    for (std::size_t r = 0; r < fam.multiples.size(); ++r) {
      std::string label = fam.primitive.label();
      if (fam.multiples[r] != 1) label = std::to_string(fam.multiples[r]) + "*" + label;
      out.push_back({label, fam.primitive.angle_deg, fam.lengths[r] / speed});
    }
  }
  return out;
}

AutocorrSeries autocorrelation(const ExpansionTable& table, const BilliardConfig& cfg,
                               std::span<const double> times, const GaussianPacket& packet) {
  AutocorrSeries series = autocorrelation(table, cfg, times);
  const double speed = packet.momentum() / cfg.mass;
  if (speed > 0.0) {
    series.tau = cfg.side / speed;
    const double t_max = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
    series.markers = closed_orbit_markers(cfg, speed, t_max);
  }
  return series;
}

double TimescaleSet::closed_orbit_period(int p, int q) const {
  if (!(speed > 0.0)) throw ValidationError("closed-orbit periods need a moving packet (v0 > 0)");
  return orbit_length_pq(p, q, side) / speed;
}

namespace {

std::optional<double> period(double t_rev, double denom) {
  if (std::abs(denom) < 1e-12) return std::nullopt;
  return t_rev / std::abs(denom);
}

}  // namespace

TimescaleSet timescales(const GaussianPacket& packet, const BilliardConfig& cfg) {
  packet.validate();
  cfg.validate();
  TimescaleSet ts;
  ts.side = cfg.side;
  ts.revival = cfg.revival_time();
  ts.speed = packet.momentum() / cfg.mass;
  ts.spreading = cfg.mass * packet.width * packet.width / cfg.hbar;
  if (ts.speed > 0.0) {
    // Launch direction -> unfolded displacement (i, j) ~ (cos, sqrt3 sin),
    // then (p, q) = ((i+j)/2, (i-j)/2) on the unit ray.
    const double th = std::atan2(packet.p0y, packet.p0x);
    const double i_bar = std::cos(th);
    const double j_bar = kSqrt3 * std::sin(th);
    const double p = 0.5 * (i_bar + j_bar);
    const double q = 0.5 * (i_bar - j_bar);
    const double s = std::sqrt(p * p + p * q + q * q);
    const double scale = 3.0 * cfg.mass * ts.speed * cfg.side / (4.0 * kPi * cfg.hbar);
    ts.central_m = scale * (2.0 * p + q) / (kSqrt3 * s);
    ts.central_n = scale * (2.0 * q + p) / (kSqrt3 * s);
    ts.period_m = period(ts.revival, 2.0 * ts.central_m - ts.central_n);
    ts.period_n = period(ts.revival, 2.0 * ts.central_n - ts.central_m);
  }
  return ts;
}

TimescaleSet timescales(int m, int n, const BilliardConfig& cfg) {
  cfg.validate();
  TimescaleSet ts;
  ts.side = cfg.side;
  ts.revival = cfg.revival_time();
  const double e = cfg.energy_unit() * static_cast<double>(epsilon(m, n));
  ts.speed = std::sqrt(2.0 * e / cfg.mass);
  ts.central_m = m;
  ts.central_n = n;
  ts.period_m = period(ts.revival, 2.0 * m - n);
  ts.period_n = period(ts.revival, 2.0 * n - m);
  return ts;
}

RevivalReport revival_scan(const ExpansionTable& table, const BilliardConfig& cfg,
                           std::span<const int> fractions, double threshold) {
  cfg.validate();
  for (int f : fractions) {
    if (f < 1) throw ValidationError("revival fractions must be positive integers");
  }
  const double t_rev = cfg.revival_time();
  const double delta = 1e-4 * t_rev;

  std::vector<double> times{0.0};
  for (int f : fractions) {
    for (int k = 1; k <= f; ++k) {
      const double t = t_rev * k / f;
      times.insert(times.end(), {t - delta, t, t + delta});
    }
  }
  const auto mags = autocorrelation(table, cfg, times).magnitude();

  RevivalReport report;
  report.reference = mags[0];
  report.threshold = threshold;
  std::size_t idx = 1;
  for (int f : fractions) {
    FractionReport fr;
    fr.fraction = f;
    fr.all_revived = true;
    for (int k = 1; k <= f; ++k) {
      RevivalSample s;
      s.multiple = k;
      s.time = t_rev * k / f;
      s.magnitude = mags[idx + 1];
      s.ratio = report.reference > 0.0 ? s.magnitude / report.reference : 0.0;
      s.local_max = s.magnitude >= std::max(mags[idx], mags[idx + 2]) - 1e-12;
      s.revived = s.ratio >= threshold;
      fr.all_revived = fr.all_revived && s.revived;
      fr.samples.push_back(s);
      idx += 3;
    }
    report.fractions.push_back(std::move(fr));
  }
  return report;
}

DensityGrid density_snapshot(const ExpansionTable& table, const BilliardConfig& cfg, double t,
                             const GridSpec& grid) {
  cfg.validate();
  if (grid.nx < 2 || grid.ny < 2) throw ValidationError("density grid needs at least 2 points per axis");
  const double h = cfg.height();
  const double x_lo = cfg.variant == Variant::half ? 0.0 : -cfg.side / 2.0;
  const double x_hi = cfg.side / 2.0;

  DensityGrid out;
  out.xs.resize(grid.nx);
  out.ys.resize(grid.ny);
  for (std::size_t i = 0; i < grid.nx; ++i) out.xs[i] = x_lo + (x_hi - x_lo) * i / (grid.nx - 1.0);
  for (std::size_t i = 0; i < grid.ny; ++i) out.ys[i] = h * i / (grid.ny - 1.0);

  const Extent ext = extent_of(table, cfg.side);
  const Eigen::Index nj = ext.j_max + 1;
  const Eigen::Index nl = ext.l_max + 1;
  Eigen::MatrixXcd mc = Eigen::MatrixXcd::Zero(nj, nl);
  Eigen::MatrixXcd ms = Eigen::MatrixXcd::Zero(nj, nl);
  const auto amps = evolved_amplitudes(table, cfg, t);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    for (const auto& term : terms_of(table.coefficients[i].qn, table.variant, cfg.side)) {
      auto& target = term.kind == TrigKind::cos ? mc : ms;
      target(term.j, term.l) += term.weight * amps[i];
    }
  }

  const auto nx = static_cast<Eigen::Index>(grid.nx);
  const auto ny = static_cast<Eigen::Index>(grid.ny);
  Eigen::MatrixXd cx(nx, nj), sx(nx, nj), sy(ny, nl);
  for (Eigen::Index i = 0; i < nx; ++i) {
    const double u = 2.0 * out.xs[i] / (3.0 * cfg.side);
    for (Eigen::Index j = 0; j < nj; ++j) {
      cx(i, j) = cos_pi(static_cast<double>(j) * u);
      sx(i, j) = sin_pi(static_cast<double>(j) * u);
    }
  }
  for (Eigen::Index i = 0; i < ny; ++i) {
    const double v = 2.0 * out.ys[i] / (kSqrt3 * cfg.side);
    for (Eigen::Index l = 0; l < nl; ++l) sy(i, l) = sin_pi(static_cast<double>(l) * v);
  }
  const Eigen::MatrixXcd along_x = cx.cast<cplx>() * mc + sx.cast<cplx>() * ms;
  const Eigen::MatrixXcd field = along_x * sy.transpose().cast<cplx>();

  out.density.assign(grid.nx * grid.ny, 0.0);
  out.inside.assign(grid.nx * grid.ny, 0);
  for (std::size_t iy = 0; iy < grid.ny; ++iy) {
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const Point2D p{out.xs[ix], out.ys[iy]};
      const bool in = std::abs(p.x) <= p.y / kSqrt3 * (1.0 + 1e-12) && (cfg.variant == Variant::full || p.x >= 0.0);
      out.inside[iy * grid.nx + ix] = in ? 1 : 0;
      if (in) out.density[iy * grid.nx + ix] = std::norm(field(static_cast<Eigen::Index>(ix), static_cast<Eigen::Index>(iy)));
    }
  }
  return out;
}

std::vector<std::complex<double>> wavefunction_at(const ExpansionTable& table, const BilliardConfig& cfg,
                                                  double t, std::span<const Point2D> points) {
  cfg.validate();
  const Extent ext = extent_of(table, cfg.side);
  const auto amps = evolved_amplitudes(table, cfg, t);
  std::vector<std::vector<Term>> terms(table.coefficients.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = terms_of(table.coefficients[i].qn, table.variant, cfg.side);

  std::vector<cplx> out(points.size());
  parallel_for(points.size(), [&](std::size_t k) {
    const double u = 2.0 * points[k].x / (3.0 * cfg.side);
    const double v = 2.0 * points[k].y / (kSqrt3 * cfg.side);
    std::vector<double> cxv(ext.j_max + 1), sxv(ext.j_max + 1), syv(ext.l_max + 1);
    for (int j = 0; j <= ext.j_max; ++j) {
      cxv[j] = cos_pi(j * u);
      sxv[j] = sin_pi(j * u);
    }
    for (int l = 0; l <= ext.l_max; ++l) syv[l] = sin_pi(l * v);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      double value = 0.0;
      for (const auto& term : terms[i]) {
        value += term.weight * (term.kind == TrigKind::cos ? cxv[term.j] : sxv[term.j]) * syv[term.l];
      }
      acc += amps[i] * value;
    }
    out[k] = acc;
  });
  return out;
}

std::vector<double> density_at(const ExpansionTable& table, const BilliardConfig& cfg, double t,
                               std::span<const Point2D> points) {
  const auto psi = wavefunction_at(table, cfg, t, points);
  std::vector<double> out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = std::norm(psi[i]);
  return out;
}

}  // namespace eqtri
