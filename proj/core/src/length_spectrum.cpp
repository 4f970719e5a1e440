#include "eqtri/length_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eqtri/parallel.hpp"
#include "eqtri/spectrum.hpp"

namespace eqtri {

std::vector<double> LengthSpectrum::normalized_power() const {
  std::vector<double> out(rho.size());
  const double n2 = static_cast<double>(level_count) * static_cast<double>(level_count);
  for (std::size_t i = 0; i < rho.size(); ++i) out[i] = std::norm(rho[i]) / n2;
  return out;
}

std::vector<double> uniform_grid(double lmax, double step) {
  if (!(step > 0.0) || !(lmax >= 0.0)) throw ValidationError("grid needs lmax >= 0 and step > 0");
  const auto count = static_cast<std::size_t>(std::floor(lmax / step + 0.5)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = static_cast<double>(i) * step;
  return grid;
}

LengthSpectrum compute_rho(const BilliardConfig& cfg, std::size_t level_count,
                           std::span<const double> lengths, const RhoOptions& options) {
  if (level_count == 0) throw ValidationError("length spectrum needs at least one level");
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    if (!(lengths[i] > lengths[i - 1])) throw ValidationError("length grid must be strictly increasing");
  }
  const auto levels = enumerate_levels(cfg, level_count);
  std::vector<double> k(levels.size());
  std::vector<double> weight(levels.size(), 1.0);
  for (std::size_t n = 0; n < levels.size(); ++n) {
    k[n] = levels[n].wavenumber;
    if (options.damping_sigma) weight[n] = std::exp(-k[n] * k[n] * *options.damping_sigma * *options.damping_sigma);
  }

  LengthSpectrum out;
  out.lengths.assign(lengths.begin(), lengths.end());
  out.rho.resize(lengths.size());
  out.level_count = level_count;
  out.variant = cfg.variant;
  parallel_for(lengths.size(), [&](std::size_t i) {
    const double L = lengths[i];
    double re = 0.0;
    double im = 0.0;
    for (std::size_t n = 0; n < k.size(); ++n) {
      re += weight[n] * std::cos(k[n] * L);
      im += weight[n] * std::sin(k[n] * L);
    }
    out.rho[i] = {re, im};
  });
  return out;
}

std::vector<Peak> detect_peaks(const LengthSpectrum& spectrum, double side, const PeakOptions& options) {
  const std::size_t n = spectrum.rho.size();
  std::vector<Peak> peaks;
  if (n < 3) return peaks;
  std::vector<double> power(n);
  for (std::size_t i = 0; i < n; ++i) power[i] = spectrum.power(i);
  std::vector<double> sorted = power;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2), sorted.end());
  const double median = sorted[n / 2];
  const double threshold = options.min_prominence * median;
  const double cut = options.exclusion * side;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (spectrum.lengths[i] < cut) continue;
    if (power[i] >= power[i - 1] && power[i] > power[i + 1] && power[i] > threshold) {
      peaks.push_back({spectrum.lengths[i], power[i]});
    }
  }
  return peaks;
}

std::vector<PredictedLength> predicted_lengths(const std::vector<OrbitFamily>& catalog, bool include_isolated) {
  std::vector<PredictedLength> out;
  for (const auto& fam : catalog) {
    if (fam.primitive.isolated && !include_isolated) continue;
    for (std::size_t r = 0; r < fam.multiples.size(); ++r) {
      const int k = fam.multiples[r];
      std::string label = fam.primitive.label();
      if (k != 1) label = std::to_string(k) + "*" + label;
      out.push_back({label, fam.lengths[r]});
    }
  }
  return out;
}

std::vector<PeakMatch> match_peaks(const std::vector<Peak>& peaks,
                                   const std::vector<PredictedLength>& predicted, double tolerance) {
  std::vector<PeakMatch> out;
  out.reserve(predicted.size());
  for (const auto& target : predicted) {
    PeakMatch m;
    m.orbit = target.orbit;
    m.predicted = target.length;
    m.residual = std::numeric_limits<double>::infinity();
    for (const auto& p : peaks) {
      const double r = std::abs(p.length - target.length);
      if (r < m.residual) {
        m.residual = r;
        m.detected = p.length;
      }
    }
    m.matched = m.residual <= tolerance;
    out.push_back(std::move(m));
  }
  return out;
}

VariantComparison compare_variants(const BilliardConfig& cfg, std::size_t level_count,
                                   std::span<const double> lengths, double tolerance,
                                   const PeakOptions& options) {
  if (lengths.empty()) throw ValidationError("length grid is empty");
  const double lmax = lengths.back();
  VariantComparison cmp;
  cmp.full = compute_rho(cfg.with_variant(Variant::full), level_count, lengths);
  cmp.half = compute_rho(cfg.with_variant(Variant::half), level_count, lengths);

  // Both wells share the full-well catalog, including the (2,0)' orbit.
  const auto shared = predicted_lengths(enumerate_orbits(lmax, Variant::full, cfg.side));
  std::vector<PredictedLength> half_only;
  for (const auto& fam : enumerate_orbits(lmax, Variant::half, cfg.side)) {
    if (fam.primitive.isolated && fam.primitive.i_bar == 1) {
      for (const auto& t : predicted_lengths({fam})) half_only.push_back(t);
    }
  }

  const auto full_peaks = detect_peaks(cmp.full, cfg.side, options);
  const auto half_peaks = detect_peaks(cmp.half, cfg.side, options);
  cmp.full_matches = match_peaks(full_peaks, shared, tolerance);
  cmp.half_matches = match_peaks(half_peaks, shared, tolerance);
  cmp.half_only_matches = match_peaks(half_peaks, half_only, tolerance);

  for (const auto& hp : half_peaks) {
    const bool near_full = std::any_of(full_peaks.begin(), full_peaks.end(),
                                       [&](const Peak& fp) { return std::abs(fp.length - hp.length) <= tolerance; });
    if (!near_full) cmp.half_only_detected.push_back(hp);
  }

  auto all_matched = [](const std::vector<PeakMatch>& v) {
    return std::all_of(v.begin(), v.end(), [](const PeakMatch& m) { return m.matched; });
  };
  cmp.shared_features_agree = all_matched(cmp.full_matches) && all_matched(cmp.half_matches);
  cmp.half_only_features_present = !half_only.empty() && all_matched(cmp.half_only_matches);
  return cmp;
}

}  // namespace eqtri
