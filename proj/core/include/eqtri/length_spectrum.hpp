#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqtri/config.hpp"
#include "eqtri/orbits.hpp"

namespace eqtri {

/// rho_N(L) = sum over the N lowest levels (with multiplicity) of exp(i k_n L).
struct LengthSpectrum {
  std::vector<double> lengths;
  std::vector<std::complex<double>> rho;
  std::size_t level_count = 0;
  Variant variant = Variant::full;

  double power(std::size_t i) const { return std::norm(rho[i]); }
  /// |rho|^2 / N^2, the scale used for plots.
  std::vector<double> normalized_power() const;
};

struct RhoOptions {
  /// Optional damping exp(-k^2 sigma^2) per term; off by default.
  std::optional<double> damping_sigma;
};

/// Uniform grid 0, step, 2 step, ... up to and including lmax (within step/2).
std::vector<double> uniform_grid(double lmax, double step);

/// Throws ValidationError if level_count == 0 or the grid is not strictly increasing.
LengthSpectrum compute_rho(const BilliardConfig& cfg, std::size_t level_count,
                           std::span<const double> lengths, const RhoOptions& options = {});

struct Peak {
  double length = 0.0;
  double power = 0.0;
};

struct PeakOptions {
  /// A local maximum counts when its power exceeds this multiple of the
  /// median power over the grid.
  double min_prominence = 5.0;
  /// Peaks below this length (in units of the side) are the L = 0 feature.
  double exclusion = 0.5;
};

/// Local maxima of |rho|^2 outside the exclusion window and above threshold,
/// in order of length. An empty result is a valid outcome.
std::vector<Peak> detect_peaks(const LengthSpectrum& spectrum, double side,
                               const PeakOptions& options = {});

struct PeakMatch {
  std::string orbit;  ///< family label, with the repetition as "k*(i,j)"
  double predicted = 0.0;
  std::optional<double> detected;
  double residual = 0.0;  ///< |detected - predicted|, or +inf when unmatched
  bool matched = false;
};

struct PredictedLength {
  std::string orbit;
  double length = 0.0;
};

/// Every recurrence length in a catalog (families and isolated orbits).
std::vector<PredictedLength> predicted_lengths(const std::vector<OrbitFamily>& catalog,
                                               bool include_isolated = true);

/// Nearest detected peak for every predicted length.
std::vector<PeakMatch> match_peaks(const std::vector<Peak>& peaks,
                                   const std::vector<PredictedLength>& predicted, double tolerance);

struct VariantComparison {
  LengthSpectrum full;
  LengthSpectrum half;
  std::vector<PeakMatch> full_matches;       ///< non-isolated catalog plus (2,0)'
  std::vector<PeakMatch> half_matches;       ///< same targets, half-well run
  std::vector<PeakMatch> half_only_matches;  ///< odd multiples of sqrt(3)a/2
  /// Peaks detected in the half well that are farther than the tolerance
  /// from every full-well peak.
  std::vector<Peak> half_only_detected;
  bool shared_features_agree = false;
  bool half_only_features_present = false;
};

VariantComparison compare_variants(const BilliardConfig& cfg, std::size_t level_count,
                                   std::span<const double> lengths, double tolerance,
                                   const PeakOptions& options = {});

}  // namespace eqtri
