#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqtri/config.hpp"
#include "eqtri/quadrature.hpp"
#include "eqtri/spectrum.hpp"

namespace eqtri {

/// Product of two 1D Gaussians
///   (b sqrt(pi))^(-1/2) exp(i p0 (x - x0)/hbar) exp(-(x - x0)^2 / 2b^2)
/// sharing the width b, so Delta x = Delta y = b / sqrt(2).
struct GaussianPacket {
  double x0 = 0.0;
  double y0 = 0.0;
  double p0x = 0.0;
  double p0y = 0.0;
  double width = 0.1;

  /// Momentum (p0 cos theta, p0 sin theta).
  static GaussianPacket from_polar(double x0, double y0, double p0, double theta_deg, double width);

  void validate() const;
  double momentum() const;
  double angle_deg() const;
  double position_spread() const;
  double momentum_spread(double hbar) const;
};

struct Placement {
  double wall_distance = 0.0;  ///< distance from the center to the nearest wall
  double required = 0.0;       ///< 3 Delta x
  bool well_inside = false;
};

Placement check_placement(const GaussianPacket& packet, const BilliardConfig& cfg);

enum class TrigKind { cos, sin };

/// Integral over the real line of exp(i p0 (x-x0)/hbar) exp(-(x-x0)^2/2b^2) f(kappa x)
/// with f = cos or sin, in closed form.
std::complex<double> gaussian_trig_integral(TrigKind kind, double wavenumber, double x0, double p0,
                                            double width, double hbar = 1.0);

/// Levels with k <= k_max are kept.
struct Truncation {
  double k_max = 0.0;

  /// |p0|/hbar + 10/b: the neglected Gaussian tail is below exp(-50).
  static Truncation for_packet(const GaussianPacket& packet, const BilliardConfig& cfg);
  std::int64_t epsilon_max(const BilliardConfig& cfg) const;
};

struct ExpansionCoefficient {
  QuantumNumbers qn;
  std::int64_t epsilon = 0;
  std::complex<double> amplitude;
};

struct ExpansionTable {
  Variant variant = Variant::full;
  std::vector<ExpansionCoefficient> coefficients;  ///< in level order
  std::int64_t epsilon_max = 0;
  double captured_norm = 0.0;  ///< sum of |a|^2
  Placement placement;
  std::vector<std::string> warnings;

  double norm_deficit() const { return 1.0 - captured_norm; }
  std::optional<std::complex<double>> find(const QuantumNumbers& qn) const;
};

/// Expansion coefficients from all-space Gaussian integrals of each trig
/// term. Half-well coefficients are those of sqrt(2) psi-. A packet closer
/// than 3 Delta x to a wall, or a norm deficit above 1e-3, adds a warning.
ExpansionTable expand(const GaussianPacket& packet, const BilliardConfig& cfg,
                      std::optional<Truncation> truncation = std::nullopt);

/// sum |a|^2 E. Throws ValidationError when captured_norm < 0.999.
double energy_expectation(const ExpansionTable& table, const BilliardConfig& cfg);

/// (p0x^2 + p0y^2 + hbar^2 / b^2) / (2 mass).
double packet_energy(const GaussianPacket& packet, const BilliardConfig& cfg);

/// |a|^2 summed per distinct epsilon, ascending.
struct SpectralWeights {
  std::vector<std::int64_t> epsilon;
  std::vector<double> weight;
};

SpectralWeights spectral_weights(const ExpansionTable& table);

struct OrbitMarker {
  std::string orbit;
  double angle_deg = 0.0;
  double period = 0.0;  ///< L / v0
};

struct AutocorrSeries {
  std::vector<double> times;
  std::vector<std::complex<double>> values;
  std::optional<double> tau;  ///< side / v0 when the packet moves
  std::vector<OrbitMarker> markers;

  std::vector<double> magnitude() const;
};

/// A(t) = sum |a|^2 exp(+i E t / hbar). The phase is taken as
/// 2 pi frac(epsilon * frac(t / T_rev)), so A is exactly T_rev-periodic.
/// Each time point is an independent pairwise sum.
AutocorrSeries autocorrelation(const ExpansionTable& table, const BilliardConfig& cfg,
                               std::span<const double> times);

/// Same, with tau and closed-orbit markers (angle, L/v0) for L/v0 <= max time.
AutocorrSeries autocorrelation(const ExpansionTable& table, const BilliardConfig& cfg,
                               std::span<const double> times, const GaussianPacket& packet);

std::vector<OrbitMarker> closed_orbit_markers(const BilliardConfig& cfg, double speed, double t_max);

struct TimescaleSet {
  double side = 1.0;
  double speed = 0.0;                    ///< v0
  double revival = 0.0;                  ///< T_rev
  std::optional<double> spreading;       ///< t0 = mass b^2 / hbar (packets only)
  double central_m = 0.0;
  double central_n = 0.0;
  std::optional<double> period_m;        ///< T_rev / |2m - n|
  std::optional<double> period_n;        ///< T_rev / |2n - m|; absent when 2n = m

  /// L(p,q) / v0. Throws ValidationError when v0 == 0.
  double closed_orbit_period(int p, int q) const;
};

/// From a packet: v0 = |p0| / mass and a real-valued central (m, n) on the
/// ray of the launch angle, chosen so that p T_m = q T_n = L(p,q)/v0.
TimescaleSet timescales(const GaussianPacket& packet, const BilliardConfig& cfg);

/// From a level: v0 = sqrt(2E / mass).
TimescaleSet timescales(int m, int n, const BilliardConfig& cfg);

struct RevivalSample {
  int multiple = 0;
  double time = 0.0;
  double magnitude = 0.0;
  double ratio = 0.0;  ///< |A(t)| / |A(0)|
  bool local_max = false;
  bool revived = false;
};

struct FractionReport {
  int fraction = 1;  ///< samples at k T_rev / fraction, k = 1..fraction
  std::vector<RevivalSample> samples;
  bool all_revived = false;
};

struct RevivalReport {
  double reference = 0.0;  ///< |A(0)|
  double threshold = 0.95;
  std::vector<FractionReport> fractions;
};

RevivalReport revival_scan(const ExpansionTable& table, const BilliardConfig& cfg,
                           std::span<const int> fractions, double threshold = 0.95);

struct GridSpec {
  std::size_t nx = 200;
  std::size_t ny = 200;
};

/// Density on a tensor grid over the bounding box of the domain; points
/// outside the billiard hold 0 and are flagged in `inside`.
struct DensityGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> density;  ///< row-major, index iy * nx + ix
  std::vector<char> inside;

  double at(std::size_t ix, std::size_t iy) const { return density[iy * xs.size() + ix]; }
};

/// |sum a psi exp(-i E t / hbar)|^2. Each eigenfunction is a sum of
/// products f(x) g(y), so the grid is two complex matrix products.
DensityGrid density_snapshot(const ExpansionTable& table, const BilliardConfig& cfg, double t,
                             const GridSpec& grid);

/// Evolved wavefunction at arbitrary points by direct summation.
std::vector<std::complex<double>> wavefunction_at(const ExpansionTable& table, const BilliardConfig& cfg,
                                                  double t, std::span<const Point2D> points);

std::vector<double> density_at(const ExpansionTable& table, const BilliardConfig& cfg, double t,
                               std::span<const Point2D> points);

}  // namespace eqtri
