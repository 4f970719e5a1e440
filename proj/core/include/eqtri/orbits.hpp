#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eqtri/config.hpp"

namespace eqtri {

/// A closed-orbit family labelled by the unfolded lattice displacement
/// (i_bar, j_bar), both even or both odd, or equivalently p = (i+j)/2,
/// q = (i-j)/2. Isolated orbits carry a primed label.
struct OrbitClass {
  int i_bar = 0;
  int j_bar = 0;
  int p = 0;
  int q = 0;
  double length = 0.0;  ///< primitive length, in the units of `side`
  double angle_deg = 0.0;
  bool isolated = false;
  Variant variant = Variant::full;

  std::string label() const;
};

/// (a/2) sqrt(9 i^2 + 3 j^2). Throws ValidationError on mixed parity or (0,0).
double orbit_length(int i_bar, int j_bar, double side = 1.0);

/// a sqrt(3) sqrt(p^2 + pq + q^2).
double orbit_length_pq(int p, int q, double side = 1.0);

/// atan(j / (i sqrt 3)) in degrees.
double orbit_angle(int i_bar, int j_bar);

/// Rounds to one decimal, the precision of printed angle tables.
double round_angle(double degrees);

std::pair<int, int> to_pq(int i_bar, int j_bar);
std::pair<int, int> from_pq(int p, int q);

/// Smallest parity-valid representative of the ray through (i_bar, j_bar):
/// divide by the gcd, and double back if that breaks the both-even/both-odd rule.
std::pair<int, int> primitive(int i_bar, int j_bar);

struct OrbitFamily {
  OrbitClass primitive;
  std::vector<int> multiples;     ///< repetition counts with length <= lmax
  std::vector<double> lengths;    ///< multiple * primitive length
};

/// Every primitive family with angle in [0, 30] degrees and its recurrences
/// up to lmax (physical length), plus the isolated orbits: (2,0)' at odd
/// multiples of 3a/2 in both wells, and (1,1)' at odd multiples of
/// sqrt(3)a/2 in the half well. Ordered by (primitive length, angle).
std::vector<OrbitFamily> enumerate_orbits(double lmax, Variant variant, double side = 1.0);

}  // namespace eqtri
