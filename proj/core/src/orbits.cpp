#include "eqtri/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>

namespace eqtri {

namespace {

bool same_parity(int i, int j) { return ((i - j) % 2) == 0; }

void check_label(int i_bar, int j_bar) {
  if (!same_parity(i_bar, j_bar)) throw ValidationError("i_bar and j_bar must be both even or both odd");
  if (i_bar == 0 && j_bar == 0) throw ValidationError("(0,0) is not an orbit");
}

OrbitClass make_class(int i_bar, int j_bar, double side, Variant variant) {
  OrbitClass c;
  c.i_bar = i_bar;
  c.j_bar = j_bar;
  std::tie(c.p, c.q) = to_pq(i_bar, j_bar);
  c.length = orbit_length(i_bar, j_bar, side);
  c.angle_deg = orbit_angle(i_bar, j_bar);
  c.variant = variant;
  return c;
}

OrbitFamily isolated_family(OrbitClass c, double primitive_length, double lmax) {
  c.length = primitive_length;
  c.isolated = true;
  OrbitFamily fam;
  fam.primitive = c;
  // Even repetitions coincide with the parent family and are not new features.
  for (int k = 1; k * primitive_length <= lmax; k += 2) {
    fam.multiples.push_back(k);
    fam.lengths.push_back(k * primitive_length);
  }
  return fam;
}

}  // namespace

std::string OrbitClass::label() const {
  std::string s = "(" + std::to_string(i_bar) + "," + std::to_string(j_bar) + ")";
  if (isolated) s += "'";
  return s;
}

double orbit_length(int i_bar, int j_bar, double side) {
  check_label(i_bar, j_bar);
  const double i = i_bar;
  const double j = j_bar;
  return 0.5 * side * std::sqrt(9.0 * i * i + 3.0 * j * j);
}

double orbit_length_pq(int p, int q, double side) {
  const double pp = p;
  const double qq = q;
  return side * std::numbers::sqrt3 * std::sqrt(pp * pp + pp * qq + qq * qq);
}

double orbit_angle(int i_bar, int j_bar) {
  check_label(i_bar, j_bar);
  if (j_bar == i_bar) return 30.0;  // atan(1/sqrt3) rounds just above 30
  return std::atan2(static_cast<double>(j_bar), std::numbers::sqrt3 * i_bar) * 180.0 / std::numbers::pi;
}

double round_angle(double degrees) { return std::round(degrees * 10.0) / 10.0; }

std::pair<int, int> to_pq(int i_bar, int j_bar) {
  if (!same_parity(i_bar, j_bar)) throw ValidationError("i_bar and j_bar must be both even or both odd");
  return {(i_bar + j_bar) / 2, (i_bar - j_bar) / 2};
}

std::pair<int, int> from_pq(int p, int q) { return {p + q, p - q}; }

std::pair<int, int> primitive(int i_bar, int j_bar) {
  check_label(i_bar, j_bar);
  const int g = std::gcd(i_bar, j_bar);
  int i = i_bar / g;
  int j = j_bar / g;
  if (!same_parity(i, j)) {
    i *= 2;
    j *= 2;
  }
  return {i, j};
}

std::vector<OrbitFamily> enumerate_orbits(double lmax, Variant variant, double side) {
  if (!(lmax > 0.0)) throw ValidationError("lmax must be positive");
  if (!(side > 0.0)) throw ValidationError("side length must be positive");

  std::vector<OrbitFamily> out;
  // d >= (3/2) a i_bar, so i_bar is bounded by 2 lmax / 3a.
  const int i_max = static_cast<int>(std::floor(2.0 * lmax / (3.0 * side))) + 1;
  for (int i = 1; i <= i_max; ++i) {
    for (int j = i % 2; j <= i; j += 2) {
      if (primitive(i, j) != std::pair{i, j}) continue;
      OrbitClass c = make_class(i, j, side, variant);
      if (c.length > lmax) continue;
      OrbitFamily fam;
      fam.primitive = c;
      for (int k = 1; k * c.length <= lmax; ++k) {
        fam.multiples.push_back(k);
        fam.lengths.push_back(k * c.length);
      }
      out.push_back(std::move(fam));
    }
  }

  const double iso20 = 1.5 * side;
  if (iso20 <= lmax) out.push_back(isolated_family(make_class(2, 0, side, variant), iso20, lmax));
  if (variant == Variant::half) {
    const double iso11 = std::numbers::sqrt3 * side / 2.0;
    if (iso11 <= lmax) out.push_back(isolated_family(make_class(1, 1, side, variant), iso11, lmax));
  }

  std::sort(out.begin(), out.end(), [](const OrbitFamily& a, const OrbitFamily& b) {
    return std::tie(a.primitive.length, a.primitive.angle_deg, a.primitive.isolated) <
           std::tie(b.primitive.length, b.primitive.angle_deg, b.primitive.isolated);
  });
  return out;
}

}  // namespace eqtri
