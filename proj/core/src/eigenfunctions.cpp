#include "eqtri/eigenfunctions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

namespace eqtri {

namespace {

using boost::math::cos_pi;
using boost::math::sin_pi;

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrt3 = std::numbers::sqrt3;

double pair_norm(double side) { return std::sqrt(16.0 / (3.0 * kSqrt3)) / side; }
double special_norm(double side) { return std::sqrt(8.0 / (3.0 * kSqrt3)) / side; }

// Arguments are reduced as (integer) * (coordinate / period) and handed to
// sin_pi / cos_pi, so the phase never passes through a rounded multiple of pi.
struct Scaled {
  double u;  // 2x / (3a): x-term argument is pi * j * u
  double v;  // 2y / (sqrt(3) a): y-term argument is pi * l * v
};

Scaled scale(Point2D p, double side) { return {2.0 * p.x / (3.0 * side), 2.0 * p.y / (kSqrt3 * side)}; }

double sx(long j, const Scaled& s) { return sin_pi(static_cast<double>(j) * s.u); }
double cx(long j, const Scaled& s) { return cos_pi(static_cast<double>(j) * s.u); }
double sy(long l, const Scaled& s) { return sin_pi(static_cast<double>(l) * s.v); }

double bracket(long m, long n, Parity parity, const Scaled& s) {
  if (parity == Parity::odd) {
    return sx(2 * m - n, s) * sy(n, s) - sx(2 * n - m, s) * sy(m, s) - sx(m + n, s) * sy(m - n, s);
  }
  return cx(2 * m - n, s) * sy(n, s) - cx(2 * n - m, s) * sy(m, s) + cx(m + n, s) * sy(m - n, s);
}

double special_value(long n, Point2D p, double side) {
  const Scaled s = scale(p, side);
  // cos(2 pi n x / a) = cos(pi * 3n * u)
  return special_norm(side) * (2.0 * cx(3 * n, s) * sy(n, s) - sy(2 * n, s));
}

}  // namespace

void validate(const EigenfunctionId& id) { validate(id.qn, id.variant); }

bool inside(Point2D p, Variant variant, double side, double tol) {
  const double slack = tol * side;
  if (p.y < -slack || p.y > kSqrt3 * side / 2.0 + slack) return false;
  if (std::abs(p.x) > p.y / kSqrt3 + slack) return false;
  if (variant == Variant::half && p.x < -slack) return false;
  return true;
}

double psi_formal(int m, int n, Parity parity, Point2D p, double side) {
  return pair_norm(side) * bracket(m, n, parity, scale(p, side));
}

double psi_special_product(int n, Point2D p, double side) {
  const double pref = 8.0 * kSqrt2 / (std::pow(3.0, 0.75) * side);
  const double c = kSqrt3 * side;
  return pref * sin_pi(2.0 * n * p.y / c) * sin_pi(n * (p.y - kSqrt3 * p.x) / c) *
         sin_pi(n * (p.y + kSqrt3 * p.x) / c);
}

PsiEvaluation evaluate(const EigenfunctionId& id, Point2D p, double side) {
  validate(id);
  if (!(side > 0.0)) throw ValidationError("side length must be positive");
  PsiEvaluation out;
  out.inside = inside(p, id.variant, side);
  switch (id.qn.sym) {
    case Symmetry::special: out.value = special_value(id.qn.n, p, side); break;
    case Symmetry::minus: out.value = psi_formal(id.qn.m, id.qn.n, Parity::odd, p, side); break;
    case Symmetry::plus: out.value = psi_formal(id.qn.m, id.qn.n, Parity::even, p, side); break;
  }
  if (id.variant == Variant::half) out.value *= kSqrt2;
  return out;
}

double psi(const EigenfunctionId& id, Point2D p, double side) { return evaluate(id, p, side).value; }

std::vector<std::vector<double>> gram_matrix(const std::vector<EigenfunctionId>& ids,
                                             const QuadratureSpec& quad, double side) {
  if (ids.empty()) return {};
  const Variant variant = ids.front().variant;
  for (const auto& id : ids) {
    validate(id);
    if (id.variant != variant) throw ValidationError("inner products need a common variant");
  }
  BilliardConfig cfg;
  cfg.side = side;
  cfg.variant = variant;
  const auto rule = triangle_rule(cfg, quad.order);

  std::vector<std::vector<double>> samples(ids.size(), std::vector<double>(rule.size()));
  for (std::size_t k = 0; k < ids.size(); ++k) {
    for (std::size_t q = 0; q < rule.size(); ++q) samples[k][q] = psi(ids[k], rule[q].point, side);
  }
  std::vector<std::vector<double>> gram(ids.size(), std::vector<double>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i; j < ids.size(); ++j) {
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) acc += rule[q].weight * samples[i][q] * samples[j][q];
      gram[i][j] = gram[j][i] = acc;
    }
  }
  return gram;
}

double inner_product(const EigenfunctionId& a, const EigenfunctionId& b,
                     const QuadratureSpec& quad, double side) {
  return gram_matrix({a, b}, quad, side)[0][1];
}

NormCheck check_normalization(const EigenfunctionId& id, const QuadratureSpec& quad,
                              double side, double tol) {
  NormCheck check;
  check.norm = gram_matrix({id}, quad, side)[0][0];
  check.norm_doubled = gram_matrix({id}, QuadratureSpec{2 * quad.order}, side)[0][0];
  check.deviation = std::max(std::abs(check.norm - 1.0), std::abs(check.norm - check.norm_doubled));
  check.ok = check.deviation <= tol;
  return check;
}

bool SymmetryReport::all_passed() const {
  return std::all_of(relations.begin(), relations.end(), [](const RelationCheck& r) { return r.passed; });
}

SymmetryReport check_symmetry_relations(const QuantumNumbers& qn, double side, int grid) {
  validate(qn, Variant::full);
  if (grid < 2) throw ValidationError("symmetry grid needs at least 2 points per axis");
  constexpr double kTol = 1e-10;

  std::vector<Point2D> pts;
  const double h = kSqrt3 * side / 2.0;
  for (int j = 1; j <= grid; ++j) {
    const double y = h * j / (grid + 1.0);
    for (int i = 0; i <= grid; ++i) {
      const double x = (2.0 * i / grid - 1.0) * y / kSqrt3;
      pts.push_back({x, y});
    }
  }

  SymmetryReport report;
  report.qn = qn;
  auto add = [&](std::string name, auto&& deviation_at) {
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, std::abs(deviation_at(p)));
    report.relations.push_back({std::move(name), worst, worst <= kTol});
  };

  const int m = qn.m;
  const int n = qn.n;
  const EigenfunctionId id{qn, Variant::full};

  add("parity psi(-x,y) = s psi(x,y)", [&](Point2D p) {
    const double s = qn.sym == Symmetry::minus ? -1.0 : 1.0;
    return psi(id, {-p.x, p.y}, side) - s * psi(id, p, side);
  });

  for (Parity parity : {Parity::odd, Parity::even}) {
    const double s = parity == Parity::odd ? -1.0 : 1.0;
    const std::string tag = parity == Parity::odd ? "minus" : "plus";
    add(tag + ": psi_(m,m-n) = s psi_(m,n)", [&](Point2D p) {
      return psi_formal(m, m - n, parity, p, side) - s * psi_formal(m, n, parity, p, side);
    });
    add(tag + ": psi_(n,m) = -psi_(m,n)", [&](Point2D p) {
      return psi_formal(n, m, parity, p, side) + psi_formal(m, n, parity, p, side);
    });
    for (int f : {2, 3}) {
      add(tag + ": psi_(fm,fn)(a) = psi_(m,n)(a/f) / f, f=" + std::to_string(f), [&](Point2D p) {
        return psi_formal(f * m, f * n, parity, p, side) - psi_formal(m, n, parity, p, side / f) / f;
      });
    }
  }

  add("minus: psi_(2m-n,m-2n)(x,y;a) = -psi_(m,n)(y-h, a/2-x; a/sqrt3)/sqrt3", [&](Point2D p) {
    const Point2D image{p.y - h, side / 2.0 - p.x};
    return psi_formal(2 * m - n, m - 2 * n, Parity::odd, p, side) +
           psi_formal(m, n, Parity::odd, image, side / kSqrt3) / kSqrt3;
  });

  if (m == 2 * n) {
    add("psi+_(2n,n) = sqrt2 psi_o", [&](Point2D p) {
      return psi_formal(m, n, Parity::even, p, side) - kSqrt2 * psi(id, p, side);
    });
    add("psi-_(2n,n) = 0", [&](Point2D p) { return psi_formal(m, n, Parity::odd, p, side); });
    add("psi_o = triple-sine product", [&](Point2D p) {
      return psi(id, p, side) - psi_special_product(n, p, side);
    });
  }
  return report;
}

}  // namespace eqtri
