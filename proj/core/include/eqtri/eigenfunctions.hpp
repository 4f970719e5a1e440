#pragma once

#include <string>
#include <vector>

#include "eqtri/config.hpp"
#include "eqtri/quadrature.hpp"
#include "eqtri/spectrum.hpp"

namespace eqtri {

/// A normalized eigenstate of the full or half billiard. Half-well states are
/// the minus states scaled by sqrt(2).
struct EigenfunctionId {
  QuantumNumbers qn;
  Variant variant = Variant::full;
};

void validate(const EigenfunctionId& id);

/// Closed-triangle membership with a relative tolerance on the walls.
bool inside(Point2D p, Variant variant, double side, double tol = 1e-12);

struct PsiEvaluation {
  double value = 0.0;
  bool inside = true;  ///< false: value is the analytic continuation
};

/// psi outside the domain is the trig expression continued, flagged.
PsiEvaluation evaluate(const EigenfunctionId& id, Point2D p, double side);
double psi(const EigenfunctionId& id, Point2D p, double side);

/// x parity of the two-sine/cosine families.
enum class Parity { odd, even };

/// The minus (odd) or plus (even) expression with full-well normalization,
/// evaluated for an arbitrary integer pair. Out-of-wedge pairs such as (n, m)
/// are how the index relations between states are stated.
double psi_formal(int m, int n, Parity parity, Point2D p, double side);

/// Triple-sine product form of the (2n, n) special state.
double psi_special_product(int n, Point2D p, double side);

struct QuadratureSpec {
  int order = 64;
};

/// Integral of psi1 * psi2 over the variant's domain. Both ids must share a variant.
double inner_product(const EigenfunctionId& a, const EigenfunctionId& b,
                     const QuadratureSpec& quad, double side);

/// Matrix of pairwise inner products; every id must share a variant.
std::vector<std::vector<double>> gram_matrix(const std::vector<EigenfunctionId>& ids,
                                             const QuadratureSpec& quad, double side);

struct NormCheck {
  double norm = 0.0;          ///< self inner product at the requested order
  double norm_doubled = 0.0;  ///< same at twice the order
  double deviation = 0.0;     ///< max(|norm - 1|, |norm - norm_doubled|)
  bool ok = false;
};

/// Flags an insufficient quadrature order when deviation exceeds tol.
NormCheck check_normalization(const EigenfunctionId& id, const QuadratureSpec& quad,
                              double side, double tol = 1e-8);

struct RelationCheck {
  std::string name;
  double max_deviation = 0.0;
  bool passed = false;
};

struct SymmetryReport {
  QuantumNumbers qn;
  std::vector<RelationCheck> relations;
  bool all_passed() const;
};

/// Checks on a sample grid of interior points, tolerance 1e-10:
/// x parity; (m, m-n) and (n, m) index relations; the scale relation
/// psi_(fm,fn)(x,y;a) = psi_(m,n)(x,y;a/f) / f for f = 2, 3; the three-fold
/// relation psi-_(2m-n,m-2n)(x,y;a) = -psi-_(m,n)(y - sqrt(3)a/2, a/2 - x; a/sqrt(3)) / sqrt(3);
/// and for m = 2n the plus/special/product identities.
SymmetryReport check_symmetry_relations(const QuantumNumbers& qn, double side, int grid = 24);

}  // namespace eqtri
