#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eqtri {

/// Integer pair (m, n), not necessarily inside the wedge m >= 2n >= 2.
struct IndexPair {
  std::int64_t m = 0;
  std::int64_t n = 0;

  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

std::int64_t epsilon(const IndexPair& qn);
bool in_wedge(const IndexPair& qn);

/// T_(p,q)[m,n] = (pm - qn, (p-q)m - pn). Requires p >= 2q >= 0 and p >= 1:
/// (2,1) is the three-fold folding map, (f,0) the f^2 copying map up to the
/// (m,n) <-> (m,m-n) relation, and p > 2q the general family.
struct QNTransform {
  std::int64_t p = 2;
  std::int64_t q = 1;

  void validate() const;
  IndexPair raw(const IndexPair& qn) const;
  std::int64_t factor() const;  ///< epsilon(p, q)
};

/// Relations that map a formal index pair to an equivalent one, with the sign
/// picked up by the minus and plus eigenfunctions.
enum class IndexRelation {
  reflect,  ///< (m,n) -> (m, m-n): minus flips sign, plus keeps it
  swap,     ///< (m,n) -> (n, m): both flip sign
  negate,   ///< (m,n) -> (-m,-n): minus keeps sign, plus flips it
};

std::string to_string(IndexRelation r);

struct Canonical {
  IndexPair raw;
  std::optional<IndexPair> image;  ///< empty when no wedge representative exists
  std::vector<IndexRelation> chain;
  int minus_sign = 1;
  int plus_sign = 1;
  /// Set when the pair has no wedge representative, which happens exactly
  /// when its orbit lies on n = 0 (the trig expressions vanish identically).
  std::string note;
};

/// Shortest chain of relations taking the pair into the wedge m >= 2n >= 2.
Canonical canonicalize(const IndexPair& qn);

struct TransformResult {
  QNTransform transform;
  IndexPair input;
  Canonical image;
  std::int64_t epsilon_in = 0;
  std::int64_t epsilon_out = 0;
  std::int64_t factor = 0;
};

/// Throws ValidationError unless the input is in the wedge and the transform is valid.
TransformResult apply(const QNTransform& t, const IndexPair& qn);

struct MultiplicativityReport {
  std::int64_t epsilon_in = 0;
  std::int64_t factor = 0;
  std::int64_t epsilon_out = 0;
  bool holds = false;
};

/// epsilon(T[m,n]) == epsilon(p,q) * epsilon(m,n), in exact integers.
MultiplicativityReport epsilon_multiplicativity_check(const QNTransform& t, const IndexPair& qn);

/// T[T[m,n]] == (epsilon(p,q) m, epsilon(p,q) n) on raw images.
bool double_application_holds(const QNTransform& t, const IndexPair& qn);

struct CommutationReport {
  IndexPair forward;   ///< T_a[T_b[m,n]]
  IndexPair backward;  ///< T_b[T_a[m,n]]
  bool epsilon_equal = false;
  bool canonical_equal = false;  ///< same wedge representative
};

CommutationReport commutation_check(const QNTransform& a, const QNTransform& b, const IndexPair& qn);

}  // namespace eqtri
