#include "eqtri/transforms.hpp"

#include <algorithm>
#include <deque>

#include "eqtri/config.hpp"
#include "eqtri/spectrum.hpp"

namespace eqtri {

std::int64_t epsilon(const IndexPair& qn) { return epsilon(qn.m, qn.n); }

bool in_wedge(const IndexPair& qn) { return qn.n >= 1 && qn.m >= 2 * qn.n; }

void QNTransform::validate() const {
  if (p < 1 || q < 0 || p < 2 * q) throw ValidationError("transform labels must satisfy p >= 2q >= 0, p >= 1");
}

IndexPair QNTransform::raw(const IndexPair& qn) const {
  return {p * qn.m - q * qn.n, (p - q) * qn.m - p * qn.n};
}

std::int64_t QNTransform::factor() const { return epsilon(p, q); }

std::string to_string(IndexRelation r) {
  switch (r) {
    case IndexRelation::reflect: return "(m,n)->(m,m-n)";
    case IndexRelation::swap: return "(m,n)->(n,m)";
    case IndexRelation::negate: return "(m,n)->(-m,-n)";
  }
  return "?";
}

Canonical canonicalize(const IndexPair& qn) {
  struct Node {
    IndexPair pair;
    std::vector<IndexRelation> chain;
    int minus_sign;
    int plus_sign;
  };
  Canonical out;
  out.raw = qn;
  // The three relations generate a group of order 12 on index pairs, so a
  // breadth-first search over it is exhaustive and returns a shortest chain.
  std::deque<Node> frontier{{qn, {}, 1, 1}};
  std::vector<IndexPair> seen{qn};
  while (!frontier.empty()) {
    Node node = std::move(frontier.front());
    frontier.pop_front();
    if (in_wedge(node.pair)) {
      out.image = node.pair;
      out.chain = std::move(node.chain);
      out.minus_sign = node.minus_sign;
      out.plus_sign = node.plus_sign;
      return out;
    }
    const IndexPair& p = node.pair;
    const std::pair<IndexRelation, IndexPair> next[] = {
        {IndexRelation::reflect, {p.m, p.m - p.n}},
        {IndexRelation::swap, {p.n, p.m}},
        {IndexRelation::negate, {-p.m, -p.n}},
    };
    for (const auto& [rel, pair] : next) {
      if (std::find(seen.begin(), seen.end(), pair) != seen.end()) continue;
      seen.push_back(pair);
      Node child{pair, node.chain, node.minus_sign, node.plus_sign};
      child.chain.push_back(rel);
      switch (rel) {
        case IndexRelation::reflect: child.minus_sign = -child.minus_sign; break;
        case IndexRelation::swap:
          child.minus_sign = -child.minus_sign;
          child.plus_sign = -child.plus_sign;
          break;
        case IndexRelation::negate: child.plus_sign = -child.plus_sign; break;
      }
      frontier.push_back(std::move(child));
    }
  }
  out.note = "no wedge representative: the pair is equivalent to (k,0) and labels no state";
  return out;
}

TransformResult apply(const QNTransform& t, const IndexPair& qn) {
  t.validate();
  if (!in_wedge(qn)) throw ValidationError("input quantum numbers must satisfy m >= 2n >= 2");
  TransformResult r;
  r.transform = t;
  r.input = qn;
  r.image = canonicalize(t.raw(qn));
  r.epsilon_in = epsilon(qn);
  r.epsilon_out = epsilon(r.image.raw);
  r.factor = t.factor();
  return r;
}

MultiplicativityReport epsilon_multiplicativity_check(const QNTransform& t, const IndexPair& qn) {
  t.validate();
  MultiplicativityReport rep;
  rep.epsilon_in = epsilon(qn);
  rep.factor = t.factor();
  rep.epsilon_out = epsilon(t.raw(qn));
  rep.holds = rep.epsilon_out == rep.factor * rep.epsilon_in;
  return rep;
}

bool double_application_holds(const QNTransform& t, const IndexPair& qn) {
  t.validate();
  const IndexPair twice = t.raw(t.raw(qn));
  const std::int64_t f = t.factor();
  return twice == IndexPair{f * qn.m, f * qn.n};
}

CommutationReport commutation_check(const QNTransform& a, const QNTransform& b, const IndexPair& qn) {
  a.validate();
  b.validate();
  CommutationReport rep;
  rep.forward = a.raw(b.raw(qn));
  rep.backward = b.raw(a.raw(qn));
  rep.epsilon_equal = epsilon(rep.forward) == epsilon(rep.backward) &&
                      epsilon(rep.forward) == a.factor() * b.factor() * epsilon(qn);
  const auto fwd = canonicalize(rep.forward).image;
  const auto bwd = canonicalize(rep.backward).image;
  rep.canonical_equal = fwd.has_value() && bwd.has_value() && *fwd == *bwd;
  return rep;
}

}  // namespace eqtri
