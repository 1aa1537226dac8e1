#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "frog/graph.hpp"
#include "frog/pmf.hpp"
#include "frog/rng.hpp"

namespace frog {

/// Initial-configuration rule: how many dormant frogs sit at each nonroot
/// vertex. The root always carries exactly the one initial active frog.
struct ConfigRule {
  enum class Type { Deterministic, IID, SiteDependentBernoulli, ExplicitCounts };

  Type type = Type::Deterministic;
  std::int64_t k = 0;                          // Deterministic
  Pmf pmf;                                     // IID
  double alpha = 1.0;                          // SiteDependentBernoulli
  std::map<std::string, std::int64_t> counts;  // ExplicitCounts, by label

  static ConfigRule deterministic(std::int64_t k) {
    if (k < 0) throw std::invalid_argument("deterministic rule: k >= 0");
    ConfigRule r;
    r.type = Type::Deterministic;
    r.k = k;
    return r;
  }
  static ConfigRule iid(Pmf pmf) {
    if (pmf.has_infinity())
      throw std::invalid_argument(
          "iid rule: pmf with an atom at infinity is not samplable");
    ConfigRule r;
    r.type = Type::IID;
    r.pmf = std::move(pmf);
    return r;
  }
  static ConfigRule site_dependent_bernoulli(double alpha) {
    if (alpha <= 0.0)
      throw std::invalid_argument("site-dependent rule: alpha > 0");
    ConfigRule r;
    r.type = Type::SiteDependentBernoulli;
    r.alpha = alpha;
    return r;
  }
  static ConfigRule explicit_counts(std::map<std::string, std::int64_t> c) {
    for (auto& [name, n] : c)
      if (n < 0)
        throw std::invalid_argument("explicit counts: negative count");
    ConfigRule r;
    r.type = Type::ExplicitCounts;
    r.counts = std::move(c);
    return r;
  }

  // The marginal pmf at a generic vertex, used for order certification.
  // Site-dependent rules have no single marginal and are rejected there.
  Pmf marginal() const {
    switch (type) {
      case Type::Deterministic:
        return Pmf::point(k);
      case Type::IID:
        return pmf;
      default:
        throw std::domain_error(
            "rule marginal: only deterministic and iid rules have one");
    }
  }
};

/// Samples the dormant count at nonroot vertex v. Deterministic given
/// (rule, vertex label, seed): the draw is keyed by the vertex's stable
/// label hash, never by its interned handle.
inline std::int64_t sample_count(const ConfigRule& rule, Graph& g, VertexId v,
                                 std::uint64_t count_seed) {
  if (v == kRoot)
    throw std::invalid_argument("sample_count: the root has no dormant pile");
  switch (rule.type) {
    case ConfigRule::Type::Deterministic:
      return rule.k;
    case ConfigRule::Type::IID: {
      double u = rng::uniform(count_seed, rng::Tag::Count, g.label_hash(v),
                              0, 0);
      return rule.pmf.sample(u);
    }
    case ConfigRule::Type::SiteDependentBernoulli: {
      double norm = g.euclidean_norm(v);
      double p = std::min(1.0, rule.alpha / (norm * norm));
      double u = rng::uniform(count_seed, rng::Tag::Count, g.label_hash(v),
                              0, 0);
      return u < p ? 1 : 0;
    }
    case ConfigRule::Type::ExplicitCounts: {
      auto it = rule.counts.find(g.label(v));
      return it == rule.counts.end() ? 0 : it->second;
    }
  }
  return 0;
}

}  // namespace frog
