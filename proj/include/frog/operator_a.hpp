#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "frog/engine.hpp"
#include "frog/orders.hpp"
#include "frog/pmf.hpp"

namespace frog {

// The truncated binary tree behind the operator: root -- mid, mid -- u,
// mid -- v. The root, u and v are leaves; nonbacktracking walks stop on
// arrival at any of them.
namespace truncated_tree {

inline const char* kRootName = "o";  // the root leaf
inline const char* kMidName = "op";  // the interior vertex
inline const char* kUName = "u";
inline const char* kVName = "v";

inline std::shared_ptr<const ExplicitAdjacency> graph() {
  static const auto g = std::make_shared<const ExplicitAdjacency>(
      ExplicitAdjacency::from_edges(
          kRootName, {{kRootName, kMidName},
                      {kMidName, kUName},
                      {kMidName, kVName}}));
  return g;
}

}  // namespace truncated_tree

/// Exact law of the number of frogs terminating at the root when the
/// truncated-tree frog model is run to rest: one active frog at the
/// root, one dormant frog at the interior vertex, and independent
/// pi-distributed piles at u and v, all with nonbacktracking walks
/// stopped at leaves.
///
/// The enumeration closes over the walk choices analytically:
///  - the root frog is forced to the interior vertex, then picks u or v;
///  - the interior frog's first step is uniform over its 3 neighbors and
///    stops there;
///  - each u-frog is forced back to the interior vertex, then picks the
///    root or v (and symmetrically for v-frogs), so the number of
///    u-frogs heading to the root is Bin(i, 1/2).
/// Piles participate only if their vertex is reached by an active frog,
/// which is resolved by a two-sided waking fixpoint.
inline Pmf apply_exact(const Pmf& pi, std::int64_t support_cap = 12) {
  if (pi.has_infinity())
    throw std::invalid_argument("apply_exact: pi must not charge infinity");
  if (pi.max_support() > support_cap)
    throw std::invalid_argument("apply_exact: support exceeds cap");

  std::int64_t K = pi.max_support();
  // binom[n][k] = P[Bin(n, 1/2) = k]
  std::vector<std::vector<double>> binom(K + 1);
  for (std::int64_t n = 0; n <= K; ++n) {
    binom[n].assign(n + 1, 0.0);
    double base = std::pow(0.5, static_cast<double>(n));
    double term = base;
    for (std::int64_t k = 0; k <= n; ++k) {
      binom[n][k] = term;
      if (k < n)
        term *= static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
  }

  std::map<std::int64_t, double> out;
  for (auto& [i, pi_i] : pi.mass()) {
    for (auto& [j, pi_j] : pi.mass()) {
      double p_counts = pi_i * pi_j;
      for (int c0 = 0; c0 < 2; ++c0) {        // root frog: 0 -> u, 1 -> v
        for (int c1 = 0; c1 < 3; ++c1) {      // mid frog: root, u, v
          for (std::int64_t ku = 0; ku <= i; ++ku) {
            for (std::int64_t kv = 0; kv <= j; ++kv) {
              bool u_woken = (c0 == 0) || (c1 == 1);
              bool v_woken = (c0 == 1) || (c1 == 2);
              for (int pass = 0; pass < 2; ++pass) {
                if (u_woken && i - ku >= 1) v_woken = true;
                if (v_woken && j - kv >= 1) u_woken = true;
              }
              std::int64_t at_root = (c1 == 0 ? 1 : 0) +
                                     (u_woken ? ku : 0) +
                                     (v_woken ? kv : 0);
              out[at_root] += p_counts * 0.5 * (1.0 / 3.0) * binom[i][ku] *
                              binom[j][kv];
            }
          }
        }
      }
    }
  }
  return Pmf::from_mass(std::move(out));
}

/// Monte Carlo counterpart through the simulation engine: raw samples of
/// the number of frogs terminating at the root.
inline std::vector<std::int64_t> apply_mc(const Pmf& pi, std::size_t reps,
                                          std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("apply_mc: reps >= 1");
  if (pi.has_infinity())
    throw std::invalid_argument("apply_mc: pi must not charge infinity");
  std::vector<std::int64_t> samples;
  samples.reserve(reps);
  for (std::size_t rep = 0; rep < reps; ++rep) {
    std::int64_t i =
        pi.sample(rng::uniform(seed, rng::Tag::Count, rep, 0, 0));
    std::int64_t j =
        pi.sample(rng::uniform(seed, rng::Tag::Count, rep, 1, 0));
    FrogModelSpec spec;
    spec.graph = GraphKind::explicit_graph(truncated_tree::graph());
    spec.rule = ConfigRule::explicit_counts({{truncated_tree::kMidName, 1},
                                             {truncated_tree::kUName, i},
                                             {truncated_tree::kVName, j}});
    spec.walker = WalkerKind::nonbacktracking();
    spec.horizon = 8;  // every walk rests within 3 moves
    spec.seed = rng::mix(seed, rep);
    RunResult r = run(spec);
    samples.push_back(static_cast<std::int64_t>(r.out.root_visits));
  }
  return samples;
}

struct MonotonicityReport {
  int pairs = 0;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

/// For input pairs already pgf-ordered, the operator images must be
/// pgf-ordered too. Pairs failing the input certification are rejected.
inline MonotonicityReport monotonicity_test(
    const std::vector<std::pair<Pmf, Pmf>>& pairs, int t_grid_size = 512,
    std::int64_t support_cap = 12) {
  MonotonicityReport rep;
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto& [lo, hi] = pairs[idx];
    OrderVerdict pre = check_exact(OrderKind::Pgf, lo, hi, t_grid_size);
    if (!pre.dominates())
      throw std::invalid_argument(
          "monotonicity_test: pair " + std::to_string(idx) +
          " is not pgf-ordered");
    Pmf alo = apply_exact(lo, support_cap);
    Pmf ahi = apply_exact(hi, support_cap);
    OrderVerdict post = check_exact(OrderKind::Pgf, alo, ahi, t_grid_size);
    ++rep.pairs;
    if (!post.dominates())
      rep.failures.push_back("pair " + std::to_string(idx) +
                             ": operator images not pgf-ordered (margin " +
                             std::to_string(post.margin) + " at t=" +
                             std::to_string(post.witness_point) + ")");
  }
  return rep;
}

/// Iterates the operator, folding tail mass above `support_cap` into the
/// top atom between steps. Returns [pi_1, ..., pi_n].
inline std::vector<Pmf> iterate(const Pmf& pi0, int n,
                                std::int64_t support_cap = 64,
                                bool* folded = nullptr) {
  if (n < 1) throw std::invalid_argument("iterate: n >= 1");
  if (folded) *folded = false;
  std::vector<Pmf> out;
  Pmf cur = pi0;
  for (int step = 0; step < n; ++step) {
    cur = apply_exact(cur, 2 + 2 * support_cap);
    if (cur.max_support() > support_cap) {
      if (folded) *folded = true;
      std::map<std::int64_t, double> m;
      for (auto& [k, w] : cur.mass()) m[std::min(k, support_cap)] += w;
      cur = Pmf::from_mass(std::move(m));
    }
    out.push_back(cur);
  }
  return out;
}

}  // namespace frog
