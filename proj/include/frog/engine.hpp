#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "frog/graph.hpp"
#include "frog/init_config.hpp"
#include "frog/paths.hpp"
#include "frog/pmf.hpp"

namespace frog {

/// A randomized frog model instance: graph family, initial-configuration
/// rule, walker law, horizon and seeds. `count_seed` defaults to `seed`;
/// paired comparison experiments share `seed` and vary `count_seed`.
struct FrogModelSpec {
  GraphKind graph = GraphKind::lattice(1);
  ConfigRule rule;
  WalkerKind walker = WalkerKind::srw();
  std::uint32_t horizon = 1;
  std::uint64_t seed = 0;
  std::uint64_t count_seed = 0;
  bool count_seed_set = false;
  std::uint64_t max_frogs = 10'000'000;
  std::uint64_t max_vertices = 10'000'000;

  std::uint64_t effective_count_seed() const {
    return count_seed_set ? count_seed : seed;
  }
};

/// Deterministic finite instance: explicit graph, explicit dormant
/// counts, and a full path table (including the root's initial frog,
/// key (root, 1)).
struct ExplicitModel {
  std::shared_ptr<const ExplicitAdjacency> adj;
  std::map<std::string, std::int64_t> counts;
  PathTable table;

  const std::string& root_label() const { return adj->names[0]; }

  std::int64_t count_at(const std::string& label) const {
    auto it = counts.find(label);
    return it == counts.end() ? 0 : it->second;
  }

  std::size_t max_path_moves() const {
    std::size_t m = 0;
    for (auto& [key, p] : table.paths) m = std::max(m, p.size() - 1);
    return m;
  }

  // Every activation happens within the combined length of all stored
  // paths, so this horizon always runs the model to completion.
  std::size_t completion_horizon() const {
    std::size_t m = 0;
    for (auto& [key, p] : table.paths) m += p.size() - 1;
    return std::max<std::size_t>(1, m);
  }

  void validate() const {
    if (!adj) throw std::invalid_argument("explicit model: no graph");
    if (!table.contains(root_label(), 1))
      throw std::invalid_argument(
          "explicit model: missing path for the root's initial frog");
    for (auto& [label, c] : counts) {
      if (c < 0) throw std::invalid_argument("explicit model: negative count");
      if (label == root_label())
        throw std::invalid_argument(
            "explicit model: the root carries no dormant pile");
      adj->index_of(label);
      for (std::int64_t i = 1; i <= c; ++i)
        if (!table.contains(label, static_cast<std::uint32_t>(i)))
          throw std::invalid_argument("explicit model: missing path for (" +
                                      label + ", " + std::to_string(i) + ")");
    }
    for (auto& [key, path] : table.paths) {
      if (path.empty() || path.front() != key.first)
        throw std::invalid_argument(
            "explicit model: path must start at its origin");
      for (std::size_t s = 0; s + 1 < path.size(); ++s) {
        std::size_t a = adj->index_of(path[s]);
        std::size_t b = adj->index_of(path[s + 1]);
        if (std::find(adj->adj[a].begin(), adj->adj[a].end(), b) ==
            adj->adj[a].end())
          throw std::invalid_argument(
              "explicit model: path step between non-adjacent vertices " +
              path[s] + " -- " + path[s + 1]);
      }
    }
  }
};

/// Per-run record of the statistics the artifact cares about.
struct SimOutcome {
  std::uint64_t root_visits = 0;
  std::unordered_map<VertexId, std::uint32_t> activation_time;
  std::vector<std::uint64_t> visits_by_step;  // length horizon+1, cumulative
  std::unordered_map<VertexId, std::uint64_t> root_visits_by_origin;
  std::uint32_t horizon = 0;
  bool capped = false;
  std::uint64_t total_frogs = 1;

  bool visited(VertexId v) const { return activation_time.count(v) > 0; }

  // Number of nonroot sites activated by step t.
  std::uint64_t visited_nonroot(std::uint32_t t) const {
    std::uint64_t n = 0;
    for (auto& [v, at] : activation_time)
      if (v != kRoot && at <= t) ++n;
    return n;
  }

  std::uint64_t visited_nonroot_total() const {
    return activation_time.size() - 1;  // root is always present at time 0
  }
};

struct RunResult {
  std::shared_ptr<Graph> graph;
  SimOutcome out;
};

namespace detail {

struct LiveFrog {
  VertexId origin;
  std::uint64_t origin_hash;  // cached: label hashing is not cheap
  std::uint32_t index;
  VertexId cur;
  VertexId prev;
  std::uint32_t steps;  // moves made so far
  bool halted;
  const std::vector<VertexId>* table_path;  // null for random walkers
};

// Shared synchronous dynamics. At each step every active frog makes one
// move (or halts); piles wake when their vertex is first occupied by an
// arriving frog and the woken frogs start moving the following step.
// Root visits count arrivals at the root at steps >= 1.
//
// `get_count(v)` is consulted once, at v's activation. `resolve_path`
// returns the stored path for table-driven frogs, null otherwise.
inline SimOutcome run_dynamics(
    Graph& g, const WalkerKind& walker, std::uint32_t horizon,
    std::uint64_t path_seed,
    const std::function<std::int64_t(VertexId)>& get_count,
    const std::function<const std::vector<VertexId>*(VertexId, std::uint32_t)>&
        resolve_path,
    std::uint64_t max_frogs, std::uint64_t max_vertices,
    std::uint64_t perm_seed = 0) {
  if (horizon < 1) throw std::invalid_argument("run: horizon >= 1 required");
  SimOutcome out;
  out.horizon = horizon;
  out.visits_by_step.assign(horizon + 1, 0);

  std::deque<LiveFrog> frogs;
  auto spawn = [&](VertexId v, std::uint32_t index) {
    const std::vector<VertexId>* path = resolve_path(v, index);
    frogs.push_back({v, g.label_hash(v), index, v, kNoVertex, 0, false, path});
  };

  out.activation_time[kRoot] = 0;
  spawn(kRoot, 1);

  std::size_t live = 1;
  std::vector<VertexId> arrivals;
  std::vector<std::size_t> order;

  for (std::uint32_t t = 1; t <= horizon; ++t) {
    arrivals.clear();
    const std::size_t n = frogs.size();
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    if (perm_seed != 0) {
      // Fisher-Yates keyed off (perm_seed, t); used by the
      // timing-independence check.
      for (std::size_t i = n; i > 1; --i) {
        std::size_t j = rng::choice(perm_seed, rng::Tag::Generic, t, 0, i, i);
        std::swap(order[i - 1], order[j]);
      }
    }

    for (std::size_t oi = 0; oi < n; ++oi) {
      LiveFrog& f = frogs[order[oi]];
      if (f.halted) continue;
      if (g.is_absorbing(f.cur)) {
        f.halted = true;
        --live;
        continue;
      }
      StepResult r;
      if (f.table_path) {
        r = (f.steps + 1 < f.table_path->size())
                ? StepResult::move((*f.table_path)[f.steps + 1])
                : StepResult::halt();
      } else {
        r = detail::random_step(walker, g, f.origin_hash, f.index, f.cur,
                                f.prev, f.steps, path_seed);
      }
      if (r.halted) {
        f.halted = true;
        --live;
        continue;
      }
      f.prev = f.cur;
      f.cur = r.next;
      ++f.steps;
      arrivals.push_back(f.cur);
      if (f.cur == kRoot) {
        ++out.root_visits;
        ++out.root_visits_by_origin[f.origin];
      }
    }

    for (VertexId v : arrivals) {
      if (out.activation_time.count(v)) continue;
      out.activation_time[v] = t;
      if (v == kRoot) continue;
      std::int64_t c = get_count(v);
      for (std::int64_t i = 1; i <= c; ++i) {
        spawn(v, static_cast<std::uint32_t>(i));
        ++live;
        ++out.total_frogs;
      }
    }

    out.visits_by_step[t] = out.root_visits;

    if (frogs.size() > max_frogs || g.vertex_count() > max_vertices) {
      out.capped = true;
      for (std::uint32_t s = t + 1; s <= horizon; ++s)
        out.visits_by_step[s] = out.root_visits;
      return out;
    }
    if (live == 0) {
      for (std::uint32_t s = t + 1; s <= horizon; ++s)
        out.visits_by_step[s] = out.root_visits;
      return out;
    }
  }
  return out;
}

}  // namespace detail

/// Runs a randomized frog model for exactly `spec.horizon` steps (or
/// until every frog is halted, or a resource cap trips -- the outcome
/// then carries `capped = true`).
inline RunResult run(const FrogModelSpec& spec) {
  auto graph = std::make_shared<Graph>(spec.graph);
  Graph& g = *graph;
  std::uint64_t count_seed = spec.effective_count_seed();
  auto get_count = [&](VertexId v) {
    return sample_count(spec.rule, g, v, count_seed);
  };
  auto resolve = [](VertexId, std::uint32_t) -> const std::vector<VertexId>* {
    return nullptr;
  };
  SimOutcome out = detail::run_dynamics(g, spec.walker, spec.horizon,
                                        spec.seed, get_count, resolve,
                                        spec.max_frogs, spec.max_vertices);
  return {std::move(graph), std::move(out)};
}

/// Deterministic execution of an explicit model. If `horizon` is 0, runs
/// to completion (every frog halted).
/// `perm_seed` shuffles the per-step frog move order; the outcome must
/// not depend on it.
inline RunResult run_explicit(const ExplicitModel& m, std::uint32_t horizon = 0,
                              std::uint64_t perm_seed = 0) {
  m.validate();
  auto graph = std::make_shared<Graph>(GraphKind::explicit_graph(m.adj));
  Graph& g = *graph;
  if (horizon == 0)
    horizon = static_cast<std::uint32_t>(m.completion_horizon());

  // Resolve all stored paths to vertex handles once.
  std::map<std::pair<std::string, std::uint32_t>, std::vector<VertexId>>
      resolved;
  for (auto& [key, path] : m.table.paths) {
    std::vector<VertexId> ids;
    ids.reserve(path.size());
    for (auto& name : path) ids.push_back(g.explicit_vertex(name));
    resolved[key] = std::move(ids);
  }

  auto get_count = [&](VertexId v) { return m.count_at(g.label(v)); };
  auto resolve = [&](VertexId v,
                     std::uint32_t index) -> const std::vector<VertexId>* {
    auto it = resolved.find({g.label(v), index});
    if (it == resolved.end())
      throw std::invalid_argument("explicit model: malformed path table");
    return &it->second;
  };

  SimOutcome out = detail::run_dynamics(
      g, WalkerKind::explicit_table(), horizon, 0, get_count, resolve,
      m.counts.size() * 64 + 1024, 1u << 20, perm_seed);
  return {std::move(graph), std::move(out)};
}

/// Adds one frog with path P at P's (non-root) start vertex.
inline ExplicitModel sigma_P(const ExplicitModel& m,
                             const std::vector<std::string>& path) {
  if (path.empty()) throw std::invalid_argument("sigma_P: empty path");
  const std::string& origin = path.front();
  if (origin == m.root_label())
    throw std::invalid_argument("sigma_P: path must start off the root");
  m.adj->index_of(origin);
  ExplicitModel out = m;
  std::int64_t c = out.count_at(origin) + 1;
  out.counts[origin] = c;
  out.table.insert(origin, static_cast<std::uint32_t>(c), path);
  return out;
}

/// Deletes all frogs originating at v.
inline ExplicitModel kappa_v(const ExplicitModel& m, const std::string& v) {
  if (v == m.root_label())
    throw std::invalid_argument("kappa_v: cannot delete the root frog");
  m.adj->index_of(v);
  ExplicitModel out = m;
  out.counts.erase(v);
  for (auto it = out.table.paths.begin(); it != out.table.paths.end();) {
    if (it->first.first == v)
      it = out.table.paths.erase(it);
    else
      ++it;
  }
  return out;
}

}  // namespace frog
