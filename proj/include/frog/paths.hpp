#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "frog/graph.hpp"
#include "frog/rng.hpp"

namespace frog {

/// Identifies one frog within a model: (origin vertex, 1-based index).
struct FrogKey {
  VertexId origin = kRoot;
  std::uint32_t index = 1;

  bool operator==(const FrogKey&) const = default;
  auto operator<=>(const FrogKey&) const = default;
};

/// Frog path laws. BiasedZ is only valid on the 1-dimensional lattice;
/// NonbacktrackingStoppedAtLeaves requires a graph with designated leaves.
struct WalkerKind {
  enum class Type {
    SRW,
    BiasedZ,
    NonbacktrackingStoppedAtLeaves,
    SRWWithDeath,
    ExplicitTable,
  };

  Type type = Type::SRW;
  double p_right = 0.5;   // BiasedZ
  double survival = 1.0;  // SRWWithDeath

  static WalkerKind srw() { return {Type::SRW, 0.5, 1.0}; }
  static WalkerKind biased_z(double p_right) {
    if (p_right <= 0.0 || p_right >= 1.0)
      throw std::invalid_argument("biased walk: p_right in (0,1) required");
    return {Type::BiasedZ, p_right, 1.0};
  }
  static WalkerKind nonbacktracking() {
    return {Type::NonbacktrackingStoppedAtLeaves, 0.5, 1.0};
  }
  static WalkerKind srw_with_death(double survival) {
    if (survival <= 0.0 || survival > 1.0)
      throw std::invalid_argument("death walk: survival in (0,1] required");
    return {Type::SRWWithDeath, 0.5, survival};
  }
  static WalkerKind explicit_table() {
    return {Type::ExplicitTable, 0.5, 1.0};
  }
};

/// Stored paths keyed by (origin label, index). Each path starts at its
/// origin; consecutive vertices must be adjacent.
struct PathTable {
  // Key uses the origin's canonical label so tables survive re-interning.
  std::map<std::pair<std::string, std::uint32_t>, std::vector<std::string>>
      paths;

  const std::vector<std::string>& at(const std::string& origin,
                                     std::uint32_t index) const {
    auto it = paths.find({origin, index});
    if (it == paths.end())
      throw std::invalid_argument("path table: missing path for (" + origin +
                                  ", " + std::to_string(index) + ")");
    return it->second;
  }

  bool contains(const std::string& origin, std::uint32_t index) const {
    return paths.count({origin, index}) > 0;
  }

  void insert(const std::string& origin, std::uint32_t index,
              std::vector<std::string> path) {
    if (path.empty() || path.front() != origin)
      throw std::invalid_argument("path table: path must start at origin");
    paths[{origin, index}] = std::move(path);
  }
};

/// One move of a frog. `Halt` means the frog makes no move now and never
/// will again (death, table exhausted, or stopped at a leaf).
struct StepResult {
  bool halted = false;
  VertexId next = kNoVertex;

  static StepResult halt() { return {true, kNoVertex}; }
  static StepResult move(VertexId v) { return {false, v}; }
};

namespace detail {

inline StepResult random_step(const WalkerKind& walker, Graph& g,
                              std::uint64_t origin_hash, std::uint32_t index,
                              VertexId current, VertexId previous,
                              std::uint32_t step_index, std::uint64_t seed) {
  switch (walker.type) {
    case WalkerKind::Type::SRW: {
      const auto& nb = g.neighbors(current);
      if (nb.empty()) return StepResult::halt();
      std::size_t i = rng::choice(seed, rng::Tag::Move, origin_hash, index,
                                  step_index, nb.size());
      return StepResult::move(nb[i]);
    }
    case WalkerKind::Type::BiasedZ: {
      if (g.kind().type != GraphKind::Type::Lattice || g.kind().d != 1)
        throw std::invalid_argument("biased walk requires the Z lattice");
      double u = rng::uniform(seed, rng::Tag::Move, origin_hash, index,
                              step_index);
      const auto& nb = g.neighbors(current);  // [+1, -1]
      return StepResult::move(u < walker.p_right ? nb[0] : nb[1]);
    }
    case WalkerKind::Type::NonbacktrackingStoppedAtLeaves: {
      if (step_index > 0 && g.is_leaf(current)) return StepResult::halt();
      const auto& nb = g.neighbors(current);
      std::vector<VertexId> allowed;
      allowed.reserve(nb.size());
      for (VertexId w : nb)
        if (w != previous) allowed.push_back(w);
      if (allowed.empty()) {
        // Degree-1 dead end: the only move would backtrack.
        return StepResult::halt();
      }
      std::size_t i = rng::choice(seed, rng::Tag::Move, origin_hash, index,
                                  step_index, allowed.size());
      return StepResult::move(allowed[i]);
    }
    case WalkerKind::Type::SRWWithDeath: {
      // Death is resolved before the move at each step. The death draw
      // uses its own stream so that raising the survival probability
      // extends a frog's life without changing any of its moves.
      double u = rng::uniform(seed, rng::Tag::Death, origin_hash, index,
                              step_index);
      if (u >= walker.survival) return StepResult::halt();
      const auto& nb = g.neighbors(current);
      if (nb.empty()) return StepResult::halt();
      std::size_t i = rng::choice(seed, rng::Tag::Move, origin_hash, index,
                                  step_index, nb.size());
      return StepResult::move(nb[i]);
    }
    case WalkerKind::Type::ExplicitTable:
      throw std::logic_error("explicit-table walker needs a path table");
  }
  return StepResult::halt();
}

}  // namespace detail

/// Draws the next position of frog (key) currently at `current` with
/// previous position `previous` (kNoVertex if none), at path step
/// `step_index` (0-based count of moves already made). Deterministic in
/// (seed, origin label, index, step_index).
inline StepResult step(const WalkerKind& walker, Graph& g, const FrogKey& key,
                       VertexId current, VertexId previous,
                       std::uint32_t step_index, std::uint64_t seed) {
  return detail::random_step(walker, g, g.label_hash(key.origin), key.index,
                             current, previous, step_index, seed);
}

/// First `length` moves of a frog (fewer if it halts). The returned
/// sequence always begins with the origin.
inline std::vector<VertexId> prefix(const WalkerKind& walker, Graph& g,
                                    const FrogKey& key, std::size_t length,
                                    std::uint64_t seed) {
  std::vector<VertexId> out{key.origin};
  VertexId prev = kNoVertex;
  VertexId cur = key.origin;
  for (std::size_t s = 0; s < length; ++s) {
    StepResult r = step(walker, g, key, cur, prev,
                        static_cast<std::uint32_t>(s), seed);
    if (r.halted) break;
    prev = cur;
    cur = r.next;
    out.push_back(cur);
  }
  return out;
}

}  // namespace frog
