#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "frog/rng.hpp"

namespace frog {

using VertexId = std::uint32_t;
inline constexpr VertexId kRoot = 0;
inline constexpr VertexId kNoVertex = static_cast<VertexId>(-1);

/// Explicit finite graph given by named vertices and an edge list.
/// Vertex and neighbor order follow insertion order, root first.
struct ExplicitAdjacency {
  std::vector<std::string> names;          // names[0] is the root
  std::vector<std::vector<std::size_t>> adj;

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw std::invalid_argument("explicit graph: unknown vertex " + name);
  }

  bool has(const std::string& name) const {
    for (auto& n : names)
      if (n == name) return true;
    return false;
  }

  // Builds from an edge list; the root must appear in some edge.
  static ExplicitAdjacency from_edges(
      const std::string& root,
      const std::vector<std::pair<std::string, std::string>>& edges) {
    ExplicitAdjacency g;
    g.names.push_back(root);
    g.adj.emplace_back();
    auto intern = [&g](const std::string& n) {
      for (std::size_t i = 0; i < g.names.size(); ++i)
        if (g.names[i] == n) return i;
      g.names.push_back(n);
      g.adj.emplace_back();
      return g.names.size() - 1;
    };
    for (auto& [a, b] : edges) {
      std::size_t ia = intern(a), ib = intern(b);
      if (ia == ib) throw std::invalid_argument("explicit graph: self-loop");
      g.adj[ia].push_back(ib);
      g.adj[ib].push_back(ia);
    }
    g.check_connected();
    return g;
  }

  void check_connected() const {
    if (names.empty()) throw std::invalid_argument("explicit graph: empty");
    std::vector<char> seen(names.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    for (char s : seen)
      if (!s)
        throw std::invalid_argument(
            "explicit graph: not connected to the root");
  }
};

/// Descriptor for the graph families the engine runs on.
struct GraphKind {
  enum class Type { Lattice, DaryTree, DRegularTree, Explicit };

  Type type = Type::Lattice;
  int d = 1;
  int depth_cap = 0;  // trees only
  std::shared_ptr<const ExplicitAdjacency> adj;

  static GraphKind lattice(int d) {
    if (d < 1) throw std::invalid_argument("lattice: d >= 1 required");
    return {Type::Lattice, d, 0, nullptr};
  }
  static GraphKind dary_tree(int d, int depth_cap) {
    if (d < 2) throw std::invalid_argument("d-ary tree: d >= 2 required");
    if (depth_cap < 1) throw std::invalid_argument("d-ary tree: depth_cap");
    return {Type::DaryTree, d, depth_cap, nullptr};
  }
  static GraphKind dregular_tree(int d, int depth_cap) {
    if (d < 3) throw std::invalid_argument("d-regular tree: d >= 3 required");
    if (depth_cap < 1)
      throw std::invalid_argument("d-regular tree: depth_cap");
    return {Type::DRegularTree, d, depth_cap, nullptr};
  }
  static GraphKind explicit_graph(std::shared_ptr<const ExplicitAdjacency> a) {
    if (!a) throw std::invalid_argument("explicit graph: null adjacency");
    GraphKind k;
    k.type = Type::Explicit;
    k.adj = std::move(a);
    return k;
  }
};

/// Rooted, locally finite graph with lazy vertex interning. Handle 0 is
/// always the root; handles are issued in first-touch order, which is
/// deterministic given the query sequence.
class Graph {
 public:
  explicit Graph(GraphKind kind) : kind_(std::move(kind)) {
    switch (kind_.type) {
      case GraphKind::Type::Lattice: {
        std::vector<int> origin(static_cast<std::size_t>(kind_.d), 0);
        intern_lattice(origin);
        break;
      }
      case GraphKind::Type::DaryTree:
      case GraphKind::Type::DRegularTree:
        tree_.push_back({kNoVertex, 0, 0});
        nbrs_.emplace_back();
        known_.push_back(false);
        break;
      case GraphKind::Type::Explicit: {
        // Explicit graphs are finite; intern everything up front.
        const auto& a = *kind_.adj;
        for (std::size_t i = 0; i < a.names.size(); ++i) {
          nbrs_.emplace_back();
          known_.push_back(false);
        }
        break;
      }
    }
  }

  const GraphKind& kind() const { return kind_; }
  std::size_t vertex_count() const { return nbrs_.size(); }

  const std::vector<VertexId>& neighbors(VertexId v) {
    check(v);
    if (!known_[v]) materialize(v);
    return nbrs_[v];
  }

  std::size_t degree(VertexId v) { return neighbors(v).size(); }

  // Leaves: capped boundary vertices on trees, degree-1 vertices on
  // explicit graphs. The lattice has none.
  bool is_leaf(VertexId v) {
    check(v);
    switch (kind_.type) {
      case GraphKind::Type::Lattice:
        return false;
      case GraphKind::Type::DaryTree:
      case GraphKind::Type::DRegularTree:
        return tree_[v].depth == kind_.depth_cap;
      case GraphKind::Type::Explicit:
        return kind_.adj->adj[v].size() == 1;
    }
    return false;
  }

  // Capped tree boundary vertices absorb every walker.
  bool is_absorbing(VertexId v) {
    check(v);
    if (kind_.type == GraphKind::Type::DaryTree ||
        kind_.type == GraphKind::Type::DRegularTree)
      return tree_[v].depth == kind_.depth_cap;
    return false;
  }

  /// Canonical label: lattice -> comma-joined coordinates, tree ->
  /// dot-joined child indices from the root (root is ""), explicit ->
  /// the original vertex name.
  std::string label(VertexId v) const {
    check(v);
    switch (kind_.type) {
      case GraphKind::Type::Lattice: {
        std::string s;
        const auto& c = coords_[v];
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (i) s += ',';
          s += std::to_string(c[i]);
        }
        return s;
      }
      case GraphKind::Type::DaryTree:
      case GraphKind::Type::DRegularTree: {
        std::vector<int> path;
        VertexId cur = v;
        while (cur != kRoot) {
          path.push_back(tree_[cur].child_index);
          cur = tree_[cur].parent;
        }
        std::string s;
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
          if (!s.empty()) s += '.';
          s += std::to_string(*it);
        }
        return s;
      }
      case GraphKind::Type::Explicit:
        return kind_.adj->names[v];
    }
    return {};
  }

  // Stable across interning order: a function of the canonical label only.
  std::uint64_t label_hash(VertexId v) const {
    std::string l = label(v);
    return rng::hash_string(l.data(), l.size());
  }

  const std::vector<int>& lattice_coords(VertexId v) const {
    if (kind_.type != GraphKind::Type::Lattice)
      throw std::logic_error("lattice_coords: not a lattice graph");
    check(v);
    return coords_[v];
  }

  double euclidean_norm(VertexId v) const {
    const auto& c = lattice_coords(v);
    double s = 0.0;
    for (int x : c) s += static_cast<double>(x) * static_cast<double>(x);
    return std::sqrt(s);
  }

  int tree_depth(VertexId v) const {
    if (kind_.type != GraphKind::Type::DaryTree &&
        kind_.type != GraphKind::Type::DRegularTree)
      throw std::logic_error("tree_depth: not a tree graph");
    check(v);
    return tree_[v].depth;
  }

  // Interns the lattice vertex with the given coordinates.
  VertexId lattice_vertex(const std::vector<int>& coords) {
    if (kind_.type != GraphKind::Type::Lattice)
      throw std::logic_error("lattice_vertex: not a lattice graph");
    if (coords.size() != static_cast<std::size_t>(kind_.d))
      throw std::invalid_argument("lattice_vertex: dimension mismatch");
    return intern_lattice(coords);
  }

  VertexId explicit_vertex(const std::string& name) const {
    if (kind_.type != GraphKind::Type::Explicit)
      throw std::logic_error("explicit_vertex: not an explicit graph");
    return static_cast<VertexId>(kind_.adj->index_of(name));
  }

 private:
  struct TreeNode {
    VertexId parent;
    int depth;
    int child_index;
  };

  void check(VertexId v) const {
    if (v >= nbrs_.size())
      throw std::out_of_range("graph: unknown vertex handle");
  }

  VertexId intern_lattice(const std::vector<int>& coords) {
    auto it = lattice_index_.find(coords);
    if (it != lattice_index_.end()) return it->second;
    auto id = static_cast<VertexId>(nbrs_.size());
    coords_.push_back(coords);
    lattice_index_.emplace(coords, id);
    nbrs_.emplace_back();
    known_.push_back(false);
    return id;
  }

  void materialize(VertexId v) {
    std::vector<VertexId> out;
    switch (kind_.type) {
      case GraphKind::Type::Lattice: {
        // Per axis: +1 neighbor first, then -1.
        std::vector<int> c = coords_[v];
        for (int axis = 0; axis < kind_.d; ++axis) {
          c[axis] += 1;
          out.push_back(intern_lattice(c));
          c[axis] -= 2;
          out.push_back(intern_lattice(c));
          c[axis] += 1;
        }
        break;
      }
      case GraphKind::Type::DaryTree:
      case GraphKind::Type::DRegularTree: {
        const TreeNode node = tree_[v];
        if (node.parent != kNoVertex) out.push_back(node.parent);
        if (node.depth < kind_.depth_cap) {
          int n_children = kind_.d;
          if (kind_.type == GraphKind::Type::DRegularTree && v != kRoot)
            n_children = kind_.d - 1;
          for (int i = 0; i < n_children; ++i) {
            auto id = static_cast<VertexId>(nbrs_.size());
            tree_.push_back({v, node.depth + 1, i});
            nbrs_.emplace_back();
            known_.push_back(false);
            out.push_back(id);
          }
        }
        break;
      }
      case GraphKind::Type::Explicit:
        for (std::size_t w : kind_.adj->adj[v])
          out.push_back(static_cast<VertexId>(w));
        break;
    }
    nbrs_[v] = std::move(out);
    known_[v] = true;
  }

  struct CoordsHash {
    std::size_t operator()(const std::vector<int>& c) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ULL;
      for (int x : c)
        h = rng::splitmix64(h ^ static_cast<std::uint64_t>(
                                    static_cast<std::uint32_t>(x)));
      return static_cast<std::size_t>(h);
    }
  };

  GraphKind kind_;
  std::vector<std::vector<VertexId>> nbrs_;
  std::vector<char> known_;
  std::vector<std::vector<int>> coords_;  // lattice
  std::unordered_map<std::vector<int>, VertexId, CoordsHash> lattice_index_;
  std::vector<TreeNode> tree_;  // trees
};

}  // namespace frog
