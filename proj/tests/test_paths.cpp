#include <catch_amalgamated.hpp>

#include <memory>

#include "frog/operator_a.hpp"
#include "frog/paths.hpp"

using namespace frog;

TEST_CASE("srw on Z is a fair coin") {
  Graph g(GraphKind::lattice(1));
  int right = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    FrogKey key{kRoot, static_cast<std::uint32_t>(i + 1)};
    StepResult r = step(WalkerKind::srw(), g, key, kRoot, kNoVertex, 0, 5);
    REQUIRE_FALSE(r.halted);
    if (g.lattice_coords(r.next)[0] == 1) ++right;
  }
  CHECK_THAT(right / double(n), Catch::Matchers::WithinAbs(0.5, 0.01));
}

TEST_CASE("biased walk respects p_right and rejects non-Z graphs") {
  Graph g(GraphKind::lattice(1));
  int right = 0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    FrogKey key{kRoot, static_cast<std::uint32_t>(i + 1)};
    StepResult r =
        step(WalkerKind::biased_z(0.7), g, key, kRoot, kNoVertex, 0, 5);
    if (g.lattice_coords(r.next)[0] == 1) ++right;
  }
  CHECK_THAT(right / double(n), Catch::Matchers::WithinAbs(0.7, 0.01));

  Graph g2(GraphKind::lattice(2));
  FrogKey key{kRoot, 1};
  CHECK_THROWS(step(WalkerKind::biased_z(0.7), g2, key, kRoot, kNoVertex, 0, 5));
}

TEST_CASE("nonbacktracking walk never backtracks and stops at leaves") {
  Graph g(GraphKind::dary_tree(2, 4));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto path = prefix(WalkerKind::nonbacktracking(), g, {kRoot, 1}, 20, seed);
    for (std::size_t t = 2; t < path.size(); ++t)
      CHECK(path[t] != path[t - 2]);
    // Walks on the capped tree can only end by reaching a leaf.
    if (path.size() < 21) CHECK(g.is_leaf(path.back()));
  }
}

TEST_CASE("nonbacktracking frog from u is forced through the interior") {
  // On the 4-vertex operator graph a frog waking at u must step to the
  // interior vertex (its only non-previous neighbor) and then stop one
  // step later at whichever leaf it picks.
  Graph g(GraphKind::explicit_graph(truncated_tree::graph()));
  VertexId u = g.explicit_vertex(truncated_tree::kUName);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto path = prefix(WalkerKind::nonbacktracking(), g, {u, 1}, 10, seed);
    REQUIRE(path.size() == 3);
    CHECK(path[1] == g.explicit_vertex(truncated_tree::kMidName));
    CHECK(g.is_leaf(path[2]));
    CHECK(path[2] != u);
  }
}

TEST_CASE("death walk: survival 1 never halts, and raising p extends paths") {
  Graph g(GraphKind::lattice(1));
  auto full = prefix(WalkerKind::srw_with_death(1.0), g, {kRoot, 1}, 200, 3);
  CHECK(full.size() == 201);

  // The death stream is separate from the move stream, so the path at
  // lower survival is a prefix of the path at higher survival.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto lo = prefix(WalkerKind::srw_with_death(0.5), g, {kRoot, 1}, 100, seed);
    auto hi = prefix(WalkerKind::srw_with_death(0.9), g, {kRoot, 1}, 100, seed);
    REQUIRE(lo.size() <= hi.size());
    for (std::size_t t = 0; t < lo.size(); ++t) CHECK(lo[t] == hi[t]);
  }
}

TEST_CASE("prefix basics") {
  Graph g(GraphKind::lattice(1));
  auto p0 = prefix(WalkerKind::srw(), g, {kRoot, 1}, 0, 1);
  CHECK(p0 == std::vector<VertexId>{kRoot});
  auto a = prefix(WalkerKind::srw(), g, {kRoot, 1}, 10, 1);
  auto b = prefix(WalkerKind::srw(), g, {kRoot, 1}, 10, 1);
  CHECK(a == b);
}

TEST_CASE("per-frog streams are independent") {
  // Draws for one frog never depend on which other frogs exist.
  Graph g(GraphKind::lattice(1));
  auto before = prefix(WalkerKind::srw(), g, {kRoot, 1}, 50, 77);
  prefix(WalkerKind::srw(), g, {kRoot, 2}, 50, 77);  // another frog walks
  auto after = prefix(WalkerKind::srw(), g, {kRoot, 1}, 50, 77);
  CHECK(before == after);
}

TEST_CASE("path table") {
  PathTable t;
  t.insert("a", 1, {"a", "b"});
  CHECK(t.contains("a", 1));
  CHECK_FALSE(t.contains("a", 2));
  CHECK(t.at("a", 1) == std::vector<std::string>{"a", "b"});
  CHECK_THROWS(t.at("a", 2));
  CHECK_THROWS(t.insert("a", 2, {"b", "a"}));  // must start at origin
}
