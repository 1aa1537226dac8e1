#include <catch_amalgamated.hpp>

#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>

#include "frog/engine.hpp"
#include "frog/operator_a.hpp"
#include "frog/statistics.hpp"

using namespace frog;

namespace {

ExplicitModel two_frog_line() {
  // root -- a; the initial frog walks r,a,r and wakes (a,1), which walks
  // a,r. Hand enumeration: both frogs arrive at the root at step 2.
  ExplicitModel m;
  m.adj = std::make_shared<ExplicitAdjacency>(
      ExplicitAdjacency::from_edges("r", {{"r", "a"}}));
  m.counts = {{"a", 1}};
  m.table.insert("r", 1, {"r", "a", "r"});
  m.table.insert("a", 1, {"a", "r"});
  return m;
}

// Time-free reachability oracle: a pile is woken iff some already-woken
// frog's path visits its vertex; the visited set is the union of woken
// frogs' paths. Fixpoint over the path table.
std::set<std::string> activation_closure(const ExplicitModel& m) {
  std::set<std::string> visited{m.root_label()};
  std::set<std::string> woken_origins{m.root_label()};
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [key, path] : m.table.paths) {
      if (!woken_origins.count(key.first)) continue;
      for (auto& v : path)
        if (visited.insert(v).second) changed = true;
    }
    for (auto& [label, c] : m.counts)
      if (c > 0 && visited.count(label) && woken_origins.insert(label).second)
        changed = true;
  }
  return visited;
}

}  // namespace

TEST_CASE("two-frog line model by hand enumeration") {
  ExplicitModel m = two_frog_line();
  RunResult r = run_explicit(m);
  CHECK(r.out.root_visits == 2);
  VertexId a = r.graph->explicit_vertex("a");
  REQUIRE(r.out.activation_time.count(a));
  CHECK(r.out.activation_time.at(a) == 1);
  CHECK(r.out.total_frogs == 2);
  // Both root arrivals happen at step 2.
  CHECK(r.out.visits_by_step[1] == 0);
  CHECK(r.out.visits_by_step[2] == 2);
}

TEST_CASE("no path revisits the root: zero visits") {
  ExplicitModel m;
  m.adj = std::make_shared<ExplicitAdjacency>(
      ExplicitAdjacency::from_edges("r", {{"r", "a"}, {"a", "b"}}));
  m.counts = {{"a", 1}};
  m.table.insert("r", 1, {"r", "a"});
  m.table.insert("a", 1, {"a", "b"});
  RunResult r = run_explicit(m);
  CHECK(r.out.root_visits == 0);
  CHECK(r.out.visited_nonroot_total() == 2);
}

TEST_CASE("four-vertex graph with one interior frog") {
  ExplicitModel m;
  m.adj = truncated_tree::graph();
  m.counts = {{"op", 1}};
  m.table.insert("o", 1, {"o", "op", "u"});
  m.table.insert("op", 1, {"op", "o"});
  RunResult r = run_explicit(m);
  CHECK(r.out.root_visits == 1);
}

TEST_CASE("initial frog sitting at the root is not a visit") {
  ExplicitModel m;
  m.adj = std::make_shared<ExplicitAdjacency>(
      ExplicitAdjacency::from_edges("r", {{"r", "a"}}));
  m.table.insert("r", 1, {"r"});
  RunResult r = run_explicit(m);
  CHECK(r.out.root_visits == 0);
}

TEST_CASE("sigma_P and kappa_v semantics") {
  ExplicitModel m = two_frog_line();
  ExplicitModel m1 = sigma_P(m, {"a", "r"});
  CHECK(m1.count_at("a") == 2);
  CHECK(m1.table.contains("a", 2));
  ExplicitModel m2 = sigma_P(m1, {"a", "r", "a"});
  CHECK(m2.count_at("a") == 3);

  // kappa undoes the additions (and the original pile).
  ExplicitModel k = kappa_v(m2, "a");
  CHECK(k.count_at("a") == 0);
  CHECK_FALSE(k.table.contains("a", 1));
  CHECK(run_explicit(k).out.root_visits == 1);  // only the initial frog

  // kappa at an untouched vertex is the identity on outcomes.
  ExplicitModel mb = two_frog_line();
  mb.adj = std::make_shared<ExplicitAdjacency>(
      ExplicitAdjacency::from_edges("r", {{"r", "a"}, {"r", "b"}}));
  RunResult before = run_explicit(mb);
  RunResult after = run_explicit(kappa_v(mb, "b"));
  CHECK(before.out.root_visits == after.out.root_visits);

  CHECK_THROWS(sigma_P(m, {"r", "a"}));  // cannot add at the root
  CHECK_THROWS(kappa_v(m, "r"));
}

TEST_CASE("addition order does not change the outcome") {
  ExplicitModel m = two_frog_line();
  std::vector<std::string> p1{"a", "r", "a"};
  std::vector<std::string> p2{"a", "r"};
  RunResult r12 = run_explicit(sigma_P(sigma_P(m, p1), p2));
  RunResult r21 = run_explicit(sigma_P(sigma_P(m, p2), p1));
  CHECK(r12.out.root_visits == r21.out.root_visits);
  CHECK(r12.out.visited_nonroot_total() == r21.out.visited_nonroot_total());
}

TEST_CASE("timing independence: move order never matters") {
  std::mt19937_64 gen(2024);
  for (int i = 0; i < 50; ++i) {
    SmallInstance inst = generate_small_instance(gen);
    RunResult base = run_explicit(inst.model);
    for (std::uint64_t perm : {1ull, 99ull, 123456ull}) {
      RunResult r = run_explicit(inst.model, 0, perm);
      CHECK(r.out.root_visits == base.out.root_visits);
      CHECK(r.out.activation_time == base.out.activation_time);
      CHECK(r.out.root_visits_by_origin == base.out.root_visits_by_origin);
    }
  }
}

TEST_CASE("activation closure matches a time-free reachability oracle") {
  std::mt19937_64 gen(4711);
  for (int i = 0; i < 100; ++i) {
    SmallInstance inst = generate_small_instance(gen);
    RunResult r = run_explicit(inst.model);
    std::set<std::string> got;
    for (auto& [v, t] : r.out.activation_time) got.insert(r.graph->label(v));
    CHECK(got == activation_closure(inst.model));
  }
}

TEST_CASE("monotonicity under frog addition") {
  std::mt19937_64 gen(99);
  for (int i = 0; i < 50; ++i) {
    SmallInstance inst = generate_small_instance(gen);
    auto base = run_explicit(inst.model).out.root_visits;
    for (auto& p : inst.added_paths)
      CHECK(run_explicit(sigma_P(inst.model, p)).out.root_visits >= base);
  }
}

TEST_CASE("randomized runs are seed-deterministic") {
  FrogModelSpec spec;
  spec.graph = GraphKind::lattice(1);
  spec.rule = ConfigRule::deterministic(1);
  spec.walker = WalkerKind::srw();
  spec.horizon = 300;
  spec.seed = 31337;
  RunResult a = run(spec);
  RunResult b = run(spec);
  CHECK(a.out.root_visits == b.out.root_visits);
  CHECK(a.out.visits_by_step == b.out.visits_by_step);
  CHECK(a.out.activation_time == b.out.activation_time);
}

TEST_CASE("resource caps flag the run instead of dropping it") {
  FrogModelSpec spec;
  spec.graph = GraphKind::dary_tree(3, 14);
  spec.rule = ConfigRule::deterministic(3);
  spec.walker = WalkerKind::srw();
  spec.horizon = 500;
  spec.seed = 5;
  spec.max_frogs = 2000;
  spec.max_vertices = 1'000'000;
  RunResult r = run(spec);
  CHECK(r.out.capped);
  CHECK(r.out.visits_by_step.size() == 501);
  // the growth curve is padded with the value at the cap
  CHECK(r.out.visits_by_step.back() == r.out.root_visits);
}

TEST_CASE("all-zero counts reduce to a single walker") {
  FrogModelSpec spec;
  spec.graph = GraphKind::lattice(1);
  spec.rule = ConfigRule::deterministic(0);
  spec.walker = WalkerKind::srw();
  spec.horizon = 1000;
  spec.seed = 8;
  RunResult r = run(spec);
  CHECK(r.out.total_frogs == 1);
  // visited set is exactly the single trajectory's range
  Graph g(GraphKind::lattice(1));
  auto traj = prefix(WalkerKind::srw(), g, {kRoot, 1}, 1000, 8);
  std::set<VertexId> range(traj.begin(), traj.end());
  std::uint64_t returns = 0;
  for (std::size_t t = 1; t < traj.size(); ++t)
    if (traj[t] == kRoot) ++returns;
  CHECK(r.out.root_visits == returns);
  CHECK(r.out.activation_time.size() == range.size());
}
