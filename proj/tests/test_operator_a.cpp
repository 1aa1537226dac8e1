#include <catch_amalgamated.hpp>

#include <map>

#include "operator_oracle.hpp"

#include "frog/operator_a.hpp"

using namespace frog;
using Catch::Matchers::WithinAbs;

TEST_CASE("image of point(0) is bernoulli(1/3)") {
  // Only the interior frog can reach the root; its first step is uniform
  // over three neighbors.
  Pmf img = apply_exact(Pmf::point(0));
  CHECK_THAT(img.mass_at(0), WithinAbs(2.0 / 3.0, 1e-12));
  CHECK_THAT(img.mass_at(1), WithinAbs(1.0 / 3.0, 1e-12));
  CHECK(img.max_support() == 1);
}

TEST_CASE("exact enumeration matches the brute-force oracle") {
  for (const Pmf& pi :
       {Pmf::point(0), Pmf::point(1), Pmf::point(2), Pmf::bernoulli(0.5),
        Pmf::from_mass({{0, 0.3}, {1, 0.3}, {2, 0.4}}),
        Pmf::from_mass({{0, 0.25}, {3, 0.75}})}) {
    Pmf got = apply_exact(pi);
    Pmf want = oracle::apply(pi);
    std::int64_t top = std::max(got.max_support(), want.max_support());
    for (std::int64_t k = 0; k <= top; ++k) {
      INFO("k=" << k);
      CHECK_THAT(got.mass_at(k), WithinAbs(want.mass_at(k), 1e-12));
    }
  }
}

TEST_CASE("mass conservation and support bound") {
  for (const Pmf& pi : {Pmf::bernoulli(0.4), Pmf::poisson(0.8, 1e-6),
                        Pmf::from_mass({{2, 0.5}, {5, 0.5}})}) {
    Pmf img = apply_exact(pi);
    double total = img.mass_at_infinity();
    for (auto& [k, w] : img.mass()) total += w;
    CHECK_THAT(total, WithinAbs(1.0, 1e-12));
    CHECK(img.max_support() <= 2 + 2 * pi.max_support());
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS(apply_exact(Pmf::from_mass({{0, 0.5}}, 0.5)));
  CHECK_THROWS(apply_exact(Pmf::point(13), 12));
  CHECK_THROWS(apply_mc(Pmf::point(0), 0, 1));
}

TEST_CASE("monte carlo agrees with the exact law") {
  Pmf pi = Pmf::bernoulli(0.5);
  auto samples = apply_mc(pi, 20000, 99);
  std::map<std::int64_t, double> hist;
  for (auto s : samples) hist[s] += 1.0 / samples.size();
  Pmf want = apply_exact(pi);
  double tv = 0.0;
  for (std::int64_t k = 0; k <= want.max_support() + 1; ++k)
    tv += std::abs((hist.count(k) ? hist[k] : 0.0) - want.mass_at(k));
  CHECK(tv / 2 < 0.02);
  for (auto s : samples) CHECK((s >= 0 && s <= 4));  // at most 2 + i + j
}

TEST_CASE("images of point masses increase with k") {
  for (std::int64_t k = 0; k <= 5; ++k) {
    Pmf lo = apply_exact(Pmf::point(k));
    Pmf hi = apply_exact(Pmf::point(k + 1));
    CHECK(check_exact(OrderKind::Pgf, lo, hi).dominates());
  }
}

TEST_CASE("monotonicity test on canonical pairs") {
  std::vector<std::pair<Pmf, Pmf>> pairs;
  pairs.emplace_back(Pmf::point(0), Pmf::point(1));
  Pmf pois = Pmf::poisson(0.5);
  pairs.emplace_back(pois, icv_two_point_dominator(pois));
  Pmf y = Pmf::from_mass({{0, 0.2}, {2, 0.5}, {4, 0.3}});
  pairs.emplace_back(thin(y, 0.6), y);
  MonotonicityReport rep = monotonicity_test(pairs);
  CHECK(rep.pairs == 3);
  CHECK(rep.pass());

  // unordered input pairs are rejected up front
  std::vector<std::pair<Pmf, Pmf>> bad{{Pmf::point(2), Pmf::point(1)}};
  CHECK_THROWS(monotonicity_test(bad));
}

TEST_CASE("iteration folds tails and conserves mass") {
  bool folded = false;
  auto seq = iterate(Pmf::point(0), 3, 64, &folded);
  REQUIRE(seq.size() == 3);
  CHECK(seq[0].max_support() <= 2);  // support bound after one step
  for (auto& p : seq) {
    double total = 0.0;
    for (auto& [k, w] : p.mass()) total += w;
    CHECK_THAT(total, WithinAbs(1.0, 1e-12));
  }
  // monotone G-curves along iterates from ordered seeds
  auto lo = iterate(Pmf::point(0), 2);
  auto hi = iterate(Pmf::point(1), 2);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(check_exact(OrderKind::Pgf, lo[i], hi[i]).dominates());
}
