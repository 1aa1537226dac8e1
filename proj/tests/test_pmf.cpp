#include <catch_amalgamated.hpp>

#include <cmath>

#include "frog/pmf.hpp"

using namespace frog;
using Catch::Matchers::WithinAbs;

TEST_CASE("basic constructors") {
  CHECK(Pmf::point(1).mass_at(1) == 1.0);
  CHECK(Pmf::bernoulli(0.5).mass_at(0) == 0.5);
  CHECK(Pmf::bernoulli(0.5).mass_at(1) == 0.5);
  CHECK(Pmf::bernoulli(0.0).mass_at(0) == 1.0);
  CHECK(Pmf::two_point(2, 0.25).mean() == Catch::Approx(2.25));
  CHECK_THROWS(Pmf::point(-1));
  CHECK_THROWS(Pmf::from_mass({{0, 0.5}}));             // mass deficit
  CHECK_THROWS(Pmf::from_mass({{0, 0.5}, {1, 0.6}}));   // mass excess
  CHECK_THROWS(Pmf::from_mass({{0, 1.5}, {1, -0.5}}));  // negative mass
}

TEST_CASE("truncated poisson") {
  Pmf p = Pmf::poisson(1.0, 1e-12);
  // Truncation renormalizes, so mass(0) = e^{-1}/Z with Z within 1e-12 of 1.
  CHECK_THAT(p.mass_at(0), WithinAbs(std::exp(-1.0), 1e-12));
  CHECK_THAT(p.mean(), WithinAbs(1.0, 1e-10));
  double total = 0.0;
  for (auto& [k, w] : p.mass()) total += w;
  CHECK_THAT(total, WithinAbs(1.0, 1e-12));
}

TEST_CASE("generating function, survival, min moments") {
  Pmf p = Pmf::from_mass({{0, 0.5}, {2, 0.5}});
  CHECK_THAT(p.gf(0.5), WithinAbs(0.5 + 0.5 * 0.25, 1e-15));
  CHECK(p.survival(-1) == 1.0);
  CHECK(p.survival(0) == 0.5);
  CHECK(p.survival(1) == 0.5);
  CHECK(p.survival(2) == 0.0);
  CHECK_THAT(p.min_moment(1), WithinAbs(0.5, 1e-15));
  CHECK_THAT(p.min_moment(2), WithinAbs(1.0, 1e-15));
  CHECK_THAT(p.min_moment(5), WithinAbs(p.mean(), 1e-15));
}

TEST_CASE("atom at infinity") {
  Pmf p = Pmf::from_mass({{0, 0.75}}, 0.25);
  CHECK(p.has_infinity());
  CHECK(p.survival(100) == 0.25);
  CHECK_THAT(p.min_moment(4), WithinAbs(1.0, 1e-15));  // min(inf, 4) = 4
  CHECK_THAT(p.gf(0.5), WithinAbs(0.75, 1e-15));       // t^inf = 0
  CHECK_THROWS(p.mean());
  CHECK_THROWS(p.sample(0.5));
}

TEST_CASE("sampling inverts the cdf") {
  Pmf p = Pmf::from_mass({{1, 0.25}, {3, 0.75}});
  CHECK(p.sample(0.0) == 1);
  CHECK(p.sample(0.24) == 1);
  CHECK(p.sample(0.26) == 3);
  CHECK(p.sample(0.999) == 3);
}
