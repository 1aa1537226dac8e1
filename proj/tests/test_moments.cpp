#include <catch_amalgamated.hpp>

#include <random>

#include "frog/moments.hpp"

using namespace frog;

namespace {

RationalSeq geometric_seq(const Rational& c, int K) {
  RationalSeq f{Rational(1)};
  for (int k = 1; k <= K; ++k) f.push_back(f.back() * c);
  return f;
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/10") == Rational(3, 10));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational("4/6") == Rational(2, 3));
  CHECK_THROWS(parse_rational("1/0"));
}

TEST_CASE("iterated differences on simple sequences") {
  RationalSeq constant(8, Rational(5));
  for (int n = 1; n <= 4; ++n)
    CHECK(iterated_difference(constant, n, 0) == 0);

  RationalSeq linear;
  for (int k = 0; k <= 6; ++k) linear.push_back(Rational(k));
  CHECK(iterated_difference(linear, 1, 2) == 1);
  CHECK(iterated_difference(linear, 2, 0) == 0);

  // geometric c^k: (-1)^n D^n f(k) = c^k (1-c)^n, exactly
  Rational c(3, 10);
  RationalSeq geo = geometric_seq(c, 12);
  for (int n = 0; n <= 5; ++n)
    for (int k = 0; k + n <= 12; ++k) {
      Rational d = iterated_difference(geo, n, k);
      Rational want = geo[k];
      for (int i = 0; i < n; ++i) want *= 1 - c;
      CHECK(((n % 2 == 0) ? d : Rational(-d)) == want);
    }

  CHECK_THROWS(iterated_difference(geo, 5, 9));  // k + n past the end
}

TEST_CASE("difference operator is linear") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> num(-9, 9);
  for (int rep = 0; rep < 20; ++rep) {
    RationalSeq f, g, sum;
    for (int k = 0; k <= 8; ++k) {
      f.push_back(Rational(num(gen), 4));
      g.push_back(Rational(num(gen), 3));
      sum.push_back(f.back() + g.back());
    }
    for (int n = 0; n <= 4; ++n)
      CHECK(iterated_difference(sum, n, 1) ==
            iterated_difference(f, n, 1) + iterated_difference(g, n, 1));
  }
}

TEST_CASE("moment sequences pass the complete monotonicity check") {
  CHECK_FALSE(hausdorff_check(geometric_seq(Rational(3, 10), 20), 10));
  CHECK_FALSE(hausdorff_check(geometric_seq(Rational(1), 20), 10));

  // mixture: f(k) = (0.3^k + 0.9^k) / 2
  RationalSeq a = geometric_seq(Rational(3, 10), 20);
  RationalSeq b = geometric_seq(Rational(9, 10), 20);
  RationalSeq mix;
  for (int k = 0; k <= 20; ++k) mix.push_back((a[k] + b[k]) / 2);
  CHECK_FALSE(hausdorff_check(mix, 10));
}

TEST_CASE("f(k) = k fails with the expected witness") {
  RationalSeq f{Rational(0), Rational(1), Rational(2)};
  auto w = hausdorff_check(f, 1);
  REQUIRE(w);
  CHECK(w->n == 1);
  CHECK(w->k == 0);
  CHECK(w->value == -1);
}

TEST_CASE("hausdorff_check input validation") {
  CHECK_THROWS(hausdorff_check({}, 0));
  CHECK_THROWS(hausdorff_check({Rational(1)}, 1));
}

TEST_CASE("interpolation recovers xor on two variables") {
  // g(00)=0, g(10)=1, g(01)=1, g(11)=0 -> x + y - 2xy
  std::vector<Rational> g{0, 1, 1, 0};
  MultilinearPoly p = interpolate(g, 2);
  CHECK(p.coef[0] == 0);
  CHECK(p.coef[1] == 1);
  CHECK(p.coef[2] == 1);
  CHECK(p.coef[3] == -2);
  // round trip through every vertex
  for (std::size_t mask = 0; mask < 4; ++mask) {
    std::vector<Rational> x{Rational(mask & 1 ? 1 : 0),
                            Rational(mask & 2 ? 1 : 0)};
    CHECK(p.evaluate(x) == g[mask]);
  }
  CHECK(p.evaluate({Rational(1, 2), Rational(1, 2)}) == Rational(1, 2));
  CHECK_THROWS(p.evaluate({Rational(1)}));
  CHECK_THROWS(interpolate({Rational(0)}, 2));
}

TEST_CASE("interpolation is linear in the vertex values") {
  std::mt19937_64 gen(9);
  std::uniform_int_distribution<int> num(-5, 5);
  std::vector<Rational> g1(8), g2(8), gs(8);
  for (int i = 0; i < 8; ++i) {
    g1[i] = Rational(num(gen), 2);
    g2[i] = Rational(num(gen), 3);
    gs[i] = g1[i] + g2[i];
  }
  MultilinearPoly ps = interpolate(gs, 3);
  MultilinearPoly sum = interpolate(g1, 3) + interpolate(g2, 3);
  CHECK(ps.coef == sum.coef);
}

TEST_CASE("mixed partials against discrete differences") {
  std::vector<Rational> g{0, 1, 1, 0};  // xor again
  MultilinearPoly p = interpolate(g, 2);

  // d^2/dxdy (x + y - 2xy) = -2, matching the alternating sum over {x,y}
  MultilinearPoly dp = mixed_partial(p, 0b11);
  CHECK(dp.evaluate({Rational(0), Rational(0)}) == -2);
  CHECK(discrete_mixed_difference(g, 2, 0b11, 0b11) == -2);

  // empty B is the identity
  MultilinearPoly same = mixed_partial(p, 0);
  CHECK(same.coef == p.coef);
  CHECK(discrete_mixed_difference(g, 2, 0, 0b01) == g[0b01]);

  CHECK(verify_derivative_identity(g, 2, 0b11, 0b11));
  CHECK(verify_derivative_identity(g, 2, 0b01, 0b10));
}

TEST_CASE("derivative identity holds for random vertex data") {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<int> num(-7, 7);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int rep = 0; rep < 100; ++rep) {
    int n = dim(gen);
    std::vector<Rational> g(std::size_t{1} << n);
    for (auto& v : g) v = Rational(num(gen), 2);
    std::uniform_int_distribution<std::size_t> mask(
        0, (std::size_t{1} << n) - 1);
    CHECK(verify_derivative_identity(g, n, mask(gen), mask(gen)));
  }
}

TEST_CASE("vertex extremum property on the cube") {
  std::vector<Rational> g{0, 1, 1, 0};
  MultilinearPoly p = interpolate(g, 2);
  CHECK(vertex_extremum_check(p, 11));

  std::mt19937_64 gen(123);
  std::uniform_int_distribution<int> num(-6, 6);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Rational> h(8);
    for (auto& v : h) v = Rational(num(gen), 3);
    CHECK(vertex_extremum_check(interpolate(h, 3), 7));
  }

  // a genuinely quadratic coefficient pattern still can't escape the
  // vertex range -- but a non-interpolant poly can, and is caught
  MultilinearPoly bump{1, {Rational(0), Rational(0)}};
  CHECK(vertex_extremum_check(bump, 5));
  CHECK_THROWS(vertex_extremum_check(bump, 1));
}
