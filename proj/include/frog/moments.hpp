#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace frog {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Finite sequence f(0), ..., f(K) of exact rationals.
using RationalSeq = std::vector<Rational>;

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  BigInt num(s.substr(0, slash));
  BigInt den(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  return Rational(num, den);
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

/// D^n f(k) = sum_i (-1)^{n-i} C(n,i) f(k+i), exactly.
inline Rational iterated_difference(const RationalSeq& f, int n, int k) {
  if (n < 0 || k < 0 ||
      static_cast<std::size_t>(k) + static_cast<std::size_t>(n) >= f.size())
    throw std::out_of_range("iterated_difference: k + n out of range");
  Rational acc = 0;
  for (int i = 0; i <= n; ++i) {
    Rational term = Rational(binomial(n, i)) * f[k + i];
    if ((n - i) % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

struct HausdorffWitness {
  int n = 0;
  int k = 0;
  Rational value;
};

/// Complete monotonicity check: (-1)^n D^n f(k) >= 0 for all n <= n_max
/// and k <= K - n. Sequences passing for all n are exactly the Hausdorff
/// moment sequences.
inline std::optional<HausdorffWitness> hausdorff_check(const RationalSeq& f,
                                                       int n_max) {
  if (f.empty()) throw std::invalid_argument("hausdorff_check: empty");
  if (n_max >= static_cast<int>(f.size()))
    throw std::out_of_range("hausdorff_check: n_max exceeds sequence length");
  int K = static_cast<int>(f.size()) - 1;
  for (int n = 0; n <= n_max; ++n) {
    for (int k = 0; k + n <= K; ++k) {
      Rational d = iterated_difference(f, n, k);
      Rational signed_d = (n % 2 == 0) ? d : Rational(-d);
      if (signed_d < 0) return HausdorffWitness{n, k, signed_d};
    }
  }
  return std::nullopt;
}

/// Multilinear polynomial in n variables; coefficient of the monomial
/// prod_{i in S} x_i is stored at the bitmask of S.
struct MultilinearPoly {
  int n = 0;
  std::vector<Rational> coef;  // size 2^n

  Rational evaluate(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != n)
      throw std::invalid_argument("evaluate: dimension mismatch");
    Rational acc = 0;
    for (std::size_t mask = 0; mask < coef.size(); ++mask) {
      if (coef[mask] == 0) continue;
      Rational term = coef[mask];
      for (int i = 0; i < n; ++i)
        if (mask & (std::size_t{1} << i)) term *= x[i];
      acc += term;
    }
    return acc;
  }

  MultilinearPoly operator+(const MultilinearPoly& o) const {
    if (n != o.n) throw std::invalid_argument("poly sum: dimension mismatch");
    MultilinearPoly r = *this;
    for (std::size_t m = 0; m < coef.size(); ++m) r.coef[m] += o.coef[m];
    return r;
  }
};

/// The unique multilinear interpolant of g on the hypercube vertices.
/// `g` is indexed by vertex bitmask and must have 2^n entries.
inline MultilinearPoly interpolate(const std::vector<Rational>& g, int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("interpolate: n in [0,20]");
  if (g.size() != (std::size_t{1} << n))
    throw std::invalid_argument("interpolate: need all 2^n vertex values");
  // Moebius transform: coef[S] = sum_{T subseteq S} (-1)^{|S|-|T|} g(T).
  std::vector<Rational> c = g;
  for (int i = 0; i < n; ++i)
    for (std::size_t mask = 0; mask < c.size(); ++mask)
      if (mask & (std::size_t{1} << i)) c[mask] -= c[mask ^ (std::size_t{1} << i)];
  return MultilinearPoly{n, std::move(c)};
}

/// Symbolic mixed partial with respect to the variables in B: kills
/// every monomial missing B and drops B's variables from the rest.
inline MultilinearPoly mixed_partial(const MultilinearPoly& p,
                                     std::size_t b_mask) {
  MultilinearPoly out{p.n, std::vector<Rational>(p.coef.size(), Rational(0))};
  for (std::size_t mask = 0; mask < p.coef.size(); ++mask)
    if ((mask & b_mask) == b_mask) out.coef[mask ^ b_mask] += p.coef[mask];
  return out;
}

/// Alternating subset sum Delta_B g at the {0,1}^n point x.
inline Rational discrete_mixed_difference(const std::vector<Rational>& g,
                                          int n, std::size_t b_mask,
                                          std::size_t x_mask) {
  Rational acc = 0;
  std::size_t base = x_mask & ~b_mask;
  int b_size = 0;
  for (int i = 0; i < n; ++i)
    if (b_mask & (std::size_t{1} << i)) ++b_size;
  // Enumerate T subseteq B.
  std::size_t t = 0;
  while (true) {
    int t_size = 0;
    for (int i = 0; i < n; ++i)
      if (t & (std::size_t{1} << i)) ++t_size;
    Rational term = g[base | t];
    if ((b_size - t_size) % 2 == 0)
      acc += term;
    else
      acc -= term;
    if (t == b_mask) break;
    t = (t - b_mask) & b_mask;  // next subset of b_mask
  }
  return acc;
}

/// Exact check of the derivative identity linking the interpolant's
/// mixed partials to discrete differences of g with the B-coordinates
/// zeroed.
inline bool verify_derivative_identity(const std::vector<Rational>& g, int n,
                                       std::size_t b_mask,
                                       std::size_t x_mask) {
  MultilinearPoly p = interpolate(g, n);
  MultilinearPoly dp = mixed_partial(p, b_mask);
  std::vector<Rational> x(n);
  std::size_t zeroed = x_mask & ~b_mask;
  for (int i = 0; i < n; ++i)
    x[i] = (zeroed & (std::size_t{1} << i)) ? 1 : 0;
  Rational lhs = dp.evaluate(x);
  Rational rhs = discrete_mixed_difference(g, n, b_mask, x_mask);
  return lhs == rhs;
}

/// Regression check of the vertex-extremum property: every value on a
/// uniform rational grid in [0,1]^n lies between the vertex minimum and
/// maximum. Exact comparisons throughout.
inline bool vertex_extremum_check(const MultilinearPoly& p,
                                  int grid_per_axis) {
  if (p.n > 8) throw std::invalid_argument("vertex_extremum_check: n <= 8");
  if (grid_per_axis < 2)
    throw std::invalid_argument("vertex_extremum_check: grid >= 2");
  Rational vmin, vmax;
  bool first = true;
  std::vector<Rational> x(p.n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << p.n); ++mask) {
    for (int i = 0; i < p.n; ++i)
      x[i] = (mask & (std::size_t{1} << i)) ? 1 : 0;
    Rational v = p.evaluate(x);
    if (first || v < vmin) vmin = v;
    if (first || v > vmax) vmax = v;
    first = false;
  }

  std::vector<int> idx(p.n, 0);
  while (true) {
    for (int i = 0; i < p.n; ++i)
      x[i] = Rational(idx[i], grid_per_axis - 1);
    Rational v = p.evaluate(x);
    if (v < vmin || v > vmax) return false;
    int axis = 0;
    while (axis < p.n && ++idx[axis] == grid_per_axis) {
      idx[axis] = 0;
      ++axis;
    }
    if (axis == p.n) break;
  }
  return true;
}

}  // namespace frog
