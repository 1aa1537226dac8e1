#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace frog {

/// Finite-support probability mass function on the nonnegative integers,
/// with an optional atom at infinity.
class Pmf {
 public:
  Pmf() = default;

  static Pmf from_mass(std::map<std::int64_t, double> mass,
                       double mass_at_infinity = 0.0) {
    Pmf p;
    p.mass_ = std::move(mass);
    p.inf_ = mass_at_infinity;
    p.validate();
    return p;
  }

  static Pmf point(std::int64_t k) {
    if (k < 0) throw std::invalid_argument("point: k < 0");
    return from_mass({{k, 1.0}});
  }

  static Pmf bernoulli(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("bernoulli: p");
    std::map<std::int64_t, double> m;
    if (p < 1.0) m[0] = 1.0 - p;
    if (p > 0.0) m[1] = p;
    return from_mass(std::move(m));
  }

  // Mass on {k, k+1} with P[k+1] = q, so the mean is exactly k + q.
  static Pmf two_point(std::int64_t k, double q) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("two_point: q");
    std::map<std::int64_t, double> m;
    if (q < 1.0) m[k] = 1.0 - q;
    if (q > 0.0) m[k + 1] = q;
    return from_mass(std::move(m));
  }

  // Poisson truncated at the smallest N with tail mass below tail_eps,
  // then renormalized.
  static Pmf poisson(double mu, double tail_eps = 1e-12) {
    if (mu < 0.0) throw std::invalid_argument("poisson: mu < 0");
    if (tail_eps <= 0.0) throw std::invalid_argument("poisson: tail_eps");
    std::map<std::int64_t, double> m;
    double p = std::exp(-mu);
    double cum = p;
    std::int64_t k = 0;
    m[0] = p;
    while (1.0 - cum >= tail_eps) {
      ++k;
      p *= mu / static_cast<double>(k);
      m[k] = p;
      cum += p;
      if (k > 4096) throw std::runtime_error("poisson: truncation runaway");
    }
    for (auto& [kk, v] : m) v /= cum;
    return from_mass(std::move(m));
  }

  const std::map<std::int64_t, double>& mass() const { return mass_; }
  double mass_at(std::int64_t k) const {
    auto it = mass_.find(k);
    return it == mass_.end() ? 0.0 : it->second;
  }
  double mass_at_infinity() const { return inf_; }
  bool has_infinity() const { return inf_ > 0.0; }

  std::int64_t max_support() const {
    return mass_.empty() ? 0 : mass_.rbegin()->first;
  }

  double mean() const {
    if (has_infinity())
      throw std::domain_error("mean: pmf has an atom at infinity");
    double s = 0.0;
    for (auto& [k, p] : mass_) s += static_cast<double>(k) * p;
    return s;
  }

  // Probability generating function G(t) = sum p(k) t^k; the atom at
  // infinity contributes 0 for t in (0,1).
  double gf(double t) const {
    double s = 0.0;
    for (auto& [k, p] : mass_) s += p * std::pow(t, static_cast<double>(k));
    return s;
  }

  // Survival P[X > t] for integer t; the atom at infinity always counts.
  double survival(std::int64_t t) const {
    double s = inf_;
    for (auto it = mass_.upper_bound(t); it != mass_.end(); ++it)
      s += it->second;
    return s;
  }

  // E[min(X, k)]; min(inf, k) = k.
  double min_moment(std::int64_t k) const {
    double s = inf_ * static_cast<double>(k);
    for (auto& [x, p] : mass_)
      s += p * static_cast<double>(x < k ? x : k);
    return s;
  }

  // Deterministic CDF inversion; u in [0,1). Throws if the atom at
  // infinity is positive: infinite counts are not samplable.
  std::int64_t sample(double u) const {
    if (has_infinity())
      throw std::domain_error("sample: pmf has an atom at infinity");
    double cum = 0.0;
    for (auto& [k, p] : mass_) {
      cum += p;
      if (u < cum) return k;
    }
    return max_support();
  }

  void validate() const {
    double total = inf_;
    if (inf_ < 0.0 || inf_ > 1.0)
      throw std::invalid_argument("pmf: mass_at_infinity out of range");
    for (auto& [k, p] : mass_) {
      if (k < 0) throw std::invalid_argument("pmf: negative support point");
      if (p < 0.0) throw std::invalid_argument("pmf: negative mass");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("pmf: total mass != 1");
  }

 private:
  std::map<std::int64_t, double> mass_;
  double inf_ = 0.0;
};

}  // namespace frog
