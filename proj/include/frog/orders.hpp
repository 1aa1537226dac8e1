#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "frog/pmf.hpp"
#include "frog/rng.hpp"

namespace frog {

enum class OrderKind { St, Icv, Pgf };

inline std::string order_name(OrderKind k) {
  switch (k) {
    case OrderKind::St:
      return "st";
    case OrderKind::Icv:
      return "icv";
    case OrderKind::Pgf:
      return "pgf";
  }
  return {};
}

/// Result of asking "x dominated by y?". `curve` carries the margin at
/// every test point (test location, lhs-required-minus-rhs), so a
/// verdict can be plotted. Exact checks on grids are grid-certified
/// rather than proven for all t; `grid_certified` records that.
struct OrderVerdict {
  enum class Status { Dominates, Violated, Inconclusive };

  Status status = Status::Inconclusive;
  double witness_point = 0.0;  // where the worst margin occurs
  double margin = 0.0;         // most negative (or smallest) margin seen
  bool grid_certified = false;
  std::string detail;
  std::vector<std::pair<double, double>> curve;

  bool dominates() const { return status == Status::Dominates; }
  bool violated() const { return status == Status::Violated; }
};

inline constexpr double kOrderTol = 1e-9;

namespace detail_orders {

inline OrderVerdict verdict_from_margins(
    std::vector<std::pair<double, double>> curve, double tol,
    bool grid_certified, const std::string& detail) {
  OrderVerdict v;
  v.curve = std::move(curve);
  v.grid_certified = grid_certified;
  v.detail = detail;
  double worst = 0.0;
  double where = 0.0;
  bool first = true;
  for (auto& [x, d] : v.curve)
    if (first || d < worst) {
      worst = d;
      where = x;
      first = false;
    }
  v.margin = worst;
  v.witness_point = where;
  v.status = (worst < -tol) ? OrderVerdict::Status::Violated
                            : OrderVerdict::Status::Dominates;
  return v;
}

}  // namespace detail_orders

/// Exact order check between finite-support pmfs (atoms at infinity
/// handled analytically). Asks whether x is dominated by y.
///   St : survival comparison at every integer point.
///   Icv: E[min(X,k)] <= E[min(Y,k)] for every k, plus the infinity atoms.
///   Pgf: G_X(t) >= G_Y(t) on a uniform grid in (0,1), plus both
///        endpoint limits P[X<inf] >= P[Y<inf] and P[X=0] >= P[Y=0].
inline OrderVerdict check_exact(OrderKind kind, const Pmf& x, const Pmf& y,
                                int t_grid_size = 512,
                                double tol = kOrderTol) {
  std::vector<std::pair<double, double>> curve;
  std::int64_t max_k = std::max(x.max_support(), y.max_support());
  switch (kind) {
    case OrderKind::St: {
      for (std::int64_t t = -1; t <= max_k; ++t)
        curve.emplace_back(static_cast<double>(t),
                           y.survival(t) - x.survival(t));
      return detail_orders::verdict_from_margins(std::move(curve), tol, false,
                                                 "st survival comparison");
    }
    case OrderKind::Icv: {
      for (std::int64_t k = 1; k <= max_k + 1; ++k)
        curve.emplace_back(static_cast<double>(k),
                           y.min_moment(k) - x.min_moment(k));
      curve.emplace_back(-1.0, y.mass_at_infinity() - x.mass_at_infinity());
      return detail_orders::verdict_from_margins(std::move(curve), tol, false,
                                                 "icv min-functional test");
    }
    case OrderKind::Pgf: {
      for (int i = 1; i <= t_grid_size; ++i) {
        double t = static_cast<double>(i) / (t_grid_size + 1);
        curve.emplace_back(t, x.gf(t) - y.gf(t));
      }
      // t -> 1 limit: P[X < inf] >= P[Y < inf].
      curve.emplace_back(1.0, (1.0 - x.mass_at_infinity()) -
                                  (1.0 - y.mass_at_infinity()));
      // t -> 0 limit: P[X = 0] >= P[Y = 0].
      curve.emplace_back(0.0, x.mass_at(0) - y.mass_at(0));
      return detail_orders::verdict_from_margins(std::move(curve), tol, true,
                                                 "pgf grid comparison");
    }
  }
  throw std::logic_error("check_exact: unknown order");
}

/// The p-thinning of a pmf: a mixture of Bin(k, p) over the support.
/// The atom at infinity stays at infinity for p > 0 and collapses to 0
/// for p = 0.
inline Pmf thin(const Pmf& x, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("thin: p in [0,1]");
  if (p == 0.0) return Pmf::point(0);
  std::map<std::int64_t, double> out;
  for (auto& [k, w] : x.mass()) {
    // Binomial(k, p) row, computed by the recurrence.
    double term = std::pow(1.0 - p, static_cast<double>(k));
    if (p == 1.0) term = (k == 0) ? 1.0 : 0.0;
    for (std::int64_t j = 0; j <= k; ++j) {
      if (term > 0.0) out[j] += w * term;
      if (j < k) {
        if (p == 1.0) {
          term = (j + 1 == k) ? 1.0 : 0.0;
        } else {
          term *= (static_cast<double>(k - j) / static_cast<double>(j + 1)) *
                  (p / (1.0 - p));
        }
      }
    }
  }
  return Pmf::from_mass(std::move(out), x.mass_at_infinity());
}

/// Pgf dominance via the thinning characterization: the p-thinning of X
/// must be at least as likely to be zero as the p-thinning of Y, for
/// every p. An independent route to the same order as check_exact(Pgf).
inline OrderVerdict pgf_via_thinning(const Pmf& x, const Pmf& y,
                                     int p_grid_size = 128,
                                     double tol = kOrderTol) {
  std::vector<std::pair<double, double>> curve;
  for (int i = 1; i <= p_grid_size; ++i) {
    double p = static_cast<double>(i) / (p_grid_size + 1);
    curve.emplace_back(p, thin(x, p).mass_at(0) - thin(y, p).mass_at(0));
  }
  return detail_orders::verdict_from_margins(std::move(curve), tol, true,
                                             "pgf via thinning zeros");
}

/// The constant icv dominator: any c >= E X works; we take the least
/// integer.
inline Pmf icv_const_dominator(const Pmf& x) {
  if (x.has_infinity())
    throw std::invalid_argument("icv_const_dominator: infinite mean");
  double m = x.mean();
  return Pmf::point(static_cast<std::int64_t>(std::ceil(m - 1e-15)));
}

/// The two-point icv dominator on {floor(m), floor(m)+1} with mean
/// exactly m.
inline Pmf icv_two_point_dominator(const Pmf& x) {
  if (x.has_infinity())
    throw std::invalid_argument("icv_two_point_dominator: infinite mean");
  double m = x.mean();
  auto k = static_cast<std::int64_t>(std::floor(m));
  double q = m - static_cast<double>(k);
  return Pmf::two_point(k, q);
}

struct ChainReport {
  OrderVerdict st, icv, pgf;
  bool consistent = true;
  std::string detail;
};

/// Checks the implication chain st => icv => pgf on one pair.
inline ChainReport implication_chain_check(const Pmf& x, const Pmf& y,
                                           int t_grid_size = 512) {
  ChainReport r;
  r.st = check_exact(OrderKind::St, x, y, t_grid_size);
  r.icv = check_exact(OrderKind::Icv, x, y, t_grid_size);
  r.pgf = check_exact(OrderKind::Pgf, x, y, t_grid_size);
  if (r.st.dominates() && !r.icv.dominates()) {
    r.consistent = false;
    r.detail = "st holds but icv fails";
  }
  if (r.icv.dominates() && !r.pgf.dominates()) {
    r.consistent = false;
    r.detail = "icv holds but pgf fails";
  }
  return r;
}

// ---------------------------------------------------------------------
// Empirical checking

struct EmpiricalOptions {
  int grid_size = 64;         // pgf t-grid
  int bootstrap_reps = 2000;  // percentile bootstrap
  double level = 0.95;        // one-sided confidence level
  std::uint64_t seed = 0x1234abcd;
};

namespace detail_orders {

struct Histogram {
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;

  static Histogram build(const std::vector<std::int64_t>& samples) {
    Histogram h;
    std::map<std::int64_t, std::int64_t> m;
    for (auto v : samples) {
      if (v < 0) throw std::invalid_argument("empirical: negative sample");
      ++m[v];
    }
    for (auto& [v, c] : m) {
      h.values.push_back(v);
      h.counts.push_back(c);
    }
    h.n = static_cast<std::int64_t>(samples.size());
    return h;
  }
};

// Test-functional matrix: row v, column g -> phi_g(value_v), where the
// dominance requirement is sum_v w_v phi_g(v) with appropriate sign.
inline std::vector<std::vector<double>> functional_matrix(
    OrderKind kind, const Histogram& h, const std::vector<double>& grid) {
  std::vector<std::vector<double>> f(h.values.size(),
                                     std::vector<double>(grid.size()));
  for (std::size_t vi = 0; vi < h.values.size(); ++vi) {
    double v = static_cast<double>(h.values[vi]);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      switch (kind) {
        case OrderKind::St:
          f[vi][gi] = v > grid[gi] ? 1.0 : 0.0;
          break;
        case OrderKind::Icv:
          f[vi][gi] = std::min(v, grid[gi]);
          break;
        case OrderKind::Pgf:
          f[vi][gi] = std::pow(grid[gi], v);
          break;
      }
    }
  }
  return f;
}

inline std::vector<double> weighted_curve(
    const std::vector<std::vector<double>>& f,
    const std::vector<std::int64_t>& counts, std::int64_t n,
    std::size_t n_grid) {
  std::vector<double> out(n_grid, 0.0);
  for (std::size_t vi = 0; vi < f.size(); ++vi) {
    double w = static_cast<double>(counts[vi]) / static_cast<double>(n);
    if (w == 0.0) continue;
    for (std::size_t gi = 0; gi < n_grid; ++gi) out[gi] += w * f[vi][gi];
  }
  return out;
}

// Multinomial bootstrap resample of a histogram's counts.
inline void resample(const Histogram& h, std::mt19937_64& gen,
                     std::vector<std::int64_t>& out) {
  out.assign(h.values.size(), 0);
  std::int64_t remaining = h.n;
  double mass_left = 1.0;
  for (std::size_t vi = 0; vi + 1 < h.values.size() && remaining > 0; ++vi) {
    double p = (static_cast<double>(h.counts[vi]) /
                static_cast<double>(h.n)) /
               mass_left;
    p = std::clamp(p, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> bd(remaining, p);
    std::int64_t c = bd(gen);
    out[vi] = c;
    remaining -= c;
    mass_left -= static_cast<double>(h.counts[vi]) / static_cast<double>(h.n);
  }
  if (!h.values.empty()) out.back() += remaining;
}

}  // namespace detail_orders

/// Plug-in empirical order check with percentile-bootstrap bands.
/// Dominates: the one-sided lower band is nonnegative everywhere.
/// Violated: the required inequality is reversed beyond the band
/// somewhere. Otherwise Inconclusive, carrying the worst margin.
inline OrderVerdict check_empirical(OrderKind kind,
                                    const std::vector<std::int64_t>& xs,
                                    const std::vector<std::int64_t>& ys,
                                    const EmpiricalOptions& opt = {}) {
  if (xs.size() < 100 || ys.size() < 100)
    throw std::invalid_argument("check_empirical: need >= 100 samples");
  using detail_orders::Histogram;
  Histogram hx = Histogram::build(xs);
  Histogram hy = Histogram::build(ys);

  std::vector<double> grid;
  std::int64_t max_v = std::max(hx.values.back(), hy.values.back());
  switch (kind) {
    case OrderKind::St:
      for (std::int64_t t = -1; t <= max_v; ++t)
        grid.push_back(static_cast<double>(t));
      break;
    case OrderKind::Icv:
      for (std::int64_t k = 1; k <= max_v + 1; ++k)
        grid.push_back(static_cast<double>(k));
      break;
    case OrderKind::Pgf:
      for (int i = 1; i <= opt.grid_size; ++i)
        grid.push_back(static_cast<double>(i) / (opt.grid_size + 1));
      break;
  }

  auto fx = detail_orders::functional_matrix(kind, hx, grid);
  auto fy = detail_orders::functional_matrix(kind, hy, grid);

  // Required inequality rewritten as D(g) >= 0.
  double sign = (kind == OrderKind::Pgf) ? 1.0 : -1.0;
  auto diff = [&](const std::vector<double>& cx,
                  const std::vector<double>& cy, std::size_t gi) {
    return sign * (cx[gi] - cy[gi]);
  };

  auto cx0 = detail_orders::weighted_curve(fx, hx.counts, hx.n, grid.size());
  auto cy0 = detail_orders::weighted_curve(fy, hy.counts, hy.n, grid.size());

  std::mt19937_64 gen(opt.seed);
  std::vector<std::vector<double>> boot(grid.size());
  for (auto& b : boot) b.reserve(opt.bootstrap_reps);
  std::vector<std::int64_t> rcx, rcy;
  for (int rep = 0; rep < opt.bootstrap_reps; ++rep) {
    detail_orders::resample(hx, gen, rcx);
    detail_orders::resample(hy, gen, rcy);
    auto bx = detail_orders::weighted_curve(fx, rcx, hx.n, grid.size());
    auto by = detail_orders::weighted_curve(fy, rcy, hy.n, grid.size());
    for (std::size_t gi = 0; gi < grid.size(); ++gi)
      boot[gi].push_back(diff(bx, by, gi));
  }

  OrderVerdict v;
  v.detail = order_name(kind) + " empirical bootstrap";
  bool all_lower_ok = true;
  bool any_upper_bad = false;
  double worst_lower = 0.0;
  double worst_point = 0.0;
  bool first = true;
  auto lo_idx = static_cast<std::size_t>(
      std::floor((1.0 - opt.level) * (opt.bootstrap_reps - 1)));
  auto hi_idx = static_cast<std::size_t>(
      std::ceil(opt.level * (opt.bootstrap_reps - 1)));
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    auto& b = boot[gi];
    std::sort(b.begin(), b.end());
    double lo = b[lo_idx];
    double hi = b[hi_idx];
    v.curve.emplace_back(grid[gi], diff(cx0, cy0, gi));
    if (lo < -kOrderTol) all_lower_ok = false;
    if (hi < -kOrderTol) any_upper_bad = true;
    if (first || lo < worst_lower) {
      worst_lower = lo;
      worst_point = grid[gi];
      first = false;
    }
  }
  v.margin = worst_lower;
  v.witness_point = worst_point;
  if (any_upper_bad)
    v.status = OrderVerdict::Status::Violated;
  else if (all_lower_ok)
    v.status = OrderVerdict::Status::Dominates;
  else
    v.status = OrderVerdict::Status::Inconclusive;
  return v;
}

// ---------------------------------------------------------------------
// Random constructions used by the verification suites.

/// Random finite-support pmf with support in [0, max_support].
inline Pmf random_pmf(std::mt19937_64& gen, std::int64_t max_support = 6) {
  std::uniform_int_distribution<std::int64_t> nd(1, max_support + 1);
  std::exponential_distribution<double> ed(1.0);
  std::int64_t n_atoms = nd(gen);
  std::vector<std::int64_t> support(max_support + 1);
  for (std::int64_t k = 0; k <= max_support; ++k) support[k] = k;
  std::shuffle(support.begin(), support.end(), gen);
  std::map<std::int64_t, double> m;
  double total = 0.0;
  for (std::int64_t i = 0; i < n_atoms; ++i) {
    double w = ed(gen) + 1e-3;
    m[support[i]] = w;
    total += w;
  }
  for (auto& [k, w] : m) w /= total;
  return Pmf::from_mass(std::move(m));
}

/// A pair (x, y) with x dominated by y in the standard order, built by
/// shifting part of x's mass upward (an explicit coupling).
inline std::pair<Pmf, Pmf> random_st_pair(std::mt19937_64& gen,
                                          std::int64_t max_support = 6) {
  Pmf x = random_pmf(gen, max_support);
  std::uniform_int_distribution<std::int64_t> sd(0, 3);
  std::uniform_real_distribution<double> fd(0.0, 1.0);
  std::map<std::int64_t, double> m;
  for (auto& [k, w] : x.mass()) {
    double frac = fd(gen);
    std::int64_t shift = sd(gen);
    m[k + shift] += w * frac;
    m[k] += w * (1.0 - frac);
  }
  for (auto it = m.begin(); it != m.end();)
    it = (it->second == 0.0) ? m.erase(it) : std::next(it);
  return {std::move(x), Pmf::from_mass(std::move(m))};
}

/// Random bounded increasing concave function on {0..K}, extended
/// constantly beyond K. Used to cross-check the icv min-functional test.
inline std::vector<double> random_icv_function(std::mt19937_64& gen,
                                               std::int64_t K) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  std::vector<double> incr(K);
  for (auto& d : incr) d = ud(gen);
  std::sort(incr.rbegin(), incr.rend());  // decreasing increments
  std::vector<double> phi(K + 1);
  phi[0] = ud(gen);
  for (std::int64_t k = 0; k < K; ++k) phi[k + 1] = phi[k] + incr[k];
  return phi;
}

inline double expect_over(const Pmf& x, const std::vector<double>& phi) {
  // phi is constant beyond its last entry; the infinity atom takes the
  // limit value.
  double s = x.mass_at_infinity() * phi.back();
  for (auto& [k, w] : x.mass())
    s += w * phi[std::min<std::int64_t>(k, phi.size() - 1)];
  return s;
}

}  // namespace frog
