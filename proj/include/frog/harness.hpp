#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "frog/engine.hpp"
#include "frog/io.hpp"
#include "frog/moments.hpp"
#include "frog/operator_a.hpp"
#include "frog/orders.hpp"
#include "frog/statistics.hpp"

namespace frog::harness {

using nlohmann::json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapped = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------
// Experiment configuration: flat `key = value` text. '#' lines are
// comments. One file fully determines an experiment; the digest is a
// function of the sorted key/value set only.

struct ExperimentConfig {
  std::map<std::string, std::string> kv;

  static std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

  static ExperimentConfig parse(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      std::size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw UsageError("config: expected `key = value`: " + line);
      std::string key = trim(t.substr(0, eq));
      std::string val = trim(t.substr(eq + 1));
      if (key.empty()) throw UsageError("config: empty key: " + line);
      cfg.kv[key] = val;
    }
    return cfg;
  }

  static ExperimentConfig parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("config: cannot open " + path);
    return parse(f);
  }

  bool has(const std::string& key) const { return kv.count(key) > 0; }

  std::string get(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) throw UsageError("config: missing key `" + key + "`");
    return it->second;
  }

  std::string get_or(const std::string& key, const std::string& def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : it->second;
  }

  std::int64_t get_int(const std::string& key, std::int64_t def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : std::stoll(it->second);
  }

  double get_double(const std::string& key, double def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : std::stod(it->second);
  }

  std::vector<std::string> get_list(const std::string& key) const {
    return io::tokenize(get(key));
  }

  void set(const std::string& key, const std::string& val) { kv[key] = val; }

  // Stable under field reordering: the map iterates in key order.
  std::string digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const std::string& s) {
      for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
      }
      h ^= 0x1f;
      h *= 0x100000001b3ULL;
    };
    for (auto& [k, v] : kv) {
      feed(k);
      feed(v);
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
  }
};

// ---------------------------------------------------------------------
// Typed views over config values.

inline ConfigRule parse_rule(const std::string& text) {
  auto toks = io::tokenize(text);
  if (toks.empty()) throw UsageError("rule: empty");
  const std::string& kind = toks[0];
  if (kind == "deterministic") {
    if (toks.size() != 2) throw UsageError("rule: deterministic K");
    return ConfigRule::deterministic(std::stoll(toks[1]));
  }
  if (kind == "iid") {
    std::size_t brace = text.find('{');
    if (brace == std::string::npos)
      throw UsageError("rule: iid {k: p, ...}");
    return ConfigRule::iid(io::parse_pmf_literal(text.substr(brace)));
  }
  if (kind == "poisson") {
    if (toks.size() < 2 || toks.size() > 3)
      throw UsageError("rule: poisson MU [TAIL_EPS]");
    double eps = toks.size() == 3 ? std::stod(toks[2]) : 1e-12;
    return ConfigRule::iid(Pmf::poisson(std::stod(toks[1]), eps));
  }
  if (kind == "bernoulli_alpha") {
    if (toks.size() != 2) throw UsageError("rule: bernoulli_alpha ALPHA");
    return ConfigRule::site_dependent_bernoulli(std::stod(toks[1]));
  }
  throw UsageError("rule: unknown kind `" + kind + "`");
}

inline WalkerKind parse_walker(const std::string& text) {
  auto toks = io::tokenize(text);
  if (toks.empty()) throw UsageError("walker: empty");
  if (toks[0] == "srw") return WalkerKind::srw();
  if (toks[0] == "nonbacktracking") return WalkerKind::nonbacktracking();
  if (toks[0] == "biased_z") {
    if (toks.size() != 2) throw UsageError("walker: biased_z P_RIGHT");
    return WalkerKind::biased_z(std::stod(toks[1]));
  }
  if (toks[0] == "srw_with_death") {
    if (toks.size() != 2) throw UsageError("walker: srw_with_death SURVIVAL");
    return WalkerKind::srw_with_death(std::stod(toks[1]));
  }
  throw UsageError("walker: unknown kind `" + toks[0] + "`");
}

inline GraphKind parse_graph(const std::string& text) {
  auto toks = io::tokenize(text);
  if (toks.empty()) throw UsageError("graph: empty");
  if (toks[0] == "lattice") {
    if (toks.size() != 2) throw UsageError("graph: lattice D");
    return GraphKind::lattice(std::stoi(toks[1]));
  }
  if (toks[0] == "dary_tree") {
    if (toks.size() != 3) throw UsageError("graph: dary_tree D DEPTH_CAP");
    return GraphKind::dary_tree(std::stoi(toks[1]), std::stoi(toks[2]));
  }
  if (toks[0] == "dregular_tree") {
    if (toks.size() != 3)
      throw UsageError("graph: dregular_tree D DEPTH_CAP");
    return GraphKind::dregular_tree(std::stoi(toks[1]), std::stoi(toks[2]));
  }
  if (toks[0] == "explicit") {
    if (toks.size() != 2) throw UsageError("graph: explicit FILE");
    return GraphKind::explicit_graph(io::load_adjacency_file(toks[1]));
  }
  throw UsageError("graph: unknown kind `" + toks[0] + "`");
}

inline OrderKind parse_order(const std::string& text) {
  if (text == "st") return OrderKind::St;
  if (text == "icv") return OrderKind::Icv;
  if (text == "pgf") return OrderKind::Pgf;
  throw UsageError("order: one of st, icv, pgf");
}

/// Fields shared by the experiment commands, resolved from the raw text.
struct Resolved {
  GraphKind graph = GraphKind::lattice(1);
  std::vector<std::pair<std::string, ConfigRule>> rules;  // ("a", ...), ("b", ...)
  WalkerKind walker = WalkerKind::srw();
  std::vector<std::uint32_t> horizons;
  int replicas = 1;
  std::uint64_t seed = 0;
  OrderKind order = OrderKind::Pgf;
  EmpiricalOptions emp;
  std::uint64_t max_frogs = 2'000'000;
};

inline Resolved resolve(const ExperimentConfig& cfg, int n_rules_required) {
  Resolved r;
  r.graph = parse_graph(cfg.get("graph"));
  if (cfg.has("rule.a")) r.rules.emplace_back("a", parse_rule(cfg.get("rule.a")));
  if (cfg.has("rule.b")) r.rules.emplace_back("b", parse_rule(cfg.get("rule.b")));
  if (static_cast<int>(r.rules.size()) < n_rules_required)
    throw UsageError("config: experiment needs " +
                     std::to_string(n_rules_required) + " rule(s)");
  r.walker = parse_walker(cfg.get_or("walker", "srw"));
  for (auto& t : cfg.get_list("horizons"))
    r.horizons.push_back(static_cast<std::uint32_t>(std::stoul(t)));
  if (r.horizons.empty()) throw UsageError("config: at least one horizon");
  r.replicas = static_cast<int>(cfg.get_int("replicas", 1));
  if (r.replicas < 1) throw UsageError("config: replicas >= 1");
  r.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  r.order = parse_order(cfg.get_or("order", "pgf"));
  r.emp.grid_size = static_cast<int>(cfg.get_int("grid", 64));
  r.emp.bootstrap_reps = static_cast<int>(cfg.get_int("bootstrap", 2000));
  r.emp.level = cfg.get_double("level", 0.95);
  r.max_frogs =
      static_cast<std::uint64_t>(cfg.get_int("max_frogs", 2'000'000));
  return r;
}

// ---------------------------------------------------------------------
// Worker pool: replica-parallel, deterministic because results are
// written back into preallocated slots and serialized in index order.

template <class Fn>
inline void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers < 1) workers = 1;
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int k = std::min<int>(workers, static_cast<int>(n));
  pool.reserve(k);
  for (int w = 0; w < k; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

inline void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

namespace detail_harness {

inline std::uint64_t rule_count_seed(std::uint64_t master,
                                     const std::string& rule_name,
                                     std::uint64_t replica) {
  std::uint64_t rh = rng::hash_string(rule_name.data(), rule_name.size());
  return rng::mix(rng::mix(master, rh), replica);
}

struct RunSlot {
  std::uint64_t seed = 0;
  std::int64_t r = 0;
  std::int64_t visited = 0;
  std::uint64_t frogs = 0;
  bool capped = false;
};

inline RunSlot run_one(const Resolved& rv, const ConfigRule& rule,
                       const std::string& rule_name, std::uint32_t horizon,
                       std::uint64_t replica,
                       const WalkerKind* walker_override = nullptr) {
  FrogModelSpec spec;
  spec.graph = rv.graph;
  spec.rule = rule;
  spec.walker = walker_override ? *walker_override : rv.walker;
  spec.horizon = horizon;
  spec.seed = rng::mix(rv.seed, replica);
  spec.count_seed = rule_count_seed(rv.seed, rule_name, replica);
  spec.count_seed_set = true;
  spec.max_frogs = rv.max_frogs;
  spec.max_vertices = rv.max_frogs;
  RunResult res = run(spec);
  RunSlot slot;
  slot.seed = spec.seed;
  slot.r = static_cast<std::int64_t>(res.out.root_visits);
  slot.visited = static_cast<std::int64_t>(res.out.visited_nonroot_total());
  slot.frogs = res.out.total_frogs;
  slot.capped = res.out.capped;
  return slot;
}

}  // namespace detail_harness

// ---------------------------------------------------------------------
// cmd_simulate: independent seeded runs per (rule, horizon), one
// JSON-lines record per replica, capped runs flagged but kept.

inline int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out,
                        std::ostream* csv, int workers) {
  Resolved rv = resolve(cfg, 1);
  std::string digest = cfg.digest();

  out << json{{"meta",
               {{"experiment", "simulate"},
                {"digest", digest},
                {"caveat",
                 "growth curves are an observable proxy; no recurrence or "
                 "transience verdicts are implied"}}}}
             .dump()
      << '\n';

  bool any_capped = false;
  if (csv) csv_row(*csv, {"rule", "horizon", "mean_r", "mean_visited"});
  for (auto& [rule_name, rule] : rv.rules) {
    for (std::uint32_t h : rv.horizons) {
      std::vector<detail_harness::RunSlot> slots(rv.replicas);
      parallel_for(slots.size(), workers, [&](std::size_t i) {
        slots[i] = detail_harness::run_one(rv, rule, rule_name, h, i);
      });
      double sum_r = 0.0, sum_v = 0.0;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        const auto& s = slots[i];
        any_capped |= s.capped;
        sum_r += static_cast<double>(s.r);
        sum_v += static_cast<double>(s.visited);
        out << json{{"digest", digest}, {"rule", rule_name},
                    {"horizon", h},     {"replica", i},
                    {"seed", s.seed},   {"r", s.r},
                    {"visited", s.visited}, {"frogs", s.frogs},
                    {"capped", s.capped}}
                   .dump()
            << '\n';
      }
      if (csv)
        csv_row(*csv, {rule_name, std::to_string(h),
                       fmt(sum_r / static_cast<double>(slots.size())),
                       fmt(sum_v / static_cast<double>(slots.size()))});
    }
  }
  return any_capped ? kExitCapped : kExitPass;
}

// ---------------------------------------------------------------------
// cmd_compare: paired replica sets. The two rules' marginals must be
// exactly order-certified first; the comparison is refused otherwise.
// Path streams are shared across the rules (identical `seed`), only the
// count streams differ, which tightens the comparison.

inline int cmd_compare(const ExperimentConfig& cfg, std::ostream& out,
                       std::ostream* csv, int workers) {
  Resolved rv = resolve(cfg, 2);
  std::string digest = cfg.digest();
  const auto& [name_a, rule_a] = rv.rules[0];
  const auto& [name_b, rule_b] = rv.rules[1];

  Pmf marg_a, marg_b;
  try {
    marg_a = rule_a.marginal();
    marg_b = rule_b.marginal();
  } catch (const std::domain_error& e) {
    throw UsageError(std::string("compare: ") + e.what());
  }
  OrderVerdict pre = check_exact(rv.order, marg_a, marg_b);
  if (!pre.dominates()) {
    out << json{{"meta",
                 {{"experiment", "compare"},
                  {"digest", digest},
                  {"refused", "per-vertex marginals are not " +
                                  order_name(rv.order) +
                                  "-ordered (rule.a must be dominated by "
                                  "rule.b)"},
                  {"precondition", io::verdict_to_json(pre, false)}}}}
               .dump()
        << '\n';
    return kExitUsage;
  }

  out << json{{"meta",
               {{"experiment", "compare"},
                {"digest", digest},
                {"order", order_name(rv.order)},
                {"precondition", io::verdict_to_json(pre, false)}}}}
             .dump()
      << '\n';

  bool any_capped = false;
  bool any_violation = false;
  if (csv) csv_row(*csv, {"statistic", "horizon", "t", "margin"});
  for (std::uint32_t h : rv.horizons) {
    std::vector<detail_harness::RunSlot> sa(rv.replicas), sb(rv.replicas);
    parallel_for(static_cast<std::size_t>(rv.replicas) * 2, workers,
                 [&](std::size_t j) {
                   std::size_t i = j / 2;
                   if (j % 2 == 0)
                     sa[i] = detail_harness::run_one(rv, rule_a, name_a, h, i);
                   else
                     sb[i] = detail_harness::run_one(rv, rule_b, name_b, h, i);
                 });

    std::vector<std::int64_t> r_a, r_b, v_a, v_b;
    for (int i = 0; i < rv.replicas; ++i) {
      for (auto* pair : {&sa, &sb}) {
        const auto& s = (*pair)[static_cast<std::size_t>(i)];
        const std::string& rn = (pair == &sa) ? name_a : name_b;
        any_capped |= s.capped;
        out << json{{"digest", digest}, {"rule", rn},
                    {"horizon", h},     {"replica", i},
                    {"seed", s.seed},   {"r", s.r},
                    {"visited", s.visited}, {"capped", s.capped}}
                   .dump()
            << '\n';
      }
      r_a.push_back(sa[i].r);
      r_b.push_back(sb[i].r);
      v_a.push_back(sa[i].visited);
      v_b.push_back(sb[i].visited);
    }

    struct Stat {
      const char* name;
      const std::vector<std::int64_t>*xs, *ys;
    };
    for (auto& st : {Stat{"r", &r_a, &r_b}, Stat{"V", &v_a, &v_b}}) {
      EmpiricalOptions opt = rv.emp;
      opt.seed = rng::mix(rv.seed, rng::hash_string(st.name, 1) ^ h);
      OrderVerdict v = check_empirical(rv.order, *st.xs, *st.ys, opt);
      any_violation |= v.violated();
      out << json{{"verdict",
                   {{"statistic", st.name},
                    {"horizon", h},
                    {"order", order_name(rv.order)},
                    {"result", io::verdict_to_json(v, false)}}}}
                 .dump()
          << '\n';
      if (csv)
        for (auto& [t, d] : v.curve)
          csv_row(*csv, {st.name, std::to_string(h), fmt(t), fmt(d)});
    }
  }
  if (any_violation) return kExitViolation;
  return any_capped ? kExitCapped : kExitPass;
}

// ---------------------------------------------------------------------
// cmd_shape: lattice activation-time comparison. Estimates E T(n e1)/n
// for both rules, checks the monotone-mean property for ordered rules,
// and emits a boundary point cloud of the visited set for plotting.

inline int cmd_shape(const ExperimentConfig& cfg, std::ostream& out,
                     std::ostream* csv, int workers) {
  Resolved rv = resolve(cfg, 2);
  if (rv.graph.type != GraphKind::Type::Lattice)
    throw UsageError("shape: lattice graph required");
  std::string digest = cfg.digest();
  int n_max = static_cast<int>(cfg.get_int("shape.n_max", 30));
  int min_uncensored =
      static_cast<int>(cfg.get_int("shape.min_uncensored", 10));
  std::uint32_t horizon = rv.horizons.front();
  const auto& [name_a, rule_a] = rv.rules[0];
  const auto& [name_b, rule_b] = rv.rules[1];

  Pmf marg_a, marg_b;
  try {
    marg_a = rule_a.marginal();
    marg_b = rule_b.marginal();
  } catch (const std::domain_error& e) {
    throw UsageError(std::string("shape: ") + e.what());
  }
  OrderVerdict pre = check_exact(rv.order, marg_a, marg_b);
  if (!pre.dominates()) {
    out << json{{"meta",
                 {{"experiment", "shape"},
                  {"digest", digest},
                  {"refused", "marginals not " + order_name(rv.order) +
                                  "-ordered"}}}}
               .dump()
        << '\n';
    return kExitUsage;
  }

  struct ShapeRun {
    std::vector<std::int64_t> T;  // activation time of n*e1, -1 censored
    std::int64_t visited = 0;
    bool capped = false;
    std::uint64_t seed = 0;
    std::vector<std::vector<int>> boundary;  // replica 0 only
  };

  auto run_rule = [&](const ConfigRule& rule, const std::string& rule_name) {
    std::vector<ShapeRun> runs(rv.replicas);
    parallel_for(runs.size(), workers, [&](std::size_t i) {
      FrogModelSpec spec;
      spec.graph = rv.graph;
      spec.rule = rule;
      spec.walker = rv.walker;
      spec.horizon = horizon;
      spec.seed = rng::mix(rv.seed, i);
      spec.count_seed = detail_harness::rule_count_seed(rv.seed, rule_name, i);
      spec.count_seed_set = true;
      spec.max_frogs = rv.max_frogs;
      spec.max_vertices = rv.max_frogs;
      RunResult res = run(spec);
      ShapeRun& sr = runs[i];
      sr.seed = spec.seed;
      sr.capped = res.out.capped;
      sr.visited = static_cast<std::int64_t>(res.out.visited_nonroot_total());
      sr.T.assign(n_max, -1);
      std::vector<int> coords(static_cast<std::size_t>(rv.graph.d), 0);
      for (int n = 1; n <= n_max; ++n) {
        coords[0] = n;
        VertexId v = res.graph->lattice_vertex(coords);
        auto it = res.out.activation_time.find(v);
        if (it != res.out.activation_time.end())
          sr.T[n - 1] = static_cast<std::int64_t>(it->second);
      }
      if (i == 0) {
        // Visited sites with an unvisited lattice neighbor.
        std::set<std::vector<int>> visited;
        for (auto& [v, t] : res.out.activation_time)
          visited.insert(res.graph->lattice_coords(v));
        for (auto& c : visited) {
          std::vector<int> nb = c;
          bool edge = false;
          for (int axis = 0; axis < rv.graph.d && !edge; ++axis) {
            for (int dir : {1, -1}) {
              nb[axis] = c[axis] + dir;
              if (!visited.count(nb)) {
                edge = true;
                break;
              }
            }
            nb[axis] = c[axis];
          }
          if (edge) sr.boundary.push_back(c);
        }
      }
    });
    return runs;
  };

  auto runs_a = run_rule(rule_a, name_a);
  auto runs_b = run_rule(rule_b, name_b);

  out << json{{"meta",
               {{"experiment", "shape"},
                {"digest", digest},
                {"order", order_name(rv.order)},
                {"horizon", horizon},
                {"n_max", n_max},
                {"precondition", io::verdict_to_json(pre, false)}}}}
             .dump()
      << '\n';

  bool any_capped = false;
  for (auto* runs : {&runs_a, &runs_b}) {
    const std::string& rn = (runs == &runs_a) ? name_a : name_b;
    for (std::size_t i = 0; i < runs->size(); ++i) {
      const ShapeRun& sr = (*runs)[i];
      any_capped |= sr.capped;
      out << json{{"digest", digest}, {"rule", rn},
                  {"horizon", horizon}, {"replica", i},
                  {"seed", sr.seed},  {"visited", sr.visited},
                  {"capped", sr.capped}, {"T", sr.T}}
                 .dump()
          << '\n';
    }
  }

  struct Estimate {
    double mean = 0.0, sd = 0.0;
    int n = 0, censored = 0;
  };
  auto estimate = [&](const std::vector<ShapeRun>& runs, int n) {
    Estimate e;
    double sum = 0.0;
    for (auto& sr : runs) {
      std::int64_t t = sr.T[n - 1];
      if (t < 0) {
        ++e.censored;
        continue;
      }
      sum += static_cast<double>(t);
      ++e.n;
    }
    if (e.n > 0) e.mean = sum / e.n;
    double ss = 0.0;
    for (auto& sr : runs)
      if (sr.T[n - 1] >= 0) {
        double d = static_cast<double>(sr.T[n - 1]) - e.mean;
        ss += d * d;
      }
    if (e.n > 1) e.sd = std::sqrt(ss / (e.n - 1));
    return e;
  };

  if (csv)
    csv_row(*csv, {"n", "mean_T_a", "mean_T_b", "ci", "mu_a", "mu_b",
                   "censored_a", "censored_b", "ok"});
  bool any_violation = false;
  for (int n = 1; n <= n_max; ++n) {
    Estimate ea = estimate(runs_a, n);
    Estimate eb = estimate(runs_b, n);
    bool comparable = ea.n >= min_uncensored && eb.n >= min_uncensored;
    double ci = 0.0;
    bool ok = true;
    if (comparable) {
      ci = 1.96 * std::sqrt(ea.sd * ea.sd / ea.n + eb.sd * eb.sd / eb.n);
      ok = eb.mean <= ea.mean + ci;
      any_violation |= !ok;
    }
    out << json{{"shape_point",
                 {{"n", n},
                  {"mean_T_a", ea.mean},
                  {"mean_T_b", eb.mean},
                  {"ci", ci},
                  {"mu_a", ea.mean / n},
                  {"mu_b", eb.mean / n},
                  {"censored_a", ea.censored},
                  {"censored_b", eb.censored},
                  {"comparable", comparable},
                  {"ok", ok}}}}
               .dump()
        << '\n';
    if (csv)
      csv_row(*csv,
              {std::to_string(n), fmt(ea.mean), fmt(eb.mean), fmt(ci),
               fmt(ea.mean / n), fmt(eb.mean / n), std::to_string(ea.censored),
               std::to_string(eb.censored), ok ? "1" : "0"});
  }

  for (auto* runs : {&runs_a, &runs_b}) {
    const std::string& rn = (runs == &runs_a) ? name_a : name_b;
    json cloud = json::array();
    for (auto& c : runs->front().boundary) cloud.push_back(c);
    out << json{{"boundary", {{"rule", rn}, {"horizon", horizon},
                              {"points", cloud}}}}
               .dump()
        << '\n';
  }

  if (any_violation) return kExitViolation;
  return any_capped ? kExitCapped : kExitPass;
}

// ---------------------------------------------------------------------
// cmd_death: random-walk-with-death runs to extinction. Estimates the
// survival probability P[V > threshold] per survival parameter p per
// rule; p values share all random streams (CRN), so the estimate is
// pathwise nondecreasing in p. Also checks the empirical pgf dominance
// of V between the two (certified) rules at each p. A run that hits the
// frog cap has escaped to infinity for all practical purposes; its V
// enters the histogram as an effectively-infinite value, whose pgf
// contribution t^V underflows to 0 -- exactly the weight an infinite
// visit count carries.

inline constexpr std::int64_t kEscapedToInfinity = 1'000'000'000;

inline int cmd_death(const ExperimentConfig& cfg, std::ostream& out,
                     std::ostream* csv, int workers) {
  Resolved rv = resolve(cfg, 2);
  if (rv.graph.type == GraphKind::Type::Explicit)
    throw UsageError("death: tree or lattice graph required");
  std::string digest = cfg.digest();
  std::vector<double> p_list;
  for (auto& t : io::tokenize(cfg.get_or("death.p", "0.5 0.6 0.7")))
    p_list.push_back(std::stod(t));
  for (double p : p_list)
    if (p <= 0.0 || p > 1.0) throw UsageError("death: p in (0,1]");
  std::int64_t threshold = cfg.get_int("death.threshold", 20);
  std::uint32_t horizon = rv.horizons.front();
  const auto& [name_a, rule_a] = rv.rules[0];
  const auto& [name_b, rule_b] = rv.rules[1];

  Pmf marg_a, marg_b;
  try {
    marg_a = rule_a.marginal();
    marg_b = rule_b.marginal();
  } catch (const std::domain_error& e) {
    throw UsageError(std::string("death: ") + e.what());
  }
  OrderVerdict pre = check_exact(rv.order, marg_a, marg_b);
  if (!pre.dominates()) {
    out << json{{"meta",
                 {{"experiment", "death"},
                  {"digest", digest},
                  {"refused", "marginals not " + order_name(rv.order) +
                                  "-ordered"}}}}
               .dump()
        << '\n';
    return kExitUsage;
  }

  out << json{{"meta",
               {{"experiment", "death"},
                {"digest", digest},
                {"order", order_name(rv.order)},
                {"p_list", p_list},
                {"threshold", threshold},
                {"precondition", io::verdict_to_json(pre, false)}}}}
             .dump()
      << '\n';

  bool any_capped = false;
  bool any_violation = false;
  if (csv) csv_row(*csv, {"rule", "p", "survival", "capped"});

  // V samples per (rule index, p index); capped runs enter as infinite
  // and count as survival.
  std::vector<std::vector<std::vector<std::int64_t>>> v_samples(
      2, std::vector<std::vector<std::int64_t>>(p_list.size()));
  std::vector<std::vector<double>> survival(2,
                                            std::vector<double>(p_list.size()));

  for (std::size_t ri = 0; ri < 2; ++ri) {
    const auto& [rule_name, rule] = rv.rules[ri];
    for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
      WalkerKind walker = WalkerKind::srw_with_death(p_list[pi]);
      std::vector<detail_harness::RunSlot> slots(rv.replicas);
      parallel_for(slots.size(), workers, [&](std::size_t i) {
        slots[i] =
            detail_harness::run_one(rv, rule, rule_name, horizon, i, &walker);
      });
      std::int64_t survived = 0, n_capped = 0;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        const auto& s = slots[i];
        any_capped |= s.capped;
        bool surv = s.capped || s.visited > threshold;
        survived += surv ? 1 : 0;
        if (s.capped) ++n_capped;
        v_samples[ri][pi].push_back(s.capped ? kEscapedToInfinity : s.visited);
        out << json{{"digest", digest}, {"rule", rule_name},
                    {"p", p_list[pi]},  {"replica", i},
                    {"seed", s.seed},   {"visited", s.visited},
                    {"capped", s.capped}, {"survived", surv}}
                   .dump()
            << '\n';
      }
      survival[ri][pi] =
          static_cast<double>(survived) / static_cast<double>(slots.size());
      out << json{{"survival_estimate",
                   {{"rule", rule_name},
                    {"p", p_list[pi]},
                    {"survival", survival[ri][pi]},
                    {"capped", n_capped}}}}
                 .dump()
          << '\n';
      if (csv)
        csv_row(*csv, {rule_name, fmt(p_list[pi]), fmt(survival[ri][pi]),
                       std::to_string(n_capped)});
    }
  }

  // CRN monotonicity of the survival estimate in p, per rule.
  for (std::size_t ri = 0; ri < 2; ++ri)
    for (std::size_t pi = 0; pi + 1 < p_list.size(); ++pi) {
      bool ok = survival[ri][pi] <= survival[ri][pi + 1];
      any_violation |= !ok;
      out << json{{"monotonicity",
                   {{"rule", rv.rules[ri].first},
                    {"p_lo", p_list[pi]},
                    {"p_hi", p_list[pi + 1]},
                    {"ok", ok}}}}
                 .dump()
          << '\n';
    }

  // Empirical pgf dominance of V between the rules, per p.
  for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
    if (v_samples[0][pi].size() < 100 || v_samples[1][pi].size() < 100) {
      out << json{{"verdict",
                   {{"statistic", "V"},
                    {"p", p_list[pi]},
                    {"skipped", "fewer than 100 samples"}}}}
                 .dump()
          << '\n';
      continue;
    }
    EmpiricalOptions opt = rv.emp;
    opt.seed = rng::mix(rv.seed, 0xdeadu + pi);
    OrderVerdict v = check_empirical(OrderKind::Pgf, v_samples[0][pi],
                                     v_samples[1][pi], opt);
    any_violation |= v.violated();
    out << json{{"verdict",
                 {{"statistic", "V"},
                  {"p", p_list[pi]},
                  {"order", "pgf"},
                  {"result", io::verdict_to_json(v, false)}}}}
               .dump()
        << '\n';
  }

  if (any_violation) return kExitViolation;
  return any_capped ? kExitCapped : kExitPass;
}

// ---------------------------------------------------------------------
// Verification suites: fixed-seed property runs over the library
// modules, shared by `cmd_verify` and the integration checks.

struct SuiteResult {
  std::string suite;
  std::vector<VerifyReport> reports;

  bool pass() const {
    for (auto& r : reports)
      if (!r.pass()) return false;
    return true;
  }
};

inline SuiteResult suite_statistics(std::uint64_t seed, int n_instances = 100) {
  SuiteResult out;
  out.suite = "statistics";
  out.reports.push_back(verify_statistic_class(StatisticKind::root_visits(), 3,
                                               n_instances, seed));
  out.reports.push_back(verify_statistic_class(
      StatisticKind::visit_indicator("a", 0), 3, n_instances,
      rng::mix(seed, 1)));
  out.reports.push_back(verify_statistic_class(StatisticKind::visited_count(0),
                                               3, n_instances,
                                               rng::mix(seed, 2)));
  out.reports.push_back(verify_statistic_class(
      StatisticKind::root_visits_from("a"), 3, n_instances,
      rng::mix(seed, 3)));
  out.reports.push_back(
      verify_builder_lemmas(std::max(10, n_instances / 5), rng::mix(seed, 4)));
  return out;
}

inline SuiteResult suite_orders(std::uint64_t seed, int n_maximals = 200,
                                int n_chain = 500, int n_thinning = 100) {
  SuiteResult out;
  out.suite = "orders";
  std::mt19937_64 gen(seed);

  VerifyReport maximals;
  maximals.subject = "icv maximal elements";
  for (int i = 0; i < n_maximals; ++i) {
    Pmf x = random_pmf(gen);
    ++maximals.instances;
    Pmf c = icv_const_dominator(x);
    Pmf tp = icv_two_point_dominator(x);
    for (const Pmf* dom : {&c, &tp}) {
      ++maximals.checks;
      if (!check_exact(OrderKind::Icv, x, *dom).dominates())
        maximals.failures.push_back("icv dominance failed at instance " +
                                    std::to_string(i));
      ++maximals.checks;
      if (!check_exact(OrderKind::Pgf, x, *dom).dominates())
        maximals.failures.push_back("pgf consequence failed at instance " +
                                    std::to_string(i));
    }
  }
  out.reports.push_back(std::move(maximals));

  VerifyReport chain;
  chain.subject = "implication chain st => icv => pgf";
  for (int i = 0; i < n_chain; ++i) {
    auto [x, y] = random_st_pair(gen);
    ++chain.instances;
    ChainReport cr = implication_chain_check(x, y);
    chain.checks += 3;
    if (!cr.st.dominates())
      chain.failures.push_back("constructed st pair not st-ordered at " +
                               std::to_string(i));
    if (!cr.consistent)
      chain.failures.push_back("chain broken at instance " +
                               std::to_string(i) + ": " + cr.detail);
  }
  out.reports.push_back(std::move(chain));

  VerifyReport thinning;
  thinning.subject = "pgf via thinning agreement";
  const int p_grid = 128;
  for (int i = 0; i < n_thinning; ++i) {
    Pmf x = random_pmf(gen);
    Pmf y = (i % 2 == 0) ? random_pmf(gen) : random_st_pair(gen).second;
    ++thinning.instances;
    // Zero probability of the p-thinning equals the gf at 1-p.
    for (int gi = 1; gi <= p_grid; ++gi) {
      double p = static_cast<double>(gi) / (p_grid + 1);
      ++thinning.checks;
      if (std::abs(thin(x, p).mass_at(0) - x.gf(1.0 - p)) > 1e-9)
        thinning.failures.push_back("thinning identity failed at instance " +
                                    std::to_string(i));
    }
    ++thinning.checks;
    OrderVerdict via_gf = check_exact(OrderKind::Pgf, x, y);
    OrderVerdict via_thin = pgf_via_thinning(x, y);
    if (via_gf.dominates() != via_thin.dominates())
      thinning.failures.push_back("route disagreement at instance " +
                                  std::to_string(i));
  }
  out.reports.push_back(std::move(thinning));

  VerifyReport concave;
  concave.subject = "icv test family completeness (random concave phi)";
  for (int i = 0; i < 50; ++i) {
    auto [x, y] = random_st_pair(gen);
    if (!check_exact(OrderKind::Icv, x, y).dominates()) continue;
    ++concave.instances;
    std::int64_t K = std::max(x.max_support(), y.max_support()) + 1;
    for (int j = 0; j < 20; ++j) {
      auto phi = random_icv_function(gen, K);
      ++concave.checks;
      if (expect_over(x, phi) > expect_over(y, phi) + 1e-9)
        concave.failures.push_back("icv functional reversed at instance " +
                                   std::to_string(i));
    }
  }
  out.reports.push_back(std::move(concave));
  return out;
}

inline SuiteResult suite_operator_a(std::uint64_t seed, int n_pairs = 100) {
  SuiteResult out;
  out.suite = "operator_a";

  VerifyReport exactness;
  exactness.subject = "image of the point mass at zero";
  exactness.instances = 1;
  Pmf img = apply_exact(Pmf::point(0));
  exactness.checks += 2;
  if (std::abs(img.mass_at(0) - 2.0 / 3.0) > 1e-12 ||
      std::abs(img.mass_at(1) - 1.0 / 3.0) > 1e-12 || img.max_support() > 1)
    exactness.failures.push_back("image of point(0) is not bernoulli(1/3)");
  out.reports.push_back(std::move(exactness));

  // Constructed pgf-ordered pairs with support <= 6: thinning pairs,
  // point pairs, and maximal-element pairs.
  std::mt19937_64 gen(seed);
  std::vector<std::pair<Pmf, Pmf>> pairs;
  std::uniform_real_distribution<double> pd(0.1, 0.9);
  std::uniform_int_distribution<std::int64_t> kd(0, 5);
  while (static_cast<int>(pairs.size()) < n_pairs) {
    switch (pairs.size() % 3) {
      case 0: {
        Pmf y = random_pmf(gen, 6);
        pairs.emplace_back(thin(y, pd(gen)), y);
        break;
      }
      case 1: {
        std::int64_t i = kd(gen), j = kd(gen);
        pairs.emplace_back(Pmf::point(std::min(i, j)),
                           Pmf::point(std::max(i, j)));
        break;
      }
      default: {
        Pmf x = random_pmf(gen, 5);
        pairs.emplace_back(x, icv_two_point_dominator(x));
        break;
      }
    }
  }
  MonotonicityReport mono = monotonicity_test(pairs, 512, 12);
  VerifyReport mrep;
  mrep.subject = "pgf monotonicity of the operator";
  mrep.instances = mono.pairs;
  mrep.checks = mono.pairs;
  mrep.failures = mono.failures;
  out.reports.push_back(std::move(mrep));
  return out;
}

inline SuiteResult suite_moments(std::uint64_t seed, int n_sequences = 50,
                                 int n_identity = 200, int n_extremum = 100) {
  SuiteResult out;
  out.suite = "moments";
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> num(0, 20), den(1, 20);
  auto rand_rat = [&](bool allow_negative) {
    int n = num(gen);
    if (allow_negative && gen() % 2 == 0) n = -n;
    return Rational(n, den(gen));
  };

  VerifyReport haus;
  haus.subject = "completely monotone moment sequences";
  const int K = 20, n_max = 10;
  for (int i = 0; i < n_sequences; ++i) {
    // f(k) = sum_j w_j u_j^k with w_j >= 0 and u_j in [0,1].
    std::uniform_int_distribution<int> terms(1, 4);
    int m = terms(gen);
    std::vector<Rational> w(m), u(m);
    for (int j = 0; j < m; ++j) {
      w[j] = rand_rat(false);
      int a = num(gen), b = den(gen);
      u[j] = Rational(std::min(a, b), std::max({a, b, 1}));
    }
    RationalSeq f(K + 1);
    for (int k = 0; k <= K; ++k) {
      Rational acc = 0;
      for (int j = 0; j < m; ++j) {
        Rational pw = 1;
        for (int e = 0; e < k; ++e) pw *= u[j];
        acc += w[j] * pw;
      }
      f[k] = acc;
    }
    ++haus.instances;
    ++haus.checks;
    if (hausdorff_check(f, n_max).has_value())
      haus.failures.push_back("moment sequence rejected at instance " +
                              std::to_string(i));
  }
  // The linear sequence is not completely monotone; the first witness is
  // the first difference at zero.
  {
    RationalSeq lin(K + 1);
    for (int k = 0; k <= K; ++k) lin[k] = k;
    ++haus.instances;
    ++haus.checks;
    auto wit = hausdorff_check(lin, n_max);
    if (!wit || wit->n != 1 || wit->k != 0 || wit->value != Rational(-1))
      haus.failures.push_back("linear sequence witness incorrect");
  }
  out.reports.push_back(std::move(haus));

  VerifyReport ident;
  ident.subject = "multilinear derivative identity";
  std::uniform_int_distribution<int> nd(1, 6);
  for (int i = 0; i < n_identity; ++i) {
    int n = nd(gen);
    std::vector<Rational> g(std::size_t{1} << n);
    for (auto& v : g) v = rand_rat(true);
    std::size_t b_mask = gen() & ((std::size_t{1} << n) - 1);
    std::size_t x_mask = gen() & ((std::size_t{1} << n) - 1);
    ++ident.instances;
    ++ident.checks;
    if (!verify_derivative_identity(g, n, b_mask, x_mask))
      ident.failures.push_back("identity failed at instance " +
                               std::to_string(i));
  }
  out.reports.push_back(std::move(ident));

  VerifyReport extremum;
  extremum.subject = "vertex extremum property";
  for (int i = 0; i < n_extremum; ++i) {
    const int n = 3;
    MultilinearPoly p{n, std::vector<Rational>(1 << n)};
    for (auto& c : p.coef) c = rand_rat(true);
    ++extremum.instances;
    ++extremum.checks;
    if (!vertex_extremum_check(p, 7))
      extremum.failures.push_back("extremum check failed at instance " +
                                  std::to_string(i));
  }
  out.reports.push_back(std::move(extremum));
  return out;
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "statistics") return suite_statistics(seed);
  if (name == "orders") return suite_orders(seed);
  if (name == "operator_a") return suite_operator_a(seed);
  if (name == "moments") return suite_moments(seed);
  throw UsageError("verify: unknown suite `" + name +
                   "` (statistics, orders, operator_a, moments)");
}

inline int cmd_verify(const std::string& suite, std::uint64_t seed,
                      std::ostream& out) {
  SuiteResult res = run_suite(suite, seed);
  json reports = json::array();
  for (auto& r : res.reports) reports.push_back(io::report_to_json(r));
  out << json{{"suite", res.suite},
              {"seed", seed},
              {"pass", res.pass()},
              {"reports", reports}}
             .dump()
      << '\n';
  for (auto& r : res.reports)
    for (auto& f : r.failures)
      out << json{{"failure", f}}.dump() << '\n';
  return res.pass() ? kExitPass : kExitViolation;
}

// ---------------------------------------------------------------------
// Dispatch used by the CLI and the integration tests.

inline int run_experiment(const ExperimentConfig& cfg, std::ostream& out,
                          std::ostream* csv, int workers) {
  std::string exp = cfg.get("experiment");
  if (exp == "simulate") return cmd_simulate(cfg, out, csv, workers);
  if (exp == "compare") return cmd_compare(cfg, out, csv, workers);
  if (exp == "shape") return cmd_shape(cfg, out, csv, workers);
  if (exp == "death") return cmd_death(cfg, out, csv, workers);
  if (exp == "verify")
    return cmd_verify(cfg.get("verify.suite"),
                      static_cast<std::uint64_t>(cfg.get_int("seed", 0)), out);
  throw UsageError("experiment: one of simulate, compare, shape, death, "
                   "verify");
}

}  // namespace frog::harness
