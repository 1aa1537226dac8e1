#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "frog/engine.hpp"
#include "frog/moments.hpp"
#include "frog/orders.hpp"
#include "frog/pmf.hpp"
#include "frog/statistics.hpp"

namespace frog::io {

using nlohmann::json;

inline std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline bool is_blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

/// Adjacency format: one `name1 name2` line per edge plus a single
/// `root name` line designating the root. Comment lines start with '#'.
inline std::shared_ptr<const ExplicitAdjacency> load_adjacency(
    std::istream& in) {
  std::string root;
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  while (std::getline(in, line)) {
    if (is_blank_or_comment(line)) continue;
    auto toks = tokenize(line);
    if (toks.size() != 2)
      throw std::invalid_argument("adjacency: expected two tokens per line: " +
                                  line);
    if (toks[0] == "root") {
      if (!root.empty())
        throw std::invalid_argument("adjacency: duplicate root line");
      root = toks[1];
    } else {
      edges.emplace_back(toks[0], toks[1]);
    }
  }
  if (root.empty())
    throw std::invalid_argument("adjacency: missing `root name` line");
  return std::make_shared<const ExplicitAdjacency>(
      ExplicitAdjacency::from_edges(root, edges));
}

inline std::shared_ptr<const ExplicitAdjacency> load_adjacency_file(
    const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return load_adjacency(f);
}

/// Path table format: `origin index : v0 v1 v2 ...` per line.
inline PathTable load_path_table(std::istream& in) {
  PathTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (is_blank_or_comment(line)) continue;
    auto toks = tokenize(line);
    if (toks.size() < 4 || toks[2] != ":")
      throw std::invalid_argument("path table: bad line: " + line);
    std::uint32_t index = static_cast<std::uint32_t>(std::stoul(toks[1]));
    std::vector<std::string> path(toks.begin() + 3, toks.end());
    t.insert(toks[0], index, std::move(path));
  }
  return t;
}

inline PathTable load_path_table_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return load_path_table(f);
}

/// Pmf literal: `{0: 0.5, 2: 0.25, inf: 0.25}`.
inline Pmf parse_pmf_literal(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != '{' && c != '}' && c != ',' && c != ':') s += c;
    else s += ' ';
  auto toks = tokenize(s);
  if (toks.size() % 2 != 0)
    throw std::invalid_argument("pmf literal: expected key/value pairs");
  std::map<std::int64_t, double> mass;
  double inf_mass = 0.0;
  for (std::size_t i = 0; i < toks.size(); i += 2) {
    double p = std::stod(toks[i + 1]);
    if (toks[i] == "inf")
      inf_mass = p;
    else
      mass[std::stoll(toks[i])] += p;
  }
  return Pmf::from_mass(std::move(mass), inf_mass);
}

/// Sequence format: `k value` lines with rational literals `p/q`.
inline RationalSeq load_rational_seq(std::istream& in) {
  std::map<int, Rational> by_k;
  std::string line;
  while (std::getline(in, line)) {
    if (is_blank_or_comment(line)) continue;
    auto toks = tokenize(line);
    if (toks.size() != 2)
      throw std::invalid_argument("sequence: bad line: " + line);
    by_k[std::stoi(toks[0])] = parse_rational(toks[1]);
  }
  RationalSeq f;
  int expect = 0;
  for (auto& [k, v] : by_k) {
    if (k != expect)
      throw std::invalid_argument("sequence: indices must be 0..K contiguous");
    f.push_back(v);
    ++expect;
  }
  return f;
}

/// Vertex table format: `bitstring value` lines, e.g. `01 3/4`. The
/// bitstring's leftmost character is variable 1.
inline std::pair<std::vector<Rational>, int> load_vertex_table(
    std::istream& in) {
  std::map<std::size_t, Rational> by_mask;
  int n = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (is_blank_or_comment(line)) continue;
    auto toks = tokenize(line);
    if (toks.size() != 2)
      throw std::invalid_argument("vertex table: bad line: " + line);
    if (n == -1)
      n = static_cast<int>(toks[0].size());
    else if (static_cast<int>(toks[0].size()) != n)
      throw std::invalid_argument("vertex table: inconsistent bitstrings");
    std::size_t mask = 0;
    for (int i = 0; i < n; ++i) {
      char c = toks[0][i];
      if (c == '1')
        mask |= std::size_t{1} << i;
      else if (c != '0')
        throw std::invalid_argument("vertex table: bad bitstring");
    }
    by_mask[mask] = parse_rational(toks[1]);
  }
  if (n < 0) throw std::invalid_argument("vertex table: empty");
  if (by_mask.size() != (std::size_t{1} << n))
    throw std::invalid_argument("vertex table: missing vertex value");
  std::vector<Rational> g(std::size_t{1} << n);
  for (auto& [mask, v] : by_mask) g[mask] = v;
  return {std::move(g), n};
}

// ---------------------------------------------------------------------
// JSON serialization

inline json pmf_to_json(const Pmf& p) {
  json mass = json::object();
  for (auto& [k, w] : p.mass()) mass[std::to_string(k)] = w;
  json out{{"mass", mass}};
  if (p.has_infinity()) out["inf"] = p.mass_at_infinity();
  return out;
}

inline json verdict_to_json(const OrderVerdict& v, bool with_curve = true) {
  const char* s = v.dominates() ? "dominates"
                  : v.violated() ? "violated"
                                 : "inconclusive";
  json out{{"status", s},
           {"margin", v.margin},
           {"witness_point", v.witness_point},
           {"grid_certified", v.grid_certified},
           {"detail", v.detail}};
  if (with_curve) {
    json curve = json::array();
    for (auto& [x, d] : v.curve) curve.push_back(json::array({x, d}));
    out["curve"] = curve;
  }
  return out;
}

inline json outcome_to_json(const RunResult& r, bool with_activation = false,
                            bool with_curve = false) {
  json out{{"r", r.out.root_visits},
           {"visited", r.out.visited_nonroot_total()},
           {"capped", r.out.capped},
           {"horizon", r.out.horizon},
           {"frogs", r.out.total_frogs}};
  if (with_activation) {
    json at = json::object();
    for (auto& [v, t] : r.out.activation_time) at[r.graph->label(v)] = t;
    out["activation_time"] = at;
  }
  if (with_curve) out["visits_by_step"] = r.out.visits_by_step;
  return out;
}

inline json report_to_json(const VerifyReport& rep) {
  return json{{"subject", rep.subject},
              {"instances", rep.instances},
              {"checks", rep.checks},
              {"failures", rep.failures},
              {"pass", rep.pass()}};
}

}  // namespace frog::io
