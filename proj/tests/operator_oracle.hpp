#pragma once

// Independent brute-force oracle for the 4-vertex truncated-tree model:
// enumerates every per-frog direction choice explicitly and replays the
// waking dynamics with a bespoke time-stepped loop. Shares no code with
// apply_exact, which aggregates choices analytically.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "frog/pmf.hpp"

namespace oracle {

// Vertices: 0 = root, 1 = interior, 2 = u, 3 = v. All walks below are
// fully resolved paths; a frog rests at its final vertex.
struct OFrog {
  int home;                // where the frog sleeps (interior/u/v)
  std::vector<int> path;   // from home to the resting leaf
};

// Replays the synchronous dynamics: active frogs move one edge per
// step, piles wake when their vertex is first occupied by an arrival,
// woken frogs start moving the following step. Returns the number of
// frogs whose final vertex is the root.
inline int replay(const std::vector<int>& root_path,
                  const std::vector<OFrog>& dormant) {
  struct Live {
    const std::vector<int>* path;
    std::size_t pos = 0;
  };
  std::vector<Live> live{{&root_path, 0}};
  std::vector<bool> woken(4, false);
  woken[0] = true;
  int at_root = 0;
  for (int t = 0; t < 64; ++t) {
    std::vector<int> arrivals;
    bool moved = false;
    for (auto& f : live) {
      if (f.pos + 1 >= f.path->size()) continue;
      ++f.pos;
      moved = true;
      arrivals.push_back((*f.path)[f.pos]);
    }
    for (int v : arrivals)
      if (!woken[v]) {
        woken[v] = true;
        for (auto& d : dormant)
          if (d.home == v) live.push_back({&d.path, 0});
      }
    if (!moved) break;
  }
  for (auto& f : live)
    if ((*f.path)[f.path->size() - 1] == 0 && f.path->size() > 1) ++at_root;
  return at_root;
}

// Exact law of the root count for dormant pile sizes (i, j) at u and v,
// enumerating the root frog's branch choice, the interior frog's first
// step, and every u-/v-frog's second step.
inline std::map<int, double> law_given_counts(int i, int j) {
  std::map<int, double> out;
  const std::vector<int> kRootToU{0, 1, 2}, kRootToV{0, 1, 3};
  for (int c0 = 0; c0 < 2; ++c0) {
    const std::vector<int>& root_path = c0 == 0 ? kRootToU : kRootToV;
    for (int c1 = 0; c1 < 3; ++c1) {
      // interior frog steps to root, u or v and rests there
      std::vector<int> mid_path{1, c1 == 0 ? 0 : (c1 == 1 ? 2 : 3)};
      for (std::uint64_t du = 0; du < (std::uint64_t{1} << i); ++du) {
        for (std::uint64_t dv = 0; dv < (std::uint64_t{1} << j); ++dv) {
          std::vector<OFrog> dormant;
          dormant.push_back({1, mid_path});
          for (int k = 0; k < i; ++k)
            dormant.push_back(
                {2, {2, 1, (du >> k) & 1 ? 3 : 0}});  // u -> interior -> {v, root}
          for (int k = 0; k < j; ++k)
            dormant.push_back(
                {3, {3, 1, (dv >> k) & 1 ? 2 : 0}});  // v -> interior -> {u, root}
          int r = replay(root_path, dormant);
          double p = 0.5 * (1.0 / 3.0) / std::pow(2.0, double(i + j));
          out[r] += p;
        }
      }
    }
  }
  return out;
}

inline frog::Pmf apply(const frog::Pmf& pi) {
  std::map<std::int64_t, double> out;
  for (auto& [i, pi_i] : pi.mass())
    for (auto& [j, pi_j] : pi.mass())
      for (auto& [r, p] : law_given_counts(static_cast<int>(i),
                                           static_cast<int>(j)))
        out[r] += pi_i * pi_j * p;
  return frog::Pmf::from_mass(std::move(out));
}

}  // namespace oracle
