#pragma once

#include <map>

#include "collatz2/symtraj.hpp"

namespace collatz2 {

struct EnumEntry {
  Word word;
  int eps;

  bool operator<(const EnumEntry& o) const {
    if (word != o.word) return word < o.word;
    return eps < o.eps;
  }
  bool operator==(const EnumEntry& o) const { return word == o.word && eps == o.eps; }
};

struct EnumResult {
  std::map<int, std::vector<EnumEntry>> sets;  // length -> sorted entries
  int max_len = 0;
  bool truncated = false;  // frontier cap hit; downstream statuses must degrade

  bool contains(const Word& w, int eps) const {
    auto it = sets.find(static_cast<int>(w.size()));
    if (it == sets.end()) return false;
    EnumEntry e{w, eps};
    return std::binary_search(it->second.begin(), it->second.end(), e);
  }
};

// Breadth-first growth of candidate cycle parity words. A word survives only
// if every prefix (length >= 3) satisfies the full candidate system including
// the necessary cycle condition -- sound because the fundamental inequality
// holds from any mid-cycle pair once the scheme is proved, so every prefix of
// a true cycle word passes. Lineages are tracked per (eps, sigma); a word is
// kept when some lineage stays feasible hereditarily.
inline EnumResult enumerate_words(const RuleSpec& rule, const BoundCoeffs& coeffs, int max_len = 24,
                                  size_t frontier_cap = 20000) {
  if (max_len < 3) throw std::invalid_argument("enumerate: max_len >= 3");
  struct Node {
    SymTraj traj;
    int sigma;
  };
  EnumResult out;
  out.max_len = max_len;
  std::vector<Node> frontier;
  for (int eps : {1, -1})
    for (int p0 : {1, 2})
      for (int p1 : {1, 2}) {
        if (p0 == 2 && p1 == 2) continue;  // both-even start excluded
        State st = pair_state(p0, p1);
        std::vector<int> nexts;
        if (st == State::OO)
          nexts = {1, 2};
        else
          nexts = {1};  // mixed branches output odd
        for (int p2 : nexts) {
          SymTraj t = sym_extend(sym_seed(p0, p1, eps), rule, p2);
          for (int sigma : {1, -1})
            if (feasible_sigma(t, coeffs, true, sigma)) frontier.push_back({t, sigma});
        }
      }

  for (int len = 3; len <= max_len; ++len) {
    std::set<EnumEntry> level;
    for (const auto& node : frontier) level.insert({node.traj.par, node.traj.eps});
    out.sets[len].assign(level.begin(), level.end());
    if (len == max_len) break;
    std::vector<Node> next;
    for (const auto& node : frontier) {
      size_t n = node.traj.par.size();
      State st = pair_state(node.traj.par[n - 2], node.traj.par[n - 1]);
      std::vector<int> nexts = (st == State::OO) ? std::vector<int>{1, 2} : std::vector<int>{1};
      for (int p : nexts) {
        SymTraj t = sym_extend(node.traj, rule, p);
        if (feasible_sigma(t, coeffs, true, node.sigma)) next.push_back({t, node.sigma});
      }
      if (next.size() > frontier_cap) {
        out.truncated = true;
        break;
      }
    }
    frontier = std::move(next);
    if (out.truncated) break;
  }
  return out;
}

// Words with a descendant at the deepest enumerated level; the rest are
// dead ends whose whole subtree dies before max_len.
inline std::set<EnumEntry> live_words(const EnumResult& e) {
  std::set<EnumEntry> live;
  if (e.sets.empty()) return live;
  int deepest = e.sets.rbegin()->first;
  for (const auto& entry : e.sets.at(deepest)) {
    live.insert(entry);
    Word w = entry.word;
    while (static_cast<int>(w.size()) > 3) {
      w.pop_back();
      live.insert({w, entry.eps});
    }
  }
  return live;
}

}  // namespace collatz2
