#pragma once

#include <numeric>
#include <set>

#include "collatz2/rules.hpp"

namespace collatz2 {

struct ScanParams {
  int grid = 100;
  long long max_steps = 4000;
  long long max_mag = 1000000000000LL;
};

// Empirical sweep over all seeds |a|,|b| <= grid with gcd(a,b) = 1. Trajectory
// maxima are collected on the half-plane a > 0 (or a = 0, b > 0); negating a
// seed negates its whole trajectory, so cycles are closed under negation
// afterwards.
struct ScanResult {
  struct SeedMax {
    long long a, b, maxabs;
  };
  std::vector<SeedMax> seed_maxima;
  std::vector<Cycle> cycles;  // canonical, sorted, negation-closed
  long long undecided = 0;
  long long diverged = 0;
  bool has_witness = false;
  long long witness_a = 0, witness_b = 0;  // one diverging seed
};

inline ScanResult run_scan(const RuleSpec& rule, const ScanParams& params = {}) {
  ScanResult out;
  std::set<Cycle> cycles;
  const int g = params.grid;
  for (long long a = 0; a <= g; ++a) {
    for (long long b = -g; b <= g; ++b) {
      if (a == 0 && b <= 0) continue;  // half-plane: a>0 or (a=0, b>0)
      if (std::gcd(a, b < 0 ? -b : b) != 1) continue;
      SimResult sim = simulate(rule, a, b, params.max_steps, params.max_mag);
      long long m = 0;
      for (long long x : sim.trajectory) m = std::max(m, x < 0 ? -x : x);
      out.seed_maxima.push_back({a, b, m});
      switch (sim.outcome) {
        case Outcome::CycleReached: {
          cycles.insert(sim.cycle);
          std::vector<Int> neg = sim.cycle.values;
          for (auto& v : neg) v = -v;
          cycles.insert(canonical_cycle(neg));
          break;
        }
        case Outcome::Diverged:
          ++out.diverged;
          if (!out.has_witness) {
            out.has_witness = true;
            out.witness_a = a;
            out.witness_b = b;
          }
          break;
        case Outcome::Undecided:
          ++out.undecided;
          break;
      }
    }
  }
  out.cycles.assign(cycles.begin(), cycles.end());
  return out;
}

}  // namespace collatz2
