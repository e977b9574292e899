#pragma once

#include "collatz2/detcond.hpp"

namespace collatz2 {

struct CycleSolution {
  Word word;
  std::vector<long> exponents;  // empty for direct word candidates
  Int seed_a, seed_b;
  Cycle cycle;  // canonical
};

namespace detail {

// Rank-one null direction of M - I, scaled to coprime integers.
inline std::optional<std::array<Int, 2>> rank1_null(const Mat2& N) {
  std::array<Rat, 2> v{};
  if (N.m[0][0] != 0 || N.m[0][1] != 0)
    v = {N.m[0][1], -N.m[0][0]};
  else if (N.m[1][0] != 0 || N.m[1][1] != 0)
    v = {N.m[1][1], -N.m[1][0]};
  else
    return std::nullopt;
  Int d;
  mpz_lcm(d.get_mpz_t(), v[0].get_den().get_mpz_t(), v[1].get_den().get_mpz_t());
  Int w0 = v[0].get_num() * (d / v[0].get_den());
  Int w1 = v[1].get_num() * (d / v[1].get_den());
  Int g;
  mpz_gcd(g.get_mpz_t(), w0.get_mpz_t(), w1.get_mpz_t());
  if (g != 0) {
    w0 /= g;
    w1 /= g;
  }
  return std::array<Int, 2>{w0, w1};
}

// Checks one concrete seed against the candidate word: the trajectory must
// match the assumed parities, close after period = L-1 steps, and re-verify
// as a cycle; axis seeds are discarded (handled by the small-seed cases).
inline std::optional<CycleSolution> try_seed(const RuleSpec& rule, const Word& w, const Int& a, const Int& b) {
  if (a == 0 || b == 0) return std::nullopt;
  size_t L = w.size();
  std::vector<Int> vals = iterate_values(rule, a, b, static_cast<int>(L) + 1);
  for (size_t j = 0; j < L; ++j)
    if ((int_odd(vals[j]) ? 1 : 2) != w[j]) return std::nullopt;
  if (vals[L - 1] != a || vals[L] != b) return std::nullopt;
  std::vector<Int> period(vals.begin(), vals.begin() + (L - 1));
  if (!verify_cycle(rule, period)) return std::nullopt;
  CycleSolution sol;
  sol.word = w;
  sol.seed_a = a;
  sol.seed_b = b;
  sol.cycle = canonical_cycle(period);
  return sol;
}

}  // namespace detail

// Solves (M - I) v = 0 for the candidate word and extracts verified integer
// cycles. A trivial null space yields nothing; a full 2-dimensional one (M=I)
// processes both basis directions; negated seeds give the mirror cycles.
inline std::vector<CycleSolution> extract_cycles_word(const RuleSpec& rule, const Word& w) {
  std::vector<CycleSolution> out;
  if (w.size() < 3) return out;
  Mat2 N = word_product(rule, w) - Mat2::identity();
  std::vector<std::array<Int, 2>> candidates;
  if (N == Mat2{}) {
    candidates.push_back({Int(1), Int(0)});
    candidates.push_back({Int(0), Int(1)});
  } else if (N.det() == 0) {
    if (auto v = detail::rank1_null(N)) candidates.push_back(*v);
  }
  for (const auto& v : candidates)
    for (int sign : {1, -1})
      if (auto sol = detail::try_seed(rule, w, Int(sign) * v[0], Int(sign) * v[1])) out.push_back(*sol);
  return out;
}

inline std::vector<CycleSolution> extract_cycles(const RuleSpec& rule, const Family& f,
                                                 const std::vector<long>& zero) {
  auto out = extract_cycles_word(rule, f.instantiate(zero));
  for (auto& sol : out) sol.exponents = zero;
  return out;
}

// Direct determinant treatment of every enumerated word: the exhaustive
// small-period complement of the family analyses.
inline std::vector<CycleSolution> stage_a_cycles(const RuleSpec& rule, const EnumResult& e) {
  std::vector<CycleSolution> out;
  for (const auto& [len, entries] : e.sets)
    for (const auto& ent : entries)
      for (auto& sol : extract_cycles_word(rule, ent.word)) out.push_back(sol);
  return out;
}

// Orbits of the axis and unit seeds. These cover every cycle containing a
// zero (its neighbors are forced to +-1 by coprimality) and every cycle
// valued in {-1, 1}, the two shapes invisible to the strict-max enumeration.
struct SmallSeedResult {
  std::vector<Cycle> cycles;  // canonical, sorted
  bool undecided = false;
};

inline SmallSeedResult small_seed_cycles(const RuleSpec& rule, long long max_steps = 100000,
                                         long long max_mag = 1000000000000LL) {
  SmallSeedResult out;
  std::set<Cycle> cs;
  const std::pair<long long, long long> seeds[] = {{0, 1},  {0, -1}, {1, 0},  {-1, 0},
                                                   {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
  for (auto [a, b] : seeds) {
    SimResult sim = simulate(rule, a, b, max_steps, max_mag);
    if (sim.outcome == Outcome::CycleReached)
      cs.insert(sim.cycle);
    else
      out.undecided = true;  // never silently dropped
  }
  out.cycles.assign(cs.begin(), cs.end());
  return out;
}

}  // namespace collatz2
