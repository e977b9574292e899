#pragma once

#include <fstream>
#include <set>
#include <sstream>

#include "collatz2/rules.hpp"

namespace collatz2 {

// Generalized first-order map n -> a_i n + b_i when n = i (mod m), residues
// indexed 0..m-1. Closure requires m*a_i and i*a_i + b_i to be integers, so
// with n = i + k*m the image is the all-integer A_i*k + B_i.
struct ModMapSpec {
  long m = 0;
  std::vector<std::pair<Rat, Rat>> rules;  // (a_i, b_i) per residue

  bool validated = false;
  std::vector<Int> A, B;  // A_i = m*a_i, B_i = i*a_i + b_i
};

inline bool mm_validate(ModMapSpec& spec) {
  spec.validated = false;
  if (spec.m <= 0 || static_cast<long>(spec.rules.size()) != spec.m) return false;
  spec.A.clear();
  spec.B.clear();
  for (long i = 0; i < spec.m; ++i) {
    Rat ma = Rat(static_cast<long>(spec.m)) * spec.rules[i].first;
    Rat ib = Rat(static_cast<long>(i)) * spec.rules[i].first + spec.rules[i].second;
    if (!rat_is_int(ma) || !rat_is_int(ib)) return false;
    spec.A.push_back(ma.get_num());
    spec.B.push_back(ib.get_num());
  }
  spec.validated = true;
  return true;
}

// Text format: first non-comment line is m, then one "a_i b_i" pair per line,
// exact rationals as p/q.
inline ModMapSpec mm_parse(std::istream& in) {
  ModMapSpec spec;
  std::string line;
  std::vector<std::string> tokens;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  if (tokens.empty()) throw std::invalid_argument("modmap: empty spec");
  spec.m = std::stol(tokens[0]);
  if (spec.m <= 0 || tokens.size() != 1 + 2 * static_cast<size_t>(spec.m))
    throw std::invalid_argument("modmap: expected m followed by m rational pairs");
  for (long i = 0; i < spec.m; ++i)
    spec.rules.push_back({rat_parse(tokens[1 + 2 * i]), rat_parse(tokens[2 + 2 * i])});
  return spec;
}

inline ModMapSpec mm_parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("modmap: cannot open " + path);
  return mm_parse(in);
}

inline Int mm_step(const ModMapSpec& spec, const Int& n) {
  if (!spec.validated) throw std::logic_error("mm_step: spec not validated");
  Int i, k;
  mpz_fdiv_qr(k.get_mpz_t(), i.get_mpz_t(), n.get_mpz_t(), Int(spec.m).get_mpz_t());
  return spec.A[i.get_si()] * k + spec.B[i.get_si()];
}

// int64 fast path with __int128 overflow guard; falls back to the exact path
// when coefficients or magnitudes leave the guarded range.
inline bool mm_step_i64(const ModMapSpec& spec, long long n, long long mag_cap, long long& out) {
  long long i = n % spec.m;
  if (i < 0) i += spec.m;
  long long k = (n - i) / spec.m;
  if (!spec.A[i].fits_slong_p() || !spec.B[i].fits_slong_p()) return false;
  __int128 w = static_cast<__int128>(spec.A[i].get_si()) * k + spec.B[i].get_si();
  if (w > mag_cap || w < -static_cast<__int128>(mag_cap)) {
    out = w > 0 ? mag_cap + 1 : -(mag_cap + 1);
    return true;
  }
  out = static_cast<long long>(w);
  return true;
}

// First-order maps have no scaling homogeneity, so cycles are canonicalized
// by rotation only.
inline Cycle mm_canonical(std::vector<Int> values) {
  size_t n = values.size(), best = 0;
  for (size_t i = 1; i < n; ++i)
    for (size_t k = 0; k < n; ++k) {
      int c = cmp(values[(i + k) % n], values[(best + k) % n]);
      if (c < 0) {
        best = i;
        break;
      }
      if (c > 0) break;
    }
  std::vector<Int> rot(n);
  for (size_t k = 0; k < n; ++k) rot[k] = values[(best + k) % n];
  return Cycle{rot};
}

struct MMOutcome {
  std::vector<Cycle> cycles;  // canonical, sorted
  long long diverged = 0;
  long long undecided = 0;
};

namespace detail {

// Brent cycle detection on the int64 fast path: constant memory per seed.
inline void mm_classify_seed(const ModMapSpec& spec, long long n0, long long max_steps, long long mag_cap,
                             std::set<Cycle>& cycles, long long& diverged, long long& undecided) {
  long long power = 1, lam = 1;
  long long tortoise = n0, hare;
  if (!mm_step_i64(spec, n0, mag_cap, hare)) {
    ++undecided;
    return;
  }
  long long steps = 0;
  while (tortoise != hare) {
    if (++steps > max_steps || hare > mag_cap || hare < -mag_cap) {
      (hare > mag_cap || hare < -mag_cap ? diverged : undecided)++;
      return;
    }
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    mm_step_i64(spec, hare, mag_cap, hare);
    ++lam;
  }
  std::vector<Int> vals;
  long long v = tortoise;
  for (long long i = 0; i < lam; ++i) {
    vals.push_back(to_int(v));
    mm_step_i64(spec, v, mag_cap, v);
  }
  cycles.insert(mm_canonical(vals));
}

}  // namespace detail

// Simulates every seed in [lo, hi] to its outcome. Purely empirical: cycles
// are conjectured, divergence and step-cap hits are counted, never hidden.
inline MMOutcome conjecture_cycles(const ModMapSpec& spec, long long lo, long long hi,
                                   long long max_steps = 10000, long long mag_cap = 1000000000000000000LL) {
  if (!spec.validated) throw std::logic_error("conjecture_cycles: spec not validated");
  long long safe_cap = std::min(mag_cap, 2000000000000000000LL);
  std::set<Cycle> cycles;
  MMOutcome out;
  for (long long n = lo; n <= hi; ++n)
    detail::mm_classify_seed(spec, n, max_steps, safe_cap, cycles, out.diverged, out.undecided);
  out.cycles.assign(cycles.begin(), cycles.end());
  return out;
}

inline MMOutcome conjecture_cycles_range(const ModMapSpec& spec, long long range, long long max_steps = 10000,
                                         long long mag_cap = 1000000000000000000LL) {
  return conjecture_cycles(spec, -range, range, max_steps, mag_cap);
}

inline ModMapSpec classical_3x1() {
  ModMapSpec spec;
  spec.m = 2;
  spec.rules = {{rat(1, 2), Rat(0)}, {rat(3, 2), rat(1, 2)}};
  mm_validate(spec);
  return spec;
}

}  // namespace collatz2
