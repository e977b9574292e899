#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "collatz2/rat.hpp"

namespace collatz2 {

// Parity state of a consecutive pair (x(n-1), x(n)). Under gcd(a,b)=1 starts
// only OO, OE, EO occur: the halved branches fire on matching parities and the
// mixed branches always output odd values.
enum class State : int { OO = 0, OE = 1, EO = 2, EE = 3 };

inline const char* state_name(State s) {
  switch (s) {
    case State::OO: return "OO";
    case State::OE: return "OE";
    case State::EO: return "EO";
    case State::EE: return "EE";
  }
  return "?";
}

inline State state_of(bool prev_odd, bool cur_odd) {
  if (prev_odd) return cur_odd ? State::OO : State::OE;
  return cur_odd ? State::EO : State::EE;
}

// One of the 256 parity-split second-order rules, identified by the sign
// octuple (a1..a8) in branch order EE, OO, OE, EO:
//   (even,even): (a1*u + a2*v)/2
//   (odd, odd ): (a3*u + a4*v)/2
//   (odd, even):  a5*u + a6*v
//   (even,odd ):  a7*u + a8*v
// The AGKL 4-tuple (alpha,beta,gamma,delta) embeds as a1=a3=alpha, a2=a4=beta,
// a5=a7=gamma, a6=a8=delta; this sign-position convention is the one
// consistent with the published cycle data (validated in tests).
struct RuleSpec {
  std::array<int, 8> a{};

  std::string id() const {
    std::string s;
    for (int x : a) s += (x > 0 ? '+' : '-');
    return s;
  }

  static RuleSpec from_id(const std::string& s) {
    if (s.size() != 8) throw std::invalid_argument("rule id must have 8 signs: " + s);
    RuleSpec r;
    for (size_t i = 0; i < 8; ++i) {
      if (s[i] == '+')
        r.a[i] = 1;
      else if (s[i] == '-')
        r.a[i] = -1;
      else
        throw std::invalid_argument("rule id must be over {+,-}: " + s);
    }
    return r;
  }

  static RuleSpec from_index(int idx) {  // 0..255, bit i set => a[i] = -1
    RuleSpec r;
    for (int i = 0; i < 8; ++i) r.a[i] = (idx >> i) & 1 ? -1 : 1;
    return r;
  }

  int index() const {
    int idx = 0;
    for (int i = 0; i < 8; ++i)
      if (a[i] < 0) idx |= 1 << i;
    return idx;
  }

  static RuleSpec from_agkl(int alpha, int beta, int gamma, int delta) {
    RuleSpec r;
    r.a = {alpha, beta, alpha, beta, gamma, delta, gamma, delta};
    return r;
  }

  // True when the rule lies in the AGKL 16-rule subfamily.
  bool is_agkl(std::array<int, 4>* tuple = nullptr) const {
    if (a[0] != a[2] || a[1] != a[3] || a[4] != a[6] || a[5] != a[7]) return false;
    if (tuple) *tuple = {a[0], a[1], a[4], a[5]};
    return true;
  }

  struct Branch {
    int cu, cv;
    bool halved;
  };

  Branch branch(State s) const {
    switch (s) {
      case State::EE: return {a[0], a[1], true};
      case State::OO: return {a[2], a[3], true};
      case State::OE: return {a[4], a[5], false};
      case State::EO: return {a[6], a[7], false};
    }
    throw std::logic_error("bad state");
  }

  bool operator==(const RuleSpec& o) const { return a == o.a; }
};

// Accepts an 8-sign id, an AGKL 4-tuple "a,b,c,d" over {-1,1}, or the named
// rules CL and E6.
inline RuleSpec parse_rule(const std::string& text) {
  if (text == "CL") return RuleSpec::from_agkl(1, 1, -1, 1);
  if (text == "E6") return RuleSpec::from_agkl(-1, 1, -1, 1);
  if (text.size() == 8 && text.find(',') == std::string::npos) return RuleSpec::from_id(text);
  std::array<int, 4> t{};
  size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    size_t next = text.find(',', pos);
    std::string tok = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (tok == "1" || tok == "+1")
      t[i] = 1;
    else if (tok == "-1")
      t[i] = -1;
    else
      throw std::invalid_argument("bad rule spec: " + text);
    if (i < 3) {
      if (next == std::string::npos) throw std::invalid_argument("bad rule spec: " + text);
      pos = next + 1;
    }
  }
  return RuleSpec::from_agkl(t[0], t[1], t[2], t[3]);
}

// Universal successor graph over the reachable states; identical for all 256
// rules (mixed branches output odd, halved odd-odd output has free parity).
inline std::vector<State> successors(State s) {
  switch (s) {
    case State::OO: return {State::OO, State::OE};
    case State::OE: return {State::EO};
    case State::EO: return {State::OO};
    case State::EE: throw std::invalid_argument("successors: EE unreachable under normalization");
  }
  throw std::logic_error("bad state");
}

inline Int step(const RuleSpec& rule, const Int& u, const Int& v) {
  auto b = rule.branch(state_of(int_odd(u), int_odd(v)));
  Int w = Int(b.cu) * u + Int(b.cv) * v;
  if (b.halved) w /= 2;
  return w;
}

inline long long step_i64(const RuleSpec& rule, long long u, long long v) {
  auto b = rule.branch(state_of((u & 1) != 0, (v & 1) != 0));
  long long w = b.cu * u + b.cv * v;  // |u|,|v| <= 4e17 keeps this exact
  if (b.halved) w /= 2;
  return w;
}

// Pure iteration: first `count` values x(-1), x(0), ..., x(count-2) with no
// cycle detection (used for verbatim trajectory printing and verification).
inline std::vector<Int> iterate_values(const RuleSpec& rule, const Int& a, const Int& b, int count) {
  std::vector<Int> out;
  if (count <= 0) return out;
  out.push_back(a);
  if (count == 1) return out;
  out.push_back(b);
  for (int i = 2; i < count; ++i) out.push_back(step(rule, out[i - 2], out[i - 1]));
  return out;
}

inline std::vector<Int> iterate_values(const RuleSpec& rule, long long a, long long b, int count) {
  return iterate_values(rule, to_int(a), to_int(b), count);
}

struct Cycle {
  std::vector<Int> values;

  bool operator==(const Cycle& o) const { return values == o.values; }
  bool operator<(const Cycle& o) const {
    if (values.size() != o.values.size()) return values.size() < o.values.size();
    return values < o.values;
  }

  std::string str() const {
    std::string s = "(";
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) s += ",";
      s += values[i].get_str();
    }
    return s + ")";
  }
};

// Divides out the largest odd common divisor. Even common factors are kept.
inline std::pair<Int, Int> normalize(const Int& a, const Int& b) {
  if (a == 0 && b == 0) throw std::invalid_argument("normalize: (0,0)");
  Int g = odd_gcd(a, b);
  return {a / g, b / g};
}

// Lexicographically least rotation of the primitive period, odd-gcd reduced.
inline Cycle canonical_cycle(std::vector<Int> values) {
  if (values.empty()) throw std::invalid_argument("canonical_cycle: empty");
  for (size_t p = 1; p <= values.size() / 2; ++p) {
    if (values.size() % p != 0) continue;
    bool periodic = true;
    for (size_t i = p; i < values.size() && periodic; ++i) periodic = values[i] == values[i - p];
    if (periodic) {
      values.resize(p);
      break;
    }
  }
  Int g(0);
  for (const auto& v : values) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  if (g != 0) {
    while (!int_odd(g)) g /= 2;
    for (auto& v : values) v /= g;
  }
  size_t n = values.size(), best = 0;
  for (size_t i = 1; i < n; ++i) {
    for (size_t k = 0; k < n; ++k) {
      int c = cmp(values[(i + k) % n], values[(best + k) % n]);
      if (c < 0) {
        best = i;
        break;
      }
      if (c > 0) break;
    }
  }
  std::vector<Int> rot(n);
  for (size_t k = 0; k < n; ++k) rot[k] = values[(best + k) % n];
  return Cycle{rot};
}

// Applies the rule around the list cyclically and checks it reproduces itself.
inline bool verify_cycle(const RuleSpec& rule, const std::vector<Int>& values) {
  size_t n = values.size();
  if (n == 0) return false;
  for (size_t i = 0; i < n; ++i)
    if (step(rule, values[i], values[(i + 1) % n]) != values[(i + 2) % n]) return false;
  return true;
}

enum class Outcome { CycleReached, Diverged, Undecided };

struct SimResult {
  std::vector<long long> trajectory;  // x(-1), x(0), x(1), ...
  Outcome outcome = Outcome::Undecided;
  Cycle cycle;  // canonical, set when outcome == CycleReached
};

namespace detail {
struct PairHash {
  size_t operator()(const std::pair<long long, long long>& p) const {
    uint64_t x = static_cast<uint64_t>(p.first) * 0x9e3779b97f4a7c15ULL ^ static_cast<uint64_t>(p.second);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return static_cast<size_t>(x);
  }
};
}  // namespace detail

// Cycle detection by hashing visited pairs; the visited map doubles as the
// trajectory index. int64 arithmetic is exact for max_mag <= 4e17.
inline SimResult simulate(const RuleSpec& rule, long long a, long long b, long long max_steps = 100000,
                          long long max_mag = 1000000000000LL) {
  if (max_steps <= 0 || max_mag <= 0) throw std::invalid_argument("simulate: caps must be positive");
  if (max_mag > 400000000000000000LL) throw std::invalid_argument("simulate: max_mag beyond int64-safe range");
  SimResult res;
  res.trajectory = {a, b};
  std::unordered_map<std::pair<long long, long long>, size_t, detail::PairHash> seen;
  seen.reserve(1024);
  seen[{a, b}] = 0;
  for (long long s = 0; s < max_steps; ++s) {
    size_t k = res.trajectory.size();
    long long u = res.trajectory[k - 2], v = res.trajectory[k - 1];
    long long w = step_i64(rule, u, v);
    if (w > max_mag || w < -max_mag) {
      res.trajectory.push_back(w);
      res.outcome = Outcome::Diverged;
      return res;
    }
    res.trajectory.push_back(w);
    auto [it, fresh] = seen.insert({{v, w}, k - 1});
    if (!fresh) {
      size_t j = it->second;  // (traj[j], traj[j+1]) == (traj[k-1], traj[k]), period (k-1)-j
      std::vector<Int> vals;
      for (size_t i = j; i + 1 < k; ++i) vals.push_back(to_int(res.trajectory[i]));
      res.outcome = Outcome::CycleReached;
      res.cycle = canonical_cycle(vals);
      return res;
    }
  }
  res.outcome = Outcome::Undecided;
  return res;
}

// Arbitrary-precision variant for magnitudes beyond the int64-safe range.
inline SimResult simulate_big(const RuleSpec& rule, const Int& a, const Int& b, long long max_steps,
                              const Int& max_mag, std::vector<Int>* big_traj = nullptr) {
  SimResult res;
  std::vector<Int> traj = {a, b};
  std::map<std::pair<Int, Int>, size_t> seen;
  seen[{a, b}] = 0;
  for (long long s = 0; s < max_steps; ++s) {
    size_t k = traj.size();
    Int w = step(rule, traj[k - 2], traj[k - 1]);
    traj.push_back(w);
    if (int_abs(w) > max_mag) {
      res.outcome = Outcome::Diverged;
      break;
    }
    auto [it, fresh] = seen.insert({{traj[k - 1], w}, k - 1});
    if (!fresh) {
      size_t j = it->second;
      std::vector<Int> vals(traj.begin() + j, traj.begin() + (k - 1));
      res.outcome = Outcome::CycleReached;
      res.cycle = canonical_cycle(vals);
      break;
    }
  }
  if (big_traj) *big_traj = traj;
  return res;
}

}  // namespace collatz2
