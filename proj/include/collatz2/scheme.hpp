#pragma once

#include <optional>
#include <variant>

#include "collatz2/linform.hpp"
#include "collatz2/scan.hpp"

namespace collatz2 {

// Coefficients of the fundamental inequality |x(n)| <= c1|x(-1)| + c2|x(0)|.
// c1, c2 >= 1 is required for the base case |x(-1)| <= A, |x(0)| <= A.
struct BoundCoeffs {
  Rat c1, c2;
  bool ok() const { return c1 >= 1 && c2 >= 1; }
};

// Forms are over symbols u = x(n-1), v = x(n); a form F in state s asserts
// |F(x(n-1), x(n))| <= A whenever (x(n-1), x(n)) has parity pattern s.
inline const std::array<State, 3>& scheme_states() {
  static const std::array<State, 3> s = {State::OO, State::OE, State::EO};
  return s;
}

struct Scheme {
  std::array<std::vector<LinForm>, 3> forms;  // indexed by State OO/OE/EO
  BoundCoeffs coeffs;

  std::vector<LinForm>& at(State s) { return forms[static_cast<int>(s)]; }
  const std::vector<LinForm>& at(State s) const { return forms[static_cast<int>(s)]; }
};

// target == sum coeff_i * hyp_i with sum |coeff_i| <= 1.
struct DerivationStep {
  State from, to;
  LinForm source;  // the form of `to` being discharged
  LinForm target;  // source rewritten into `from` coordinates
  std::vector<std::pair<LinForm, Rat>> combo;
};

struct SchemeProof {
  Scheme scheme;
  std::vector<DerivationStep> transitions;
  bool base_ok = false;
};

struct NonClosure {
  State state;
  LinForm target;
  std::string what;
};

namespace detail {

inline std::pair<Rat, Rat> uv(const LinForm& f) { return {f.coeff("u"), f.coeff("v")}; }

inline std::optional<std::vector<std::pair<LinForm, Rat>>> solve_pair(const LinForm& target, const LinForm& L1,
                                                                      const LinForm& L2) {
  auto [t1, t2] = uv(target);
  auto [a, c] = uv(L1);
  auto [b, d] = uv(L2);
  Rat det = a * d - b * c;
  if (det == 0) return std::nullopt;
  Rat x = (t1 * d - b * t2) / det;
  Rat y = (a * t2 - t1 * c) / det;
  if (rat_abs(x) + rat_abs(y) > 1) return std::nullopt;
  std::vector<std::pair<LinForm, Rat>> combo;
  if (x != 0) combo.push_back({L1, x});
  if (y != 0) combo.push_back({L2, y});
  return combo;
}

}  // namespace detail

// Triangle-inequality combination search: singles with coefficient +-1, then
// all pairs (exact 2x2 solve), then triples (l1-minimal point on the solution
// line). First-found order: hypotheses in insertion order, sizes ascending.
inline std::optional<std::vector<std::pair<LinForm, Rat>>> derive(const LinForm& target,
                                                                  const std::vector<LinForm>& hyps,
                                                                  int max_terms = 3) {
  for (const auto& L : hyps) {
    if (L == target) return std::vector<std::pair<LinForm, Rat>>{{L, Rat(1)}};
    if (-L == target) return std::vector<std::pair<LinForm, Rat>>{{L, Rat(-1)}};
  }
  if (max_terms < 2) return std::nullopt;
  for (size_t i = 0; i < hyps.size(); ++i)
    for (size_t j = i + 1; j < hyps.size(); ++j)
      if (auto c = detail::solve_pair(target, hyps[i], hyps[j])) return c;
  if (max_terms < 3) return std::nullopt;
  // Triples: solutions form a line c0 + t*n; the l1 minimum sits at a point
  // where some coordinate vanishes, i.e. at a breakpoint.
  for (size_t i = 0; i < hyps.size(); ++i)
    for (size_t j = i + 1; j < hyps.size(); ++j)
      for (size_t k = j + 1; k < hyps.size(); ++k) {
        auto [a1, a2] = detail::uv(hyps[i]);
        auto [b1, b2] = detail::uv(hyps[j]);
        auto [c1, c2] = detail::uv(hyps[k]);
        auto [t1, t2] = detail::uv(target);
        // Need a particular solution; try pairs spanning the space with the
        // third coefficient zero, then walk breakpoints of the null line.
        Rat detab = a1 * b2 - b1 * a2;
        if (detab == 0) continue;
        Rat x0 = (t1 * b2 - b1 * t2) / detab;
        Rat y0 = (a1 * t2 - t1 * a2) / detab;
        // Null direction with z free: x = -(c1*b2 - b1*c2)/det * z, etc.
        Rat nx = -(c1 * b2 - b1 * c2) / detab;
        Rat ny = -(a1 * c2 - c1 * a2) / detab;
        std::vector<Rat> breakpoints = {Rat(0)};
        if (nx != 0) breakpoints.push_back(-x0 / nx);
        if (ny != 0) breakpoints.push_back(-y0 / ny);
        std::optional<std::vector<std::pair<LinForm, Rat>>> best;
        Rat best_norm(0);
        for (const Rat& t : breakpoints) {
          Rat x = x0 + t * nx, y = y0 + t * ny, z = t;
          Rat norm = rat_abs(x) + rat_abs(y) + rat_abs(z);
          if (norm > 1) continue;
          if (best && best_norm <= norm) continue;
          std::vector<std::pair<LinForm, Rat>> combo;
          if (x != 0) combo.push_back({hyps[i], x});
          if (y != 0) combo.push_back({hyps[j], y});
          if (z != 0) combo.push_back({hyps[k], z});
          best = combo;
          best_norm = norm;
        }
        if (best) return best;
      }
  return std::nullopt;
}

// Rewrites a form G of the successor state into the predecessor's (u,v)
// coordinates through the branch map w = (cu*u + cv*v)/h:
//   G(u',v') at (u',v') = (v, w)  =>  G_v*(cu/h) * u + (G_u + G_v*(cv/h)) * v.
inline LinForm rewrite_through(const RuleSpec& rule, State from, const LinForm& g) {
  auto b = rule.branch(from);
  Rat h = b.halved ? rat(1, 2) : Rat(1);
  Rat gu = g.coeff("u"), gv = g.coeff("v");
  LinForm out;
  out.set("u", gv * Rat(b.cu) * h);
  out.set("v", gu + gv * Rat(b.cv) * h);
  return out;
}

// Base case: |p| <= c1 and |q| <= c2 for every form p*u + q*v is necessary and
// sufficient for |p*x(-1) + q*x(0)| <= c1|x(-1)| + c2|x(0)| over all integers.
inline bool check_base(const Scheme& scheme) {
  for (State s : scheme_states())
    for (const auto& f : scheme.at(s))
      if (rat_abs(f.coeff("u")) > scheme.coeffs.c1 || rat_abs(f.coeff("v")) > scheme.coeffs.c2) return false;
  return true;
}

using CloseResult = std::variant<SchemeProof, NonClosure>;

// Add-hypotheses fixpoint: starts every state at {u, v}; each obligation
// (s -> s', G in forms(s')) must be derivable from forms(s) after rewriting;
// failures add the rewritten form to forms(s) and coverage restarts.
inline CloseResult close_scheme(const RuleSpec& rule, const BoundCoeffs& coeffs, int max_forms = 12) {
  if (!coeffs.ok()) throw std::invalid_argument("close_scheme: coefficients must be >= 1");
  Scheme scheme;
  scheme.coeffs = coeffs;
  for (State s : scheme_states()) scheme.at(s) = {LinForm::sym("u"), LinForm::sym("v")};

  bool changed = true;
  while (changed) {
    changed = false;
    for (State s : scheme_states()) {
      for (State t : successors(s)) {
        for (size_t gi = 0; gi < scheme.at(t).size(); ++gi) {
          LinForm target = rewrite_through(rule, s, scheme.at(t)[gi]);
          if (derive(target, scheme.at(s))) continue;
          if (static_cast<int>(scheme.at(s).size()) >= max_forms)
            return NonClosure{s, target, "form cap reached while discharging " + scheme.at(t)[gi].str() + " for " +
                                             std::string(state_name(s)) + "->" + state_name(t)};
          scheme.at(s).push_back(target);
          changed = true;
        }
      }
    }
  }

  SchemeProof proof;
  proof.scheme = scheme;
  for (State s : scheme_states())
    for (State t : successors(s))
      for (const auto& g : scheme.at(t)) {
        LinForm target = rewrite_through(rule, s, g);
        auto combo = derive(target, scheme.at(s));
        if (!combo) return NonClosure{s, target, "fixpoint left an underivable obligation"};
        proof.transitions.push_back({s, t, g, target, *combo});
      }
  proof.base_ok = check_base(scheme);
  return proof;
}

// Fixed candidate enumeration: reduced p/q with q <= 4, 1 <= p/q <= cap,
// pairs ordered by (c1+c2, c1). The prover tries survivors in this order.
inline std::vector<Rat> bound_candidate_values(const Rat& cap = Rat(4)) {
  std::set<Rat> vals;
  for (long q = 1; q <= 4; ++q)
    for (long p = q; Rat(p, q) <= cap; ++p)
      if (std::gcd(p, q) == 1) vals.insert(rat(p, q));
  return {vals.begin(), vals.end()};
}

inline std::vector<BoundCoeffs> bound_candidates(const Rat& cap = Rat(4)) {
  auto vals = bound_candidate_values(cap);
  std::vector<BoundCoeffs> out;
  for (const Rat& c1 : vals)
    for (const Rat& c2 : vals) out.push_back({c1, c2});
  std::stable_sort(out.begin(), out.end(), [](const BoundCoeffs& x, const BoundCoeffs& y) {
    if (x.c1 + x.c2 != y.c1 + y.c2) return x.c1 + x.c2 < y.c1 + y.c2;
    return x.c1 < y.c1;
  });
  return out;
}

inline bool candidate_consistent(const BoundCoeffs& c, const ScanResult& scan) {
  for (const auto& s : scan.seed_maxima) {
    // maxabs <= c1*|a| + c2*|b| exactly.
    if (to_rat(s.maxabs) > c.c1 * to_rat(s.a < 0 ? -s.a : s.a) + c.c2 * to_rat(s.b < 0 ? -s.b : s.b)) return false;
  }
  return true;
}

inline std::vector<BoundCoeffs> surviving_candidates(const ScanResult& scan, const Rat& cap = Rat(4)) {
  std::vector<BoundCoeffs> out;
  for (const auto& c : bound_candidates(cap))
    if (candidate_consistent(c, scan)) out.push_back(c);
  return out;
}

// Smallest candidate consistent with the grid data; none is evidence of
// unboundedness (a legitimate outcome, not an error).
inline std::optional<BoundCoeffs> conjecture_bound(const RuleSpec& rule, int grid = 100, const Rat& cap = Rat(4)) {
  ScanParams p;
  p.grid = grid;
  auto scan = run_scan(rule, p);
  auto survivors = surviving_candidates(scan, cap);
  if (survivors.empty()) return std::nullopt;
  return survivors.front();
}

}  // namespace collatz2
