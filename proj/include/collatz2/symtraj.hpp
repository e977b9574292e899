#pragma once

#include "collatz2/ineq.hpp"
#include "collatz2/scheme.hpp"

namespace collatz2 {

// Parity word entry convention: 1 = odd, 2 = even (0 is reserved for "either"
// in human-facing output, where the paper's 0/1 alphabet is used instead).
using Word = std::vector<int>;

inline std::string word_str01(const Word& w) {  // paper alphabet: 0 = even
  std::string s;
  for (int c : w) s += (c == 1 ? '1' : '0');
  return s;
}

inline std::string word_str12(const Word& w) {
  std::string s;
  for (int c : w) s += (c == 1 ? '1' : '2');
  return s;
}

inline Word word_from01(const std::string& s) {
  Word w;
  for (char c : s) w.push_back(c == '1' ? 1 : 2);
  return w;
}

inline State pair_state(int p_prev, int p_cur) {
  return state_of(p_prev == 1, p_cur == 1);
}

// Symbolic trajectory under the max-element convention: x(-1) = a,
// x(0) = eps*b with a, b symbolic positive, branch choices given by the
// assumed parities. Forms are linear in {a, b}.
struct SymTraj {
  int eps = -1;  // x(0) = eps * b
  Word par;
  std::vector<LinForm> forms;
};

inline SymTraj sym_seed(int p0, int p1, int eps) {
  SymTraj t;
  t.eps = eps;
  t.par = {p0, p1};
  t.forms = {LinForm::sym("a"), LinForm::sym("b", Rat(eps))};
  return t;
}

// Appends the branch-map image of the last two forms; the branch is selected
// by the last two assumed parities, the new entry's parity is assumed, not
// derived (mod-2 reasoning on halved coefficients is unsound).
inline SymTraj sym_extend(const SymTraj& traj, const RuleSpec& rule, int next_parity) {
  if (traj.forms.size() < 2) throw std::invalid_argument("sym_extend: need two forms");
  SymTraj out = traj;
  size_t n = traj.forms.size();
  auto b = rule.branch(pair_state(traj.par[n - 2], traj.par[n - 1]));
  Rat h = b.halved ? rat(1, 2) : Rat(1);
  LinForm w = h * (Rat(b.cu) * traj.forms[n - 2] + Rat(b.cv) * traj.forms[n - 1]);
  out.forms.push_back(w);
  out.par.push_back(next_parity);
  return out;
}

inline SymTraj sym_traj_of_word(const RuleSpec& rule, const Word& w, int eps) {
  SymTraj t = sym_seed(w[0], w[1], eps);
  for (size_t i = 2; i < w.size(); ++i) t = sym_extend(t, rule, w[i]);
  return t;
}

namespace detail {

// Exact feasibility of a homogeneous 2-variable system over a > 0, b > 0:
// scale a = 1 and intersect the constraint intervals for t = b/a in (0, inf).
// Equivalent to Fourier-Motzkin on the same system (property-tested).
struct TInterval {
  Rat lo = Rat(0);
  bool lo_strict = true;  // t > 0
  std::optional<Rat> hi;
  bool hi_strict = false;
  bool empty = false;

  void add(const Rat& ca, const Rat& cb, Rel rel) {  // ca + cb*t REL 0
    if (empty) return;
    if (cb == 0) {
      if (rel == Rel::Le ? ca > 0 : ca >= 0) empty = true;
      return;
    }
    Rat bound = -ca / cb;
    if (cb > 0) {  // t <= bound (or <)
      if (!hi || bound < *hi || (bound == *hi && rel == Rel::Lt)) {
        hi = bound;
        hi_strict = rel == Rel::Lt;
      }
    } else {  // t >= bound (or >)
      if (bound > lo || (bound == lo && rel == Rel::Lt)) {
        lo = bound;
        lo_strict = rel == Rel::Lt;
      }
    }
    if (hi && (*hi < lo || (*hi == lo && (lo_strict || hi_strict)))) empty = true;
  }

  bool feasible() const { return !empty; }
};

}  // namespace detail

// Feasibility of the max-element convention over the reals, for one sign
// branch sigma of X = |form[2]|:
//   a > 0, b > 0, |form[0]| < X, |form[1]| < X, |form[i]| <= X,
//   X = sigma*form[2]  (with sigma*form[2] >= 0),
// and, iff as_cycle, the necessary condition
//   X <= c1|f[n-2]| + c2|f[n-1]| expanded over four sign branches.
// Strictness on the first two entries places the maximal element at x(1);
// x(1) can always be chosen strictly above its two cyclic predecessors (cycles
// valued in {-1,0,1} are handled by direct small-seed simulation instead).
// The X equality is substituted away, leaving a homogeneous 2-variable system
// decided by exact interval intersection.
inline bool feasible_sigma(const SymTraj& traj, const BoundCoeffs& coeffs, bool as_cycle, int sigma) {
  size_t n = traj.forms.size();
  if (n < 3) throw std::invalid_argument("feasible: need length >= 3");
  LinForm X = Rat(sigma) * traj.forms[2];  // X := sigma*form[2]
  detail::TInterval base;
  auto add = [](detail::TInterval& iv, const LinForm& f, Rel rel) {
    iv.add(f.coeff("a"), f.coeff("b"), rel);
  };
  add(base, -X, Rel::Le);                  // sigma*form[2] >= 0
  add(base, traj.forms[0] - X, Rel::Lt);   // |f0| < X
  add(base, -traj.forms[0] - X, Rel::Lt);
  add(base, traj.forms[1] - X, Rel::Lt);
  add(base, -traj.forms[1] - X, Rel::Lt);
  for (size_t i = 3; i < n && base.feasible(); ++i) {
    add(base, traj.forms[i] - X, Rel::Le);
    add(base, -traj.forms[i] - X, Rel::Le);
  }
  if (!base.feasible()) return false;
  if (!as_cycle) return true;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) {
      detail::TInterval iv = base;
      LinForm g1 = Rat(s1) * traj.forms[n - 2], g2 = Rat(s2) * traj.forms[n - 1];
      add(iv, -g1, Rel::Le);
      add(iv, -g2, Rel::Le);
      add(iv, X - coeffs.c1 * g1 - coeffs.c2 * g2, Rel::Le);
      if (iv.feasible()) return true;
    }
  return false;
}

inline bool feasible(const SymTraj& traj, const BoundCoeffs& coeffs, bool as_cycle) {
  return feasible_sigma(traj, coeffs, as_cycle, 1) || feasible_sigma(traj, coeffs, as_cycle, -1);
}

}  // namespace collatz2
