#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "collatz2/linform.hpp"

namespace collatz2 {

// Constraint "f <= 0" or "f < 0". Homogeneous forms only (no constant term);
// systems needing a >= 1 use a > 0 instead, which is equivalent for real
// feasibility of homogeneous systems.
enum class Rel { Le, Lt };

struct Constraint {
  LinForm f;
  Rel rel = Rel::Le;
};

struct IneqSystem {
  std::vector<std::string> vars;
  std::vector<Constraint> cons;

  void add(const LinForm& f, Rel r) { cons.push_back({f, r}); }
};

namespace detail {

// Scale so the sum of |coefficients| is 1; canonical up to positive scaling.
inline Constraint fm_normalize(const Constraint& c) {
  Rat s(0);
  for (const auto& [k, v] : c.f.coeffs()) s += rat_abs(v);
  if (s == 0) return c;
  Constraint out = c;
  out.f *= Rat(1) / s;
  return out;
}

struct ConstraintLess {
  bool operator()(const Constraint& a, const Constraint& b) const {
    if (a.f != b.f) return a.f < b.f;
    return static_cast<int>(a.rel) < static_cast<int>(b.rel);
  }
};

}  // namespace detail

// Exact Fourier-Motzkin feasibility over the reals. Deterministic: the
// elimination order is chosen by the pos*neg product, ties by declaration
// order, and the result is independent of declaration order anyway.
inline bool fm_feasible(const IneqSystem& system) {
  for (const auto& c : system.cons)
    for (const auto& [s, k] : c.f.coeffs())
      if (std::find(system.vars.begin(), system.vars.end(), s) == system.vars.end())
        throw std::invalid_argument("fm_feasible: undeclared symbol " + s);

  std::set<Constraint, detail::ConstraintLess> work;
  auto insert = [&work](const Constraint& c) -> bool {  // false => infeasible constant
    if (c.f.is_zero()) return c.rel == Rel::Le;         // 0<0 is false, 0<=0 fine
    work.insert(detail::fm_normalize(c));
    return true;
  };
  for (const auto& c : system.cons)
    if (!insert(c)) return false;

  std::vector<std::string> remaining = system.vars;
  while (!remaining.empty()) {
    // Pick the variable minimizing the number of generated constraints.
    size_t best = 0;
    long best_score = -1;
    for (size_t i = 0; i < remaining.size(); ++i) {
      long pos = 0, neg = 0;
      for (const auto& c : work) {
        int s = rat_sign(c.f.coeff(remaining[i]));
        if (s > 0) ++pos;
        if (s < 0) ++neg;
      }
      long score = pos * neg;
      if (best_score < 0 || score < best_score) {
        best_score = score;
        best = i;
      }
    }
    std::string var = remaining[best];
    remaining.erase(remaining.begin() + best);

    std::vector<Constraint> uppers, lowers, keep;
    for (const auto& c : work) {
      int s = rat_sign(c.f.coeff(var));
      if (s > 0)
        uppers.push_back(c);
      else if (s < 0)
        lowers.push_back(c);
      else
        keep.push_back(c);
    }
    work.clear();
    for (const auto& c : keep) work.insert(c);
    for (const auto& up : uppers) {
      Rat cu = up.f.coeff(var);
      for (const auto& lo : lowers) {
        Rat cl = lo.f.coeff(var);  // cl < 0
        Constraint combo;
        combo.f = (-cl) * up.f + cu * lo.f;
        combo.rel = (up.rel == Rel::Lt || lo.rel == Rel::Lt) ? Rel::Lt : Rel::Le;
        if (!insert(combo)) return false;
      }
    }
  }
  // All variables eliminated; surviving constraints are constant-free zero
  // forms already handled by insert().
  return true;
}

// Expands |lhs| <= sum_i c_i |F_i| under one sign branch: sign[i] fixes the
// sign of F_i. Produces lhs - rhs' <= 0, -lhs - rhs' <= 0 and the branch's
// sign constraints. The caller unions feasibility over all branches.
inline IneqSystem abs_expand(const LinForm& lhs, const std::vector<std::pair<Rat, LinForm>>& rhs_terms,
                             const std::vector<int>& signs) {
  if (signs.size() != rhs_terms.size()) throw std::invalid_argument("abs_expand: branch arity mismatch");
  LinForm rhs;
  IneqSystem sys;
  for (size_t i = 0; i < rhs_terms.size(); ++i) {
    if (rhs_terms[i].first < 0) throw std::invalid_argument("abs_expand: negative weight");
    if (signs[i] != 1 && signs[i] != -1) throw std::invalid_argument("abs_expand: sign must be +-1");
    LinForm signed_term = Rat(signs[i]) * rhs_terms[i].second;
    rhs += rhs_terms[i].first * signed_term;
    sys.add(-signed_term, Rel::Le);  // sign constraint: sign*F >= 0
  }
  sys.add(lhs - rhs, Rel::Le);
  sys.add(-lhs - rhs, Rel::Le);
  std::set<std::string> vs;
  for (const auto& c : sys.cons)
    for (const auto& [s, k] : c.f.coeffs()) vs.insert(s);
  sys.vars.assign(vs.begin(), vs.end());
  return sys;
}

// Symbol-keyed convenience: rhs terms are c_i * |sym_i|.
inline IneqSystem abs_expand(const LinForm& lhs, const std::vector<std::pair<Rat, std::string>>& rhs_syms,
                             const std::map<std::string, int>& branch) {
  std::vector<std::pair<Rat, LinForm>> terms;
  std::vector<int> signs;
  for (const auto& [c, s] : rhs_syms) {
    terms.push_back({c, LinForm::sym(s)});
    auto it = branch.find(s);
    if (it == branch.end()) throw std::invalid_argument("abs_expand: branch missing symbol " + s);
    signs.push_back(it->second);
  }
  return abs_expand(lhs, terms, signs);
}

}  // namespace collatz2
