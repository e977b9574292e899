#pragma once

#include "collatz2/extract.hpp"

namespace collatz2 {

enum class ExtVerdict { SymbolicRuledOut, Bounded, Failed, Skipped };

struct ExtensionReport {
  std::string family;    // parent family display form
  int ext_char = 0;      // appended parity (1 or 2)
  ExtVerdict verdict = ExtVerdict::Bounded;
  long bound = 0;        // exhaustive bound actually checked
  std::string note;
  // Branch shapes analyzed along the way (feasible-but-dying subtrees) with
  // their determinant tails; any extracted cycles are appended to the rule's
  // cycle list by the pipeline.
  std::vector<std::string> branches;
  std::vector<CycleSolution> branch_cycles;
  bool branch_tails_rigorous = true;
};

namespace detail {

// Eventual sign of an ExpPoly restricted to the parity class anchored at
// `off`: the unique dominant term decides the sign for all k >= k*, certified
// by the exact ratio-sum test; returns nullopt when no rigorous decision
// exists within the threshold cap.
struct EventualSign {
  int sign = 0;
  long k_star = 0;
};

inline std::optional<EventualSign> eventual_sign(const ExpPoly& p, const std::vector<long>& off, long k_cap = 128) {
  ExpPoly cls = p.class_restrict(off);
  if (cls.is_zero()) return EventualSign{0, 0};
  int n = cls.arity;
  std::vector<Rat> dmax(n, Rat(0));
  for (const auto& t : cls.terms)
    for (int i = 0; i < n; ++i) dmax[i] = std::max(dmax[i], rat_abs(t.base[i]));
  const ExpTerm* dom = nullptr;
  for (const auto& t : cls.terms) {
    bool is = true;
    for (int i = 0; i < n; ++i) is &= (rat_abs(t.base[i]) == dmax[i]);
    if (is) {
      if (dom) return std::nullopt;
      dom = &t;
    }
  }
  if (!dom) return std::nullopt;
  for (long k = 1; k <= k_cap; k *= 2) {
    Rat rest(0);
    bool shrinking = true;
    for (const auto& t : cls.terms) {
      if (&t == dom) continue;
      Rat ratio = rat_abs(t.gamma);
      for (int i = 0; i < n; ++i) {
        if (dmax[i] == 0) {
          shrinking = false;
          break;
        }
        ratio *= rat_pow(rat_abs(t.base[i]) / dmax[i], k);
      }
      if (!shrinking) break;
      rest += ratio;
    }
    if (!shrinking) return std::nullopt;
    if (rest < rat_abs(dom->gamma)) return EventualSign{rat_sign(dom->gamma), k};
  }
  return std::nullopt;
}

// Linear form in (a, b, X) with ExpPoly coefficients.
struct SymLin {
  ExpPoly a, b, x;
};

struct SymCon {
  SymLin f;
  Rel rel;
};

// Fourier-Motzkin for all sufficiently large in-class exponents: pivots on
// eventual signs, multiplies through by eventually-positive polynomials.
// Returns the threshold k* certifying infeasibility beyond it, or nullopt.
inline std::optional<long> sym_fm_infeasible(std::vector<SymCon> cons, const std::vector<long>& off) {
  long k_star = 0;
  auto sign_of = [&](const ExpPoly& p) -> std::optional<int> {
    auto s = eventual_sign(p, off);
    if (!s) return std::nullopt;
    k_star = std::max(k_star, s->k_star);
    return s->sign;
  };
  int arity = off.empty() ? 0 : static_cast<int>(off.size());
  auto poly_terms = [](const std::vector<SymCon>& cs) {
    size_t n = 0;
    for (const auto& c : cs) n += c.f.a.terms.size() + c.f.b.terms.size() + c.f.x.terms.size();
    return n;
  };
  // For a homogeneous system, infeasibility is exactly a derived 0 < 0: a
  // strict constraint all of whose coefficients vanish on the class.
  auto contradiction = [&](const SymCon& c) {
    return c.rel == Rel::Lt && c.f.a.class_restrict(off).is_zero() && c.f.b.class_restrict(off).is_zero() &&
           c.f.x.class_restrict(off).is_zero();
  };
  for (const auto& c : cons)
    if (contradiction(c)) return k_star;
  for (int var = 0; var < 3; ++var) {  // eliminate X, then a, then b
    auto coeff = [&](const SymLin& f) -> const ExpPoly& { return var == 0 ? f.x : (var == 1 ? f.a : f.b); };
    std::vector<SymCon> uppers, lowers, keep;
    for (auto& c : cons) {
      auto s = sign_of(coeff(c.f));
      if (!s) return std::nullopt;
      if (*s > 0)
        uppers.push_back(c);
      else if (*s < 0)
        lowers.push_back(c);
      else
        keep.push_back(c);  // class-zero coefficient: absent on the class
    }
    std::vector<SymCon> next = keep;
    for (const auto& up : uppers)
      for (const auto& lo : lowers) {
        SymCon combo;
        ExpPoly mu = ExpPoly::constant(arity, Rat(-1)) * coeff(lo.f);  // eventually positive
        ExpPoly ml = coeff(up.f);                                      // eventually positive
        combo.f.a = mu * up.f.a + ml * lo.f.a;
        combo.f.b = mu * up.f.b + ml * lo.f.b;
        combo.f.x = mu * up.f.x + ml * lo.f.x;
        (var == 0 ? combo.f.x : (var == 1 ? combo.f.a : combo.f.b)) = ExpPoly::constant(arity, Rat(0));
        combo.rel = (up.rel == Rel::Lt || lo.rel == Rel::Lt) ? Rel::Lt : Rel::Le;
        if (contradiction(combo)) return k_star;
        next.push_back(combo);
        if (next.size() > 160) return std::nullopt;
      }
    cons = next;
    if (poly_terms(cons) > 6000) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

// Builds the symbolic candidate system for the family's instance word plus
// one appended parity: a,b > 0 strict, X = sigma*f2 with the constant early
// form f2, |f_{L-1}| <= X, |f_L| <= X, and the necessary cycle condition on
// the last two forms, expanded over sign branches. Infeasibility of this
// subsystem refutes candidacy of the extension word.
namespace detail {

struct SymbolicTail {
  // last two forms as a,b-linear with ExpPoly coefficients
  SymLin f_prev, f_last;
  LinForm f2;  // constant early form over {a,b}
  bool ok = false;
};

// Absorbs block i at the fixed repetition count v into the surrounding word,
// producing the one-fewer-exponent strip family.
inline Family freeze_exponent(const Family& f, size_t i, long v) {
  Family g;
  g.eps = f.eps;
  g.prefix = f.prefix;
  g.suffix = f.suffix;
  Word expanded;
  for (long r = 0; r < v; ++r) expanded.insert(expanded.end(), f.blocks[i].first.begin(), f.blocks[i].first.end());
  if (i == 0) {
    g.prefix.insert(g.prefix.end(), expanded.begin(), expanded.end());
    for (size_t j = 1; j < f.blocks.size(); ++j) g.blocks.push_back(f.blocks[j]);
  } else {
    g.suffix.insert(g.suffix.begin(), expanded.begin(), expanded.end());
    for (size_t j = 0; j + 1 < f.blocks.size(); ++j) g.blocks.push_back(f.blocks[j]);
  }
  return g;
}

// The candidate system of a word needs its last two forms, which the edge
// product of the word *minus its final character* provides; the final
// character only labels the parity of the last form.
inline SymbolicTail symbolic_tail(const RuleSpec& rule, const Family& f) {
  SymbolicTail out;
  Family g = analysis_form(f);
  if (g.suffix.empty()) return out;
  g.suffix.pop_back();
  DetAnalysis d = det_condition(rule, g);
  if (!d.valid) return out;
  // Early form f2 from the first three characters (exponent-independent for
  // low >= 1 templates; verified on two instances).
  std::vector<long> m0(g.arity()), m1(g.arity());
  for (int i = 0; i < g.arity(); ++i) {
    m0[i] = g.blocks[i].second;
    m1[i] = g.blocks[i].second + 1;
  }
  Word w0 = g.instantiate(m0), w1 = g.instantiate(m1);
  if (w0.size() < 3) return out;
  for (int i = 0; i < 3; ++i)
    if (w0[i] != w1[i]) return out;
  SymTraj t = sym_traj_of_word(rule, Word(w0.begin(), w0.begin() + 3), f.eps);
  out.f2 = t.forms[2];
  int n = g.arity();
  Rat eps(f.eps);
  out.f_prev.a = d.M.e[0][0];
  out.f_prev.b = ExpPoly::constant(n, eps) * d.M.e[0][1];
  out.f_prev.x = ExpPoly::constant(n, Rat(0));
  out.f_last.a = d.M.e[1][0];
  out.f_last.b = ExpPoly::constant(n, eps) * d.M.e[1][1];
  out.f_last.x = ExpPoly::constant(n, Rat(0));
  out.ok = true;
  return out;
}

inline std::optional<long> tail_infeasible(const RuleSpec& rule, const Family& f, const BoundCoeffs& coeffs) {
  SymbolicTail st = symbolic_tail(rule, f);
  if (!st.ok) return std::nullopt;
  Family g = analysis_form(f);
  int n = g.arity();
  auto C = [&](const Rat& q) { return ExpPoly::constant(n, q); };
  auto lin_const = [&](const Rat& ca, const Rat& cb, const Rat& cx) {
    SymLin l;
    l.a = C(ca);
    l.b = C(cb);
    l.x = C(cx);
    return l;
  };
  auto scaled = [&](const SymLin& l, const Rat& k) {
    SymLin o;
    o.a = C(k) * l.a;
    o.b = C(k) * l.b;
    o.x = C(k) * l.x;
    return o;
  };
  auto add3 = [&](const SymLin& p, const SymLin& q, const SymLin& r) {
    SymLin o;
    o.a = p.a + q.a + r.a;
    o.b = p.b + q.b + r.b;
    o.x = p.x + q.x + r.x;
    return o;
  };
  long threshold = -1;
  for (int sigma : {1, -1}) {
    for (int s1 : {1, -1})
      for (int s2 : {1, -1}) {
        std::vector<SymCon> cons;
        cons.push_back({lin_const(Rat(-1), Rat(0), Rat(0)), Rel::Lt});  // a > 0
        cons.push_back({lin_const(Rat(0), Rat(-1), Rat(0)), Rel::Lt});  // b > 0
        Rat f2a = st.f2.coeff("a"), f2b = st.f2.coeff("b");
        // X = sigma*f2, sigma*f2 >= 0, strict max over the first two entries.
        cons.push_back({lin_const(-Rat(sigma) * f2a, -Rat(sigma) * f2b, Rat(0)), Rel::Le});
        cons.push_back({lin_const(Rat(sigma) * f2a, Rat(sigma) * f2b, Rat(-1)), Rel::Le});
        cons.push_back({lin_const(-Rat(sigma) * f2a, -Rat(sigma) * f2b, Rat(1)), Rel::Le});
        cons.push_back({lin_const(Rat(1), Rat(0), Rat(-1)), Rel::Lt});           // a < X
        cons.push_back({lin_const(Rat(0), Rat(1), Rat(-1)), Rel::Lt});           // b < X
        for (const SymLin* fl : {&st.f_prev, &st.f_last}) {                      // |f| <= X
          SymCon c1{*fl, Rel::Le};
          c1.f.x = c1.f.x + C(Rat(-1));
          cons.push_back(c1);
          SymCon c2{scaled(*fl, Rat(-1)), Rel::Le};
          c2.f.x = c2.f.x + C(Rat(-1));
          cons.push_back(c2);
        }
        // sign branches and the necessary condition
        cons.push_back({scaled(st.f_prev, Rat(-s1)), Rel::Le});
        cons.push_back({scaled(st.f_last, Rat(-s2)), Rel::Le});
        SymLin strong = add3(scaled(st.f_prev, -coeffs.c1 * Rat(s1)), scaled(st.f_last, -coeffs.c2 * Rat(s2)),
                             lin_const(Rat(0), Rat(0), Rat(1)));
        cons.push_back({strong, Rel::Le});

        std::vector<long> off(n);
        bool all_classes = true;
        long worst = 0;
        std::vector<int> res(n, 0);
        std::function<bool(int)> classes = [&](int i) -> bool {
          if (i == n) {
            std::vector<long> o(n);
            for (int j = 0; j < n; ++j) o[j] = g.blocks[j].second + res[j];
            auto th = sym_fm_infeasible(cons, o);
            if (!th) return false;
            worst = std::max(worst, *th);
            return true;
          }
          for (res[i] = 0; res[i] < 2; ++res[i])
            if (!classes(i + 1)) return false;
          return true;
        };
        all_classes = classes(0);
        if (!all_classes) return std::nullopt;
        threshold = std::max(threshold, worst);
      }
  }
  return threshold;
}

}  // namespace detail

// Feasibility of one concrete word as a cycle candidate.
inline bool word_feasible(const RuleSpec& rule, const BoundCoeffs& coeffs, const Word& w, int eps) {
  if (w.size() < 3) return true;
  return feasible(sym_traj_of_word(rule, w, eps), coeffs, true);
}

// One-symbol extensions of each family that leave the family list entirely:
// prove they admit no candidates (exactly up to M_max, symbolically beyond),
// recursing through the forced continuation shapes when an extension stays
// feasible but its subtree dies. Verified cycles found along such branches
// are reported so the pipeline can include them.
inline std::vector<ExtensionReport> completeness_check(const RuleSpec& rule, const BoundCoeffs& coeffs,
                                                       const std::vector<Family>& families, long M_max = 64,
                                                       int max_len_hint = 24) {
  std::vector<ExtensionReport> out;
  // Prefix-closure membership against the family list, structurally: the word
  // parses into some family or is a prefix of a longer instance.
  auto covered_word = [&families](const Word& w, int eps) {
    for (const auto& g : families) {
      if (g.eps != eps) continue;
      if (parse_instance(g, w)) return true;
    }
    for (const auto& g : families) {
      if (g.eps != eps) continue;
      for (long extra = 1; extra <= 8; ++extra) {
        if (g.arity() == 1) {
          for (long m1 = g.blocks[0].second; g.length({m1}) <= static_cast<long>(w.size()) + 12; ++m1) {
            Word iw = g.instantiate({m1});
            if (iw.size() >= w.size() && std::equal(w.begin(), w.end(), iw.begin())) return true;
          }
        } else {
          for (long m1 = g.blocks[0].second; g.length({m1, g.blocks[1].second}) <= static_cast<long>(w.size()) + 12;
               ++m1)
            for (long m2 = g.blocks[1].second; g.length({m1, m2}) <= static_cast<long>(w.size()) + 12; ++m2) {
              Word iw = g.instantiate({m1, m2});
              if (iw.size() >= w.size() && std::equal(w.begin(), w.end(), iw.begin())) return true;
            }
        }
        break;
      }
    }
    return false;
  };
  // Smallest exponent shift from which six consecutive instances all fold
  // into the prefix closure; the templates are concatenative, so stability
  // over six consecutive exponents is exponent-uniform beyond them.
  auto covered_from = [&](const Family& g) -> std::optional<long> {
    for (long k = 0; k <= 8; ++k) {
      bool all = true;
      for (long d = 0; d < 6 && all; ++d) {
        std::vector<long> m(g.arity());
        for (int i = 0; i < g.arity(); ++i) m[i] = g.blocks[i].second + k + d;
        all = covered_word(g.instantiate(m), g.eps);
      }
      if (all) return g.blocks.empty() ? 0 : g.blocks[0].second + k;
    }
    return std::nullopt;
  };
  auto covered = [&](const Family& shape) {
    Family g = analysis_form(shape);
    auto cf = covered_from(g);
    return cf && *cf <= (g.blocks.empty() ? 0 : g.blocks[0].second);
  };

  // Recursive branch kill. An escape is a feasible instance outside the
  // prefix closure; the shape is ruled out when its escapes are confined to
  // a certified horizon (symbolic infeasibility beyond it, or coverage from
  // it on) and every child shape is covered or killed in turn.
  std::function<bool(const Family&, ExtensionReport&, int)> kill = [&](const Family& shape, ExtensionReport& rep,
                                                                       int depth) -> bool {
    Family g = analysis_form(shape);
    rep.branches.push_back(g.str());
    long T = 0;
    bool symbolic_ok = false;
    if (auto th = detail::tail_infeasible(rule, g, coeffs)) {
      symbolic_ok = true;
      long base = 0;
      for (int i = 0; i < g.arity(); ++i) base = std::max(base, static_cast<long>(g.blocks[i].second));
      T = base + 2 * *th + 2;
      if (g.arity() == 2) {
        // Strips with one exponent frozen: each must be symbolically
        // infeasible beyond a threshold or fold into the prefix closure; the
        // exhaustive escape scan covers the remainder.
        for (int axis = 0; axis < 2 && symbolic_ok; ++axis) {
          for (long v = g.blocks[axis].second; v <= T && symbolic_ok; ++v) {
            Family strip = detail::freeze_exponent(g, axis, v);
            if (strip.arity() == 0) {
              symbolic_ok = false;
              break;
            }
            strip = analysis_form(strip);
            if (auto sth = detail::tail_infeasible(rule, strip, coeffs)) {
              T = std::max(T, g.blocks[1 - axis].second + 2 * *sth + 2);
            } else if (auto cf = covered_from(strip)) {
              T = std::max(T, *cf + 6);
            } else {
              symbolic_ok = false;
            }
            if (T > 192) symbolic_ok = false;
          }
        }
      }
      if (T > 192) symbolic_ok = false;
    }
    if (!symbolic_ok)
      if (auto cf = covered_from(g)) {
        symbolic_ok = true;  // instances from *cf on fold into the closure
        T = *cf + 6;
      }
    long bound = symbolic_ok ? T : M_max;
    rep.bound = std::max(rep.bound, bound);
    if (!symbolic_ok) rep.branch_tails_rigorous = false;

    bool any_escape = false;
    std::vector<long> m(g.arity());
    std::function<void(int)> scan = [&](int i) {
      if (i == g.arity()) {
        Word w = g.instantiate(m);
        if (word_feasible(rule, coeffs, w, g.eps) && !covered_word(w, g.eps)) any_escape = true;
        return;
      }
      for (m[i] = g.blocks[i].second; m[i] <= bound; ++m[i]) scan(i + 1);
    };
    scan(0);
    if (!any_escape) return true;
    // Escapes exist: collect any cycles the shape's determinant admits, then
    // require every child shape to be covered or killed.
    DetAnalysis d = det_condition(rule, g);
    ZeroScan z = solve_zeros(rule, g, d, M_max);
    if (z.tail != Tail::RigorousNonzero) rep.branch_tails_rigorous = false;
    for (const auto& zero : z.zeros)
      for (auto& sol : extract_cycles(rule, g, zero)) rep.branch_cycles.push_back(sol);
    if (depth <= 0) return false;
    Word w0 = g.instantiate([&] {
      std::vector<long> v(g.arity());
      for (int i = 0; i < g.arity(); ++i) v[i] = g.blocks[i].second;
      return v;
    }());
    State st = pair_state(w0[w0.size() - 2], w0.back());
    std::vector<int> nexts = (st == State::OO) ? std::vector<int>{1, 2} : std::vector<int>{1};
    for (int c : nexts) {
      Family child = shape;
      child.suffix.push_back(c);
      if (covered(child)) continue;
      if (!kill(child, rep, depth - 1)) return false;
    }
    return true;
  };

  for (const auto& f : families) {
    Word w0 = analysis_form(f).instantiate([&] {
      std::vector<long> v(f.arity());
      for (int i = 0; i < f.arity(); ++i) v[i] = std::max(f.blocks[i].second, 1);
      return v;
    }());
    State st = pair_state(w0[w0.size() - 2], w0.back());
    std::vector<int> nexts = (st == State::OO) ? std::vector<int>{1, 2} : std::vector<int>{1};
    for (int c : nexts) {
      ExtensionReport rep;
      rep.family = f.str();
      rep.ext_char = c;
      Family ext = f;
      ext.suffix.push_back(c);
      if (covered(ext)) {
        rep.verdict = ExtVerdict::Skipped;
        rep.note = "instance of the family list";
        out.push_back(rep);
        continue;
      }
      bool killed = kill(ext, rep, 6);
      if (!killed)
        rep.verdict = ExtVerdict::Failed;
      else if (rep.branch_tails_rigorous)
        rep.verdict = ExtVerdict::SymbolicRuledOut;
      else
        rep.verdict = ExtVerdict::Bounded;
      out.push_back(rep);
    }
  }
  return out;
}

}  // namespace collatz2
