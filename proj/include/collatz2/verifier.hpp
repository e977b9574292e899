#pragma once

#include "collatz2/certificate.hpp"

namespace collatz2 {

// Independent certificate checker. Everything below re-derives its facts from
// the certificate contents and exact rational arithmetic alone: rule
// branches, state graph, scheme rewrites, transfer products, determinant
// samples, zero scans and tail dominance are all recomputed locally rather
// than through the prover's code paths.
struct VerifyReport {
  bool ok = true;
  std::vector<std::string> failures;

  void fail(const std::string& what) {
    ok = false;
    if (failures.size() < 64) failures.push_back(what);
  }
};

namespace verify_detail {

struct LocalRule {
  std::array<int, 8> a{};

  static LocalRule parse(const std::string& id) {
    if (id.size() != 8) throw std::invalid_argument("bad rule id");
    LocalRule r;
    for (int i = 0; i < 8; ++i) r.a[i] = id[i] == '+' ? 1 : -1;
    return r;
  }

  // branch order EE, OO, OE, EO over (prev, cur) parities
  std::array<Rat, 2> coeffs(bool prev_odd, bool cur_odd) const {
    int idx = prev_odd ? (cur_odd ? 1 : 2) : (cur_odd ? 3 : 0);
    Rat h = idx <= 1 ? rat(1, 2) : Rat(1);
    return {Rat(a[2 * idx]) * h, Rat(a[2 * idx + 1]) * h};
  }

  Int step(const Int& u, const Int& v) const {
    auto c = coeffs(int_odd(u), int_odd(v));
    Rat w = c[0] * Rat(u) + c[1] * Rat(v);
    if (!rat_is_int(w)) throw std::domain_error("non-integer step");
    return w.get_num();
  }
};

inline std::array<std::array<Rat, 2>, 2> word_matrix(const LocalRule& rule, const Word& w) {
  std::array<std::array<Rat, 2>, 2> M = {{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}};
  for (size_t k = 1; k < w.size(); ++k) {
    auto c = rule.coeffs(w[k - 1] == 1, w[k] == 1);
    std::array<std::array<Rat, 2>, 2> T = {{{Rat(0), Rat(1)}, {c[0], c[1]}}};
    std::array<std::array<Rat, 2>, 2> P{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) P[i][j] = T[i][0] * M[0][j] + T[i][1] * M[1][j];
    M = P;
  }
  return M;
}

inline Rat det_minus_I(const std::array<std::array<Rat, 2>, 2>& M) {
  return (M[0][0] - 1) * (M[1][1] - 1) - M[0][1] * M[1][0];
}

}  // namespace verify_detail

inline VerifyReport verify(const TheoremCertificate& c) {
  using namespace verify_detail;
  VerifyReport rep;
  LocalRule rule = LocalRule::parse(c.rule_id);

  // --- cycles: direct rule application around the loop, canonical form.
  auto check_cycle = [&](const Cycle& cyc, const std::string& where) {
    size_t n = cyc.values.size();
    if (n == 0) return rep.fail(where + ": empty cycle");
    for (size_t i = 0; i < n; ++i)
      if (rule.step(cyc.values[i], cyc.values[(i + 1) % n]) != cyc.values[(i + 2) % n])
        return rep.fail(where + ": " + cyc.str() + " does not re-verify under the rule");
    Int g(0);
    for (const auto& v : cyc.values) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g != 0 && !int_odd(g)) {
      while (g > 0 && !int_odd(g)) g /= 2;
    }
    // canonical: odd-gcd 1 and least rotation
    Int og(0);
    for (const auto& v : cyc.values) mpz_gcd(og.get_mpz_t(), og.get_mpz_t(), v.get_mpz_t());
    while (og > 1 && !int_odd(og)) og /= 2;
    if (og > 1) return rep.fail(where + ": " + cyc.str() + " not odd-primitive");
    for (size_t i = 1; i < n; ++i) {
      for (size_t k = 0; k < n; ++k) {
        int cmpres = cmp(cyc.values[(i + k) % n], cyc.values[k]);
        if (cmpres < 0) return rep.fail(where + ": " + cyc.str() + " not the least rotation");
        if (cmpres != 0) break;
      }
    }
  };
  for (const auto& cyc : c.cycles) check_cycle(cyc, "cycles");
  for (const auto& cyc : c.small_seed_cycles) check_cycle(cyc, "small_seed_cycles");

  std::set<Cycle> listed(c.cycles.begin(), c.cycles.end());
  for (const auto& cyc : c.small_seed_cycles)
    if (c.status.kind != StatusInfo::Failed && !listed.count(cyc))
      rep.fail("small-seed cycle " + cyc.str() + " missing from the certified list");

  // --- cycle witnesses: seed trajectories must realize word, closure, cycle.
  for (const auto& w : c.witnesses) {
    size_t L = w.word.size();
    std::vector<Int> vals = {w.seed_a, w.seed_b};
    for (size_t i = 2; i <= L; ++i) vals.push_back(rule.step(vals[i - 2], vals[i - 1]));
    bool good = true;
    for (size_t j = 0; j < L && good; ++j) good = (int_odd(vals[j]) ? 1 : 2) == w.word[j];
    good = good && vals[L - 1] == w.seed_a && vals[L] == w.seed_b;
    if (!good) {
      rep.fail("witness for " + w.cycle.str() + " does not realize its word");
      continue;
    }
    if (c.status.kind != StatusInfo::Failed && !listed.count(w.cycle))
      rep.fail("witness cycle " + w.cycle.str() + " missing from the certified list");
  }

  // --- scheme
  if (c.has_scheme) {
    const Rat& c1 = c.coeffs.c1;
    const Rat& c2 = c.coeffs.c2;
    if (!(c1 >= 1 && c2 >= 1)) rep.fail("bound coefficients below 1");
    for (State s : scheme_states()) {
      bool has_u = false, has_v = false;
      for (const auto& f : c.scheme.at(s)) {
        if (f == LinForm::sym("u")) has_u = true;
        if (f == LinForm::sym("v")) has_v = true;
        if (rat_abs(f.coeff("u")) > c1 || rat_abs(f.coeff("v")) > c2)
          rep.fail(std::string("base check fails in state ") + state_name(s) + " for " + f.str());
      }
      if (!has_u || !has_v) rep.fail(std::string("state ") + state_name(s) + " missing u or v");
    }
    // universal successor graph, local copy
    auto succ = [](State s) -> std::vector<State> {
      switch (s) {
        case State::OO: return {State::OO, State::OE};
        case State::OE: return {State::EO};
        case State::EO: return {State::OO};
        default: return {};
      }
    };
    auto local_rewrite = [&](State from, const LinForm& g) {
      bool po = from == State::OO || from == State::OE;  // prev odd
      bool co = from == State::OO || from == State::EO;  // cur odd
      auto bc = rule.coeffs(po, co);
      LinForm out;
      out.set("u", g.coeff("v") * bc[0]);
      out.set("v", g.coeff("u") + g.coeff("v") * bc[1]);
      return out;
    };
    for (State s : scheme_states())
      for (State t : succ(s))
        for (const auto& g : c.scheme.at(t)) {
          LinForm target = local_rewrite(s, g);
          int found = 0;
          for (const auto& step : c.transitions) {
            if (step.from != s || step.to != t || !(step.source == g)) continue;
            ++found;
            if (!(step.target == target)) rep.fail("transition target mismatch for " + g.str());
            LinForm sum;
            Rat norm(0);
            for (const auto& [f, k] : step.combo) {
              bool hyp = false;
              for (const auto& h : c.scheme.at(s)) hyp |= (h == f);
              if (!hyp) rep.fail("combination uses a non-hypothesis form " + f.str());
              sum += k * f;
              norm += rat_abs(k);
            }
            if (!(sum == target)) rep.fail("linear identity broken for target " + target.str());
            if (norm > 1) rep.fail("coefficient magnitudes exceed 1 for target " + target.str());
          }
          if (found != 1)
            rep.fail(std::string("obligation coverage broken: ") + state_name(s) + "->" + state_name(t) + " " +
                     g.str());
        }
  } else if (c.status.kind != StatusInfo::Failed) {
    rep.fail("non-failed certificate without a scheme");
  }

  // --- determinants: closed form vs direct products, claimed zeros, tails.
  for (const auto& d : c.det_records) {
    Family g = d.family;
    for (auto& [B, lo] : g.blocks) lo = std::max(lo, 1);
    std::string where = "determinant " + g.str();
    auto direct_det = [&](const std::vector<long>& m) {
      return det_minus_I(word_matrix(rule, g.instantiate(m)));
    };
    if (d.det_valid) {
      std::vector<long> m(g.arity());
      std::function<bool(int)> sample = [&](int i) -> bool {
        if (i == g.arity()) {
          if (d.det.eval(m) != direct_det(m)) {
            rep.fail(where + ": closed form disagrees with the direct product");
            return false;
          }
          return true;
        }
        for (m[i] = g.blocks[i].second; m[i] <= g.blocks[i].second + 5; ++m[i])
          if (!sample(i + 1)) return false;
        return true;
      };
      sample(0);
    }
    std::set<std::vector<long>> claimed(d.zeros.begin(), d.zeros.end());
    std::vector<long> m(g.arity());
    std::function<void(int)> scan = [&](int i) {
      if (i == g.arity()) {
        bool zero = (d.det_valid ? d.det.eval(m) : direct_det(m)) == 0;
        if (zero != claimed.count(m))
          rep.fail(where + ": zero list wrong at an exponent tuple");
        return;
      }
      for (m[i] = g.blocks[i].second; m[i] <= c.params.m_max; ++m[i]) scan(i + 1);
    };
    if (g.arity() >= 1) scan(0);
    if (d.tail == Tail::RigorousNonzero) {
      if (!d.det_valid) {
        rep.fail(where + ": rigorous tail claimed without a closed form");
        continue;
      }
      // Re-derive the dominance / constant-null claims per class, and spot
      // check beyond the scan bound up to 4*M_max.
      for (const auto& cl : d.classes) {
        ExpPoly cls = d.det.class_restrict(cl.offsets);
        if (cl.kind == "nonzero-dominant") {
          if (cls.is_zero()) {
            rep.fail(where + ": dominant class is identically zero");
            continue;
          }
          long k_min = (c.params.m_max + 2) / 2 + 1;
          int n = cls.arity;
          std::vector<Rat> dmax(n, Rat(0));
          for (const auto& t : cls.terms)
            for (int i = 0; i < n; ++i) dmax[i] = std::max(dmax[i], rat_abs(t.base[i]));
          const ExpTerm* dom = nullptr;
          bool unique = true;
          for (const auto& t : cls.terms) {
            bool is = true;
            for (int i = 0; i < n; ++i) is &= (rat_abs(t.base[i]) == dmax[i]);
            if (is) {
              if (dom) unique = false;
              dom = &t;
            }
          }
          if (!dom || !unique) {
            rep.fail(where + ": no unique dominant term");
            continue;
          }
          Rat rest(0);
          for (const auto& t : cls.terms) {
            if (&t == dom) continue;
            Rat ratio = rat_abs(t.gamma);
            for (int i = 0; i < n; ++i) ratio *= rat_pow(rat_abs(t.base[i]) / dmax[i], k_min);
            rest += ratio;
          }
          if (!(rest < rat_abs(dom->gamma))) rep.fail(where + ": dominance inequality fails");
        } else if (cl.kind.rfind("identically-zero", 0) == 0) {
          if (!cls.is_zero()) {
            rep.fail(where + ": class claimed identically zero is not");
            continue;
          }
          if (!cl.null_dir) {
            rep.fail(where + ": zero class without a null direction");
            continue;
          }
          // spot checks to 4*M_max: the direction stays in the kernel
          for (long extra = 0; extra <= 3; ++extra) {
            std::vector<long> mm = cl.offsets;
            for (auto& x : mm) x += 2 * ((c.params.m_max * extra) + 1);
            auto M = word_matrix(rule, g.instantiate(mm));
            Rat e0 = (M[0][0] - 1) * (*cl.null_dir)[0] + M[0][1] * (*cl.null_dir)[1];
            Rat e1 = M[1][0] * (*cl.null_dir)[0] + (M[1][1] - 1) * (*cl.null_dir)[1];
            if (e0 != 0 || e1 != 0) rep.fail(where + ": claimed null direction leaves the kernel");
          }
        } else {
          rep.fail(where + ": rigorous tail with a non-rigorous class kind");
        }
      }
    }
  }

  // --- status consistency
  if (c.status.kind == StatusInfo::Full) {
    if (!c.has_scheme || !c.base_ok) rep.fail("FULL without a proved scheme");
    if (!c.cover_ok) rep.fail("FULL without exact cover");
    if (c.enum_truncated) rep.fail("FULL with truncated enumeration");
    for (const auto& d : c.det_records)
      if (d.tail != Tail::RigorousNonzero) rep.fail("FULL with a non-rigorous determinant tail");
    for (const auto& r : c.completeness)
      if (r.verdict != ExtVerdict::SymbolicRuledOut && r.verdict != ExtVerdict::Skipped)
        rep.fail("FULL with a non-symbolic completeness verdict");
    if (c.small_seed_undecided) rep.fail("FULL with undecided small seeds");
  }
  return rep;
}

inline VerifyReport verify_text(const std::string& text) { return verify(parse_certificate(text)); }

}  // namespace collatz2
