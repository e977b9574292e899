#pragma once

#include <functional>

#include "collatz2/exppoly.hpp"
#include "collatz2/families.hpp"

namespace collatz2 {

// One recurrence step as the linear map (u,v) -> (v, branch(u,v)); the branch
// is selected by the edge's parity pair.
inline Mat2 transfer_mat(const RuleSpec& rule, int p_prev, int p_cur) {
  auto b = rule.branch(pair_state(p_prev, p_cur));
  Rat h = b.halved ? rat(1, 2) : Rat(1);
  Mat2 T;
  T.m[0][0] = 0;
  T.m[0][1] = 1;
  T.m[1][0] = Rat(b.cu) * h;
  T.m[1][1] = Rat(b.cv) * h;
  return T;
}

// Ordered product of the word's edge matrices: a length-L candidate posits
// period L-1, and the product of all L-1 consecutive-pair transfers maps
// (x(-1), x(0)) to the wrap pair, so cycles are the solutions of M v = v.
inline Mat2 word_product(const RuleSpec& rule, const Word& w) {
  Mat2 M = Mat2::identity();
  for (size_t k = 1; k < w.size(); ++k) M = transfer_mat(rule, w[k - 1], w[k]) * M;
  return M;
}

inline Mat2 transfer_product(const RuleSpec& rule, const Family& f, const std::vector<long>& m) {
  return word_product(rule, f.instantiate(m));
}

// ---------------------------------------------------------------------------
// Symbolic word: prefix . B1^{m1} . B2^{m2} . suffix with every exponent >= 1
// (lower domains are split into variants before analysis). The edge product
// decomposes into constant seams and block-loop powers.

namespace detail {

struct Factors {
  // Chronological factor list: either a constant matrix or loop^(m_i - 1).
  struct Item {
    bool is_power = false;
    Mat2 mat;
    int exp_index = 0;
  };
  std::vector<Item> items;
  int arity = 0;
};

inline std::optional<Factors> word_factors(const RuleSpec& rule, const Family& f) {
  Factors out;
  out.arity = f.arity();
  std::optional<int> prev;
  Mat2 pending = Mat2::identity();
  auto flush = [&]() {
    out.items.push_back({false, pending, 0});
    pending = Mat2::identity();
  };
  auto walk_char = [&](int c) {
    if (prev) pending = transfer_mat(rule, *prev, c) * pending;
    prev = c;
  };
  for (int c : f.prefix) walk_char(c);
  for (size_t bi = 0; bi < f.blocks.size(); ++bi) {
    const Word& B = f.blocks[bi].first;
    if (B.empty()) return std::nullopt;
    if (f.blocks[bi].second < 1) return std::nullopt;  // variants handle low 0
    for (int c : B) walk_char(c);  // entry edge + first repetition's path
    // Loop = path-product of one repetition phased at B[0], including the
    // seam edge (B[last], B[0]); contributes loop^(m-1).
    Mat2 loop = Mat2::identity();
    int p = B.back();
    for (int c : B) {
      loop = transfer_mat(rule, p, c) * loop;
      p = c;
    }
    flush();
    out.items.push_back({true, loop, static_cast<int>(bi)});
  }
  for (int c : f.suffix) walk_char(c);
  flush();
  return out;
}

}  // namespace detail

// det(M(m) - I) and the entrywise closed form of M(m), exact for rational,
// diagonalizable block loops; irrational or defective loops fall back to an
// evaluable-only object (valid = false).
struct DetAnalysis {
  bool valid = false;
  ExpPoly det;   // det(M - I) = det(M) - tr(M) + 1
  SymMat M;      // entrywise closed form
  int arity = 0;
};

inline DetAnalysis det_condition(const RuleSpec& rule, const Family& f) {
  DetAnalysis out;
  out.arity = f.arity();
  auto factors = detail::word_factors(rule, f);
  if (!factors) return out;
  SymMat S = SymMat::constant(out.arity, Mat2::identity());
  ExpPoly detM = ExpPoly::constant(out.arity, Rat(1));
  for (const auto& item : factors->items) {
    if (!item.is_power) {
      S = item.mat * S;
      detM = ExpPoly::constant(out.arity, item.mat.det()) * detM;
      continue;
    }
    auto spec = spectral2x2(item.mat);
    if (!spec) return out;  // irrational or defective: evaluable-only
    if (spec->l1 == 0 || spec->l2 == 0) return out;
    // loop^(m-1) = sum_j l_j^(m-1) P_j; fold l_j^(-1) into the projector pass.
    SymMat next;
    next.arity = out.arity;
    auto add_part = [&](const Rat& l, const Mat2& P) {
      SymMat part = P * S;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) part.e[i][j].mul_power(item.exp_index, l, -1);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) next.e[i][j] += part.e[i][j];
    };
    add_part(spec->l1, spec->P1);
    if (!spec->scalar) add_part(spec->l2, spec->P2);
    S = next;
    ExpPoly dpow = ExpPoly::constant(out.arity, Rat(1));
    dpow.mul_power(item.exp_index, item.mat.det(), -1);
    detM = dpow * detM;
  }
  out.M = S;
  out.det = detM - S.trace() + ExpPoly::constant(out.arity, Rat(1));
  out.valid = true;
  return out;
}

// ---------------------------------------------------------------------------
// Zero scan and tail certification.

enum class Tail { RigorousNonzero, BoundedOnly };

struct ZeroClassInfo {
  std::vector<long> offsets;  // class representative (smallest in-class m)
  // nonzero-dominant | identically-zero-axis-null | identically-zero-fixed-null
  // | identity | bounded-only
  std::string kind;
  std::optional<std::array<Rat, 2>> null_dir;
};

struct ZeroScan {
  std::vector<std::vector<long>> zeros;  // within the scan box
  Tail tail = Tail::BoundedOnly;
  std::vector<ZeroClassInfo> classes;
  long scan_bound = 0;
};

namespace detail {

// Rigorous positivity of |dominant| over the rest for all k >= k_min, by the
// exact ratio-sum test; monotone since every ratio is <= 1.
inline bool dominant_tail_nonzero(const ExpPoly& cls, long k_min) {
  if (cls.terms.empty()) return false;
  int n = cls.arity;
  std::vector<Rat> dmax(n, Rat(0));
  for (const auto& t : cls.terms)
    for (int i = 0; i < n; ++i) dmax[i] = std::max(dmax[i], rat_abs(t.base[i]));
  const ExpTerm* dom = nullptr;
  for (const auto& t : cls.terms) {
    bool is = true;
    for (int i = 0; i < n; ++i) is &= (rat_abs(t.base[i]) == dmax[i]);
    if (is) {
      if (dom) return false;  // not unique
      dom = &t;
    }
  }
  if (!dom) return false;  // no componentwise-maximal term
  Rat rest(0);
  for (const auto& t : cls.terms) {
    if (&t == dom) continue;
    Rat ratio = rat_abs(t.gamma);
    for (int i = 0; i < n; ++i) {
      if (dmax[i] == 0) return false;
      ratio *= rat_pow(rat_abs(t.base[i]) / dmax[i], k_min);
    }
    rest += ratio;
  }
  return rest < rat_abs(dom->gamma);
}

}  // namespace detail

// Exhaustive zero search over low_i <= m_i <= M_max plus a per-parity-class
// tail argument. RigorousNonzero certifies that exponents beyond the scan
// contribute no cycle that was not already extracted: each class either has a
// dominant-term nonzero determinant, or the determinant vanishes identically
// with a symbolically constant null direction (one cycle or the axis).
inline ZeroScan solve_zeros(const RuleSpec& rule, const Family& f, const DetAnalysis& det, long M_max = 64) {
  ZeroScan out;
  out.scan_bound = M_max;
  int n = f.arity();
  std::vector<long> lo(n);
  for (int i = 0; i < n; ++i) lo[i] = f.blocks[i].second;

  auto det_at = [&](const std::vector<long>& m) -> Rat {
    if (det.valid) return det.det.eval(m);
    return (transfer_product(rule, f, m) - Mat2::identity()).det();
  };

  std::vector<long> m(n);
  std::function<void(int)> scan = [&](int i) {
    if (i == n) {
      if (det_at(m) == 0) out.zeros.push_back(m);
      return;
    }
    for (m[i] = lo[i]; m[i] <= M_max; ++m[i]) scan(i + 1);
  };
  scan(0);

  if (!det.valid || n == 0) {
    out.tail = Tail::BoundedOnly;
    return out;
  }

  bool rigorous = true;
  std::vector<long> off(n);
  std::function<void(int)> classes = [&](int i) {
    if (!rigorous) return;
    if (i == n) {
      ZeroClassInfo info;
      info.offsets = off;
      ExpPoly cls = det.det.class_restrict(off);
      // k_min covers every in-class m with some coordinate beyond M_max.
      long k_min = (M_max + 2) / 2 + 1;
      if (cls.is_zero()) {
        // Identically zero on the class: require a constant null direction.
        Mat2 N = det.M.eval(off) - Mat2::identity();
        std::array<Rat, 2> v{};
        if (N.m[0][0] != 0 || N.m[0][1] != 0)
          v = {N.m[0][1], -N.m[0][0]};
        else if (N.m[1][0] != 0 || N.m[1][1] != 0)
          v = {N.m[1][1], -N.m[1][0]};
        else {
          info.kind = "identity";
          rigorous = false;
          out.classes.push_back(info);
          return;
        }
        // Check N(m) v == 0 identically on the class.
        ExpPoly c0 = ExpPoly::constant(n, v[0]) * (det.M.e[0][0] - ExpPoly::constant(n, Rat(1))) +
                     ExpPoly::constant(n, v[1]) * det.M.e[0][1];
        ExpPoly c1 = ExpPoly::constant(n, v[0]) * det.M.e[1][0] +
                     ExpPoly::constant(n, v[1]) * (det.M.e[1][1] - ExpPoly::constant(n, Rat(1)));
        if (c0.class_restrict(off).is_zero() && c1.class_restrict(off).is_zero()) {
          info.null_dir = v;
          info.kind = (v[0] == 0 || v[1] == 0) ? "identically-zero-axis-null" : "identically-zero-fixed-null";
        } else {
          info.kind = "bounded-only";
          rigorous = false;
        }
      } else if (detail::dominant_tail_nonzero(cls, k_min)) {
        info.kind = "nonzero-dominant";
      } else {
        info.kind = "bounded-only";
        rigorous = false;
      }
      out.classes.push_back(info);
      return;
    }
    for (int r = 0; r < 2; ++r) {
      off[i] = lo[i] + r;
      classes(i + 1);
    }
  };
  classes(0);

  // For two exponents, also certify the boundary strips where one exponent
  // stays small: substitute each fixed value and run the one-exponent test.
  if (rigorous && n == 2) {
    for (int fixed = 0; fixed < 2 && rigorous; ++fixed) {
      int other = 1 - fixed;
      for (long c = lo[fixed]; c <= M_max && rigorous; ++c) {
        for (long r = 0; r < 2 && rigorous; ++r) {
          std::vector<long> o(2);
          o[fixed] = c;
          o[other] = lo[other] + r;
          ExpPoly strip = det.det.class_restrict(o);
          // Freeze the fixed axis: its square-base must be raised 0 times;
          // class_restrict already folded base^offset into gamma, so drop the
          // fixed axis by zeroing its exponent via evaluation at k_fixed = 0.
          ExpPoly line;
          line.arity = 2;
          for (const auto& t : strip.terms) {
            ExpTerm nt = t;
            nt.base[fixed] = 1;
            line.terms.push_back(nt);
          }
          line.canonicalize();
          long k_min = (M_max + 2) / 2 + 1;
          if (line.is_zero()) {
            Mat2 N = det.M.eval(o) - Mat2::identity();
            std::array<Rat, 2> v{};
            if (N.m[0][0] != 0 || N.m[0][1] != 0)
              v = {N.m[0][1], -N.m[0][0]};
            else if (N.m[1][0] != 0 || N.m[1][1] != 0)
              v = {N.m[1][1], -N.m[1][0]};
            else {
              rigorous = false;
              break;
            }
            ExpPoly c0 = ExpPoly::constant(2, v[0]) * (det.M.e[0][0] - ExpPoly::constant(2, Rat(1))) +
                         ExpPoly::constant(2, v[1]) * det.M.e[0][1];
            ExpPoly c1 = ExpPoly::constant(2, v[0]) * det.M.e[1][0] +
                         ExpPoly::constant(2, v[1]) * (det.M.e[1][1] - ExpPoly::constant(2, Rat(1)));
            auto freeze = [&](ExpPoly p) {
              p = p.class_restrict(o);
              for (auto& t : p.terms) t.base[fixed] = 1;
              p.canonicalize();
              return p;
            };
            if (!(freeze(c0).is_zero() && freeze(c1).is_zero())) rigorous = false;
          } else if (!detail::dominant_tail_nonzero(line, k_min)) {
            rigorous = false;
          }
        }
      }
    }
  }

  out.tail = rigorous ? Tail::RigorousNonzero : Tail::BoundedOnly;
  return out;
}

// Phase variants: families whose instances are the cut prefixes of this
// family's instances, one per cut position inside the pumped regions and the
// suffix. Together with the family itself they cover every instance prefix
// beyond the enumeration horizon.
inline std::vector<Family> phase_variants(const Family& f) {
  std::vector<Family> out;
  for (size_t bi = 0; bi < f.blocks.size(); ++bi) {
    const Word& B = f.blocks[bi].first;
    for (size_t cut = 0; cut < B.size(); ++cut) {
      Family v;
      v.eps = f.eps;
      v.prefix = f.prefix;
      for (size_t bj = 0; bj <= bi; ++bj) v.blocks.push_back(f.blocks[bj]);
      v.blocks[bi].second = std::max(v.blocks[bi].second, 1);
      v.suffix.assign(B.begin(), B.begin() + cut);
      out.push_back(v);
    }
  }
  for (size_t cut = 0; cut < f.suffix.size(); ++cut) {
    Family v = f;
    v.suffix.assign(f.suffix.begin(), f.suffix.begin() + cut);
    out.push_back(v);
  }
  // Low-0 exponents additionally admit deleted-block variants.
  for (size_t bi = 0; bi < f.blocks.size(); ++bi)
    if (f.blocks[bi].second == 0) {
      Family v;
      v.eps = f.eps;
      v.prefix = f.prefix;
      for (size_t bj = 0; bj < f.blocks.size(); ++bj)
        if (bj != bi) v.blocks.push_back(f.blocks[bj]);
      v.suffix = f.suffix;
      if (v.arity() > 0) out.push_back(v);
    }
  return out;
}

// Families as analyzed: every exponent raised to at least 1 (deleted-block
// variants are produced by phase_variants).
inline Family analysis_form(const Family& f) {
  Family g = f;
  for (auto& [B, lo] : g.blocks) lo = std::max(lo, 1);
  return g;
}

}  // namespace collatz2
