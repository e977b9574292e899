#pragma once

#include <array>
#include <optional>

#include "collatz2/rat.hpp"

namespace collatz2 {

struct Mat2 {
  std::array<std::array<Rat, 2>, 2> m{};

  static Mat2 identity() {
    Mat2 I;
    I.m[0][0] = 1;
    I.m[1][1] = 1;
    return I;
  }

  Rat det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  Rat tr() const { return m[0][0] + m[1][1]; }

  friend Mat2 operator*(const Mat2& A, const Mat2& B) {
    Mat2 C;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) C.m[i][j] = A.m[i][0] * B.m[0][j] + A.m[i][1] * B.m[1][j];
    return C;
  }
  friend Mat2 operator*(const Rat& k, const Mat2& A) {
    Mat2 C = A;
    for (auto& row : C.m)
      for (auto& x : row) x *= k;
    return C;
  }
  friend Mat2 operator+(const Mat2& A, const Mat2& B) {
    Mat2 C;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) C.m[i][j] = A.m[i][j] + B.m[i][j];
    return C;
  }
  friend Mat2 operator-(const Mat2& A, const Mat2& B) { return A + Rat(-1) * B; }
  bool operator==(const Mat2& o) const { return m == o.m; }

  Mat2 pow(long e) const {
    Mat2 r = identity(), b = *this;
    while (e > 0) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  std::array<Rat, 2> apply(const std::array<Rat, 2>& v) const {
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
  }
};

// Rational spectral data of a 2x2 matrix: A = l1*P1 + l2*P2 with rank-one
// projectors, or A = l*I. Defective or irrational cases return nullopt.
struct Spectral {
  Rat l1, l2;
  Mat2 P1, P2;
  bool scalar = false;  // A = l1 * I
};

inline std::optional<Spectral> spectral2x2(const Mat2& A) {
  Rat t = A.tr(), d = A.det();
  Rat disc = t * t - Rat(4) * d;
  Rat root;
  if (!rat_sqrt_exact(disc, root)) return std::nullopt;
  Spectral s;
  s.l1 = (t + root) / 2;
  s.l2 = (t - root) / 2;
  if (s.l1 == s.l2) {
    if (!(A == s.l1 * Mat2::identity())) return std::nullopt;  // defective
    s.scalar = true;
    s.P1 = Mat2::identity();
    return s;
  }
  s.P1 = (Rat(1) / (s.l1 - s.l2)) * (A - s.l2 * Mat2::identity());
  s.P2 = (Rat(1) / (s.l2 - s.l1)) * (A - s.l1 * Mat2::identity());
  return s;
}

// Finite sum of terms gamma * prod_i base_i^{m_i}; canonical form keeps terms
// sorted by base vector with equal bases combined and zero gammas dropped.
struct ExpTerm {
  Rat gamma;
  std::vector<Rat> base;

  bool operator<(const ExpTerm& o) const { return base < o.base; }
};

struct ExpPoly {
  int arity = 0;
  std::vector<ExpTerm> terms;

  static ExpPoly constant(int arity, const Rat& c) {
    ExpPoly p;
    p.arity = arity;
    if (c != 0) p.terms.push_back({c, std::vector<Rat>(arity, Rat(1))});
    return p;
  }

  void canonicalize() {
    std::sort(terms.begin(), terms.end());
    std::vector<ExpTerm> out;
    for (const auto& t : terms) {
      if (!out.empty() && out.back().base == t.base)
        out.back().gamma += t.gamma;
      else
        out.push_back(t);
    }
    terms.clear();
    for (auto& t : out)
      if (t.gamma != 0) terms.push_back(t);
  }

  bool is_zero() const { return terms.empty(); }

  Rat eval(const std::vector<long>& m) const {
    if (static_cast<int>(m.size()) != arity) throw std::invalid_argument("ExpPoly::eval: arity mismatch");
    Rat r(0);
    for (const auto& t : terms) {
      Rat v = t.gamma;
      for (int i = 0; i < arity; ++i) v *= rat_pow(t.base[i], m[i]);
      r += v;
    }
    return r;
  }

  ExpPoly& operator+=(const ExpPoly& o) {
    for (const auto& t : o.terms) terms.push_back(t);
    canonicalize();
    return *this;
  }
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) {
    ExpPoly nb = b;
    for (auto& t : nb.terms) t.gamma = -t.gamma;
    return a += nb;
  }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
    ExpPoly p;
    p.arity = a.arity;
    for (const auto& ta : a.terms)
      for (const auto& tb : b.terms) {
        ExpTerm t;
        t.gamma = ta.gamma * tb.gamma;
        t.base.resize(a.arity);
        for (int i = 0; i < a.arity; ++i) t.base[i] = ta.base[i] * tb.base[i];
        p.terms.push_back(t);
      }
    p.canonicalize();
    return p;
  }
  friend ExpPoly operator*(const Rat& k, ExpPoly a) {
    for (auto& t : a.terms) t.gamma *= k;
    a.canonicalize();
    return a;
  }

  // Scale the exponent-i base of every term by lambda and the gamma by
  // lambda^shift (lambda != 0): represents multiplying by lambda^{m_i+shift}.
  void mul_power(int i, const Rat& lambda, long shift) {
    Rat g = rat_pow(lambda, shift);
    for (auto& t : terms) {
      t.base[i] *= lambda;
      t.gamma *= g;
    }
    canonicalize();
  }

  // Substitute m_i = c + 2k (residue class restriction): bases square, gammas
  // pick up base^c, and the result is an ExpPoly in k at the same arity slot.
  ExpPoly class_restrict(const std::vector<long>& offset) const {
    ExpPoly p;
    p.arity = arity;
    for (const auto& t : terms) {
      ExpTerm nt;
      nt.gamma = t.gamma;
      nt.base.resize(arity);
      for (int i = 0; i < arity; ++i) {
        nt.gamma *= rat_pow(t.base[i], offset[i]);
        nt.base[i] = t.base[i] * t.base[i];
      }
      p.terms.push_back(nt);
    }
    p.canonicalize();
    return p;
  }

  std::string str(const std::vector<std::string>& names = {"m1", "m2"}) const {
    if (terms.empty()) return "0";
    std::string s;
    for (size_t k = 0; k < terms.size(); ++k) {
      const auto& t = terms[k];
      if (k) s += " + ";
      s += rat_str(t.gamma);
      for (int i = 0; i < arity; ++i)
        if (t.base[i] != 1) s += " * (" + rat_str(t.base[i]) + ")^" + names[i];
    }
    return s;
  }
};

// Symbolic 2x2 matrix with ExpPoly entries.
struct SymMat {
  int arity = 0;
  std::array<std::array<ExpPoly, 2>, 2> e;

  static SymMat constant(int arity, const Mat2& A) {
    SymMat s;
    s.arity = arity;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) s.e[i][j] = ExpPoly::constant(arity, A.m[i][j]);
    return s;
  }

  Mat2 eval(const std::vector<long>& m) const {
    Mat2 A;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) A.m[i][j] = e[i][j].eval(m);
    return A;
  }

  friend SymMat operator*(const Mat2& C, const SymMat& S) {
    SymMat out;
    out.arity = S.arity;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out.e[i][j] = ExpPoly::constant(S.arity, C.m[i][0]) * S.e[0][j] +
                      ExpPoly::constant(S.arity, C.m[i][1]) * S.e[1][j];
    return out;
  }

  ExpPoly trace() const { return e[0][0] + e[1][1]; }
};

}  // namespace collatz2
