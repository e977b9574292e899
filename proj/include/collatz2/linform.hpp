#pragma once

#include <map>
#include <string>

#include "collatz2/rat.hpp"

namespace collatz2 {

// Linear form over named symbols with exact rational coefficients.
// Zero coefficients are never stored, so equality is coefficient-wise.
class LinForm {
 public:
  LinForm() = default;

  static LinForm sym(const std::string& name, const Rat& coeff = Rat(1)) {
    LinForm f;
    f.set(name, coeff);
    return f;
  }

  const std::map<std::string, Rat>& coeffs() const { return c_; }

  Rat coeff(const std::string& name) const {
    auto it = c_.find(name);
    return it == c_.end() ? Rat(0) : it->second;
  }

  void set(const std::string& name, const Rat& coeff) {
    if (coeff == 0)
      c_.erase(name);
    else
      c_[name] = coeff;
  }

  bool is_zero() const { return c_.empty(); }

  LinForm& operator+=(const LinForm& o) {
    for (const auto& [s, k] : o.c_) set(s, coeff(s) + k);
    return *this;
  }
  LinForm& operator-=(const LinForm& o) {
    for (const auto& [s, k] : o.c_) set(s, coeff(s) - k);
    return *this;
  }
  LinForm& operator*=(const Rat& k) {
    if (k == 0) {
      c_.clear();
      return *this;
    }
    for (auto& [s, v] : c_) v *= k;
    return *this;
  }

  friend LinForm operator+(LinForm a, const LinForm& b) { return a += b; }
  friend LinForm operator-(LinForm a, const LinForm& b) { return a -= b; }
  friend LinForm operator*(LinForm a, const Rat& k) { return a *= k; }
  friend LinForm operator*(const Rat& k, LinForm a) { return a *= k; }
  friend LinForm operator-(LinForm a) { return a *= Rat(-1); }

  bool operator==(const LinForm& o) const { return c_ == o.c_; }
  bool operator!=(const LinForm& o) const { return c_ != o.c_; }
  bool operator<(const LinForm& o) const { return c_ < o.c_; }

  Rat eval(const std::map<std::string, Rat>& point) const {
    Rat r(0);
    for (const auto& [s, k] : c_) {
      auto it = point.find(s);
      if (it == point.end()) throw std::invalid_argument("LinForm::eval: unbound symbol " + s);
      r += k * it->second;
    }
    return r;
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [s, k] : c_) {
      if (first) {
        if (k == -1)
          out += "-";
        else if (k != 1)
          out += rat_str(k) + " ";
        first = false;
      } else {
        out += k < 0 ? " - " : " + ";
        Rat a = rat_abs(k);
        if (a != 1) out += rat_str(a) + " ";
      }
      out += s;
    }
    return out;
  }

 private:
  std::map<std::string, Rat> c_;
};

}  // namespace collatz2
