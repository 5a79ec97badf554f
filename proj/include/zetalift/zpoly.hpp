#pragma once

#include <string>
#include <vector>

#include "zetalift/num.hpp"

namespace zl {

// Polynomial in the family parameter z. Symbols that do not depend on z
// simply carry constant polynomials.
class ZPoly {
 public:
  ZPoly() = default;
  ZPoly(const Num& c) {
    if (!c.is_zero()) c_.push_back(c);
  }
  ZPoly(int c) : ZPoly(Num(c)) {}
  static ZPoly z() { return ZPoly(std::vector<Num>{Num(0), Num(1)}); }
  static ZPoly affine(const Num& c0, const Num& c1) { return ZPoly(std::vector<Num>{c0, c1}); }
  explicit ZPoly(std::vector<Num> c) : c_(std::move(c)) { trim(); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  bool is_const() const { return c_.size() <= 1; }
  bool exact() const;
  Num coeff(int k) const { return k < static_cast<int>(c_.size()) ? c_[k] : Num(0); }
  Num constant() const { return coeff(0); }
  const std::vector<Num>& coeffs() const { return c_; }

  Num eval(const Num& z) const;
  cplx eval(cplx z) const;
  ZPoly derivative() const;
  // coefficients of p(p0 + u) as a polynomial in u
  ZPoly shifted(const Num& p0) const;

  ZPoly operator-() const;
  ZPoly& operator+=(const ZPoly& o);
  ZPoly& operator-=(const ZPoly& o);
  ZPoly& operator*=(const ZPoly& o);
  ZPoly& operator*=(const Num& s);
  friend ZPoly operator+(ZPoly a, const ZPoly& b) { return a += b; }
  friend ZPoly operator-(ZPoly a, const ZPoly& b) { return a -= b; }
  friend ZPoly operator*(ZPoly a, const ZPoly& b) { return a *= b; }
  friend ZPoly operator*(ZPoly a, const Num& s) { return a *= s; }
  friend bool operator==(const ZPoly& a, const ZPoly& b);
  friend bool operator!=(const ZPoly& a, const ZPoly& b) { return !(a == b); }

  std::string str() const;

 private:
  void trim();
  std::vector<Num> c_;
};

}  // namespace zl
