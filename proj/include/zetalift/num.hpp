#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <vector>

namespace zl {

using Rat = mpq_class;
using cplx = std::complex<double>;

// Complex number that stays an exact Gaussian rational as long as every
// input was exact; anything touched by a transcendental value degrades to
// a double-precision complex and stays that way.
class Num {
 public:
  Num() : exact_(true), re_(0), im_(0) {}
  Num(int v) : exact_(true), re_(v), im_(0) {}
  Num(long v) : exact_(true), re_(v), im_(0) {}
  Num(const Rat& re) : exact_(true), re_(re), im_(0) { re_.canonicalize(); }
  Num(const Rat& re, const Rat& im) : exact_(true), re_(re), im_(im) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Num rational(long p, long q) { return Num(Rat(p, q)); }
  static Num i() { return Num(Rat(0), Rat(1)); }
  static Num inexact(cplx v);
  // Accepts "3", "-3/4", "0.25", "i", "2i", "1/2-3/2i", "1e-3".
  static Num parse(const std::string& s);

  bool exact() const { return exact_; }
  const Rat& re() const { return re_; }
  const Rat& im() const { return im_; }
  cplx value() const;
  double real() const { return value().real(); }

  bool is_zero() const;
  bool is_real() const;
  bool is_integer() const;  // exact real integer
  long to_long() const;     // requires is_integer

  Num operator-() const;
  Num& operator+=(const Num& o);
  Num& operator-=(const Num& o);
  Num& operator*=(const Num& o);
  Num& operator/=(const Num& o);
  friend Num operator+(Num a, const Num& b) { return a += b; }
  friend Num operator-(Num a, const Num& b) { return a -= b; }
  friend Num operator*(Num a, const Num& b) { return a *= b; }
  friend Num operator/(Num a, const Num& b) { return a /= b; }
  friend bool operator==(const Num& a, const Num& b);
  friend bool operator!=(const Num& a, const Num& b) { return !(a == b); }

  Num conj() const;
  std::string str() const;

 private:
  bool exact_;
  Rat re_, im_;
  cplx v_{};
};

// Tolerance used to decide that an inexact Num is zero.
inline constexpr double kInexactZero = 1e-13;

Num pow_int(const Num& x, long k);
Num factorial(int k);
Num binomial_z(const Num& z, int k);  // z(z-1)...(z-k+1)/k!

}  // namespace zl
