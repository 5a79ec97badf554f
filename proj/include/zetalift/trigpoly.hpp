#pragma once

#include <map>
#include <string>
#include <vector>

#include "zetalift/zpoly.hpp"

namespace zl {

using Multi = std::vector<int>;

// Finite Fourier series sum_k a_k(z) exp(i omega k.x) on the torus of period
// L = 2 pi / omega in every axis. Amplitudes are polynomials in z so that
// z-dependent symbol families share the same coefficient type.
class TrigPoly {
 public:
  TrigPoly() = default;
  TrigPoly(int n, Num omega) : n_(n), omega_(std::move(omega)) {}
  static TrigPoly constant(int n, const Num& omega, const ZPoly& c);
  static TrigPoly mode(int n, const Num& omega, const Multi& k, const ZPoly& amp);
  // cos(omega k.x) and sin(omega k.x)
  static TrigPoly cos_mode(int n, const Num& omega, const Multi& k);
  static TrigPoly sin_mode(int n, const Num& omega, const Multi& k);

  int dim() const { return n_; }
  const Num& omega() const { return omega_; }
  double period() const;
  const std::map<Multi, ZPoly>& modes() const { return modes_; }
  bool is_zero() const { return modes_.empty(); }
  bool is_constant() const;
  bool exact() const;
  ZPoly mean() const;  // zero-mode amplitude
  ZPoly amplitude(const Multi& k) const;

  void add_mode(const Multi& k, const ZPoly& amp);
  TrigPoly dx(int axis) const;
  TrigPoly dz() const;
  TrigPoly at(const Num& z) const;  // substitute z, constant amplitudes
  TrigPoly conj() const;            // complex conjugate function, z real

  // Vol(F) * mean, Vol(F) = L^n.
  Num domain_integral() const;
  cplx eval(const std::vector<double>& x, cplx z = 0.0) const;

  TrigPoly operator-() const;
  TrigPoly& operator+=(const TrigPoly& o);
  TrigPoly& operator-=(const TrigPoly& o);
  TrigPoly& operator*=(const ZPoly& s);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
  friend TrigPoly operator*(TrigPoly a, const ZPoly& s) { return a *= s; }
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
  friend bool operator==(const TrigPoly& a, const TrigPoly& b);
  friend bool operator!=(const TrigPoly& a, const TrigPoly& b) { return !(a == b); }

  std::string str() const;

 private:
  void check_compatible(const TrigPoly& o) const;
  int n_ = 1;
  Num omega_{1};
  std::map<Multi, ZPoly> modes_;
};

TrigPoly trig_mul(const TrigPoly& a, const TrigPoly& b);
Num trig_domain_integral(const TrigPoly& a);

}  // namespace zl
