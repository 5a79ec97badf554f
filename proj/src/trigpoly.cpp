#include "zetalift/trigpoly.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace zl {

TrigPoly TrigPoly::constant(int n, const Num& omega, const ZPoly& c) {
  TrigPoly t(n, omega);
  t.add_mode(Multi(n, 0), c);
  return t;
}

TrigPoly TrigPoly::mode(int n, const Num& omega, const Multi& k, const ZPoly& amp) {
  if (static_cast<int>(k.size()) != n) throw std::invalid_argument("mode index has wrong dimension");
  TrigPoly t(n, omega);
  t.add_mode(k, amp);
  return t;
}

TrigPoly TrigPoly::cos_mode(int n, const Num& omega, const Multi& k) {
  Multi mk(k);
  for (auto& v : mk) v = -v;
  TrigPoly t = mode(n, omega, k, Num::rational(1, 2));
  t.add_mode(mk, Num::rational(1, 2));
  return t;
}

TrigPoly TrigPoly::sin_mode(int n, const Num& omega, const Multi& k) {
  Multi mk(k);
  for (auto& v : mk) v = -v;
  // sin u = (e^{iu} - e^{-iu}) / 2i
  TrigPoly t = mode(n, omega, k, Num(Rat(0), Rat(-1, 2)));
  t.add_mode(mk, Num(Rat(0), Rat(1, 2)));
  return t;
}

double TrigPoly::period() const { return 2 * std::numbers::pi / omega_.real(); }

bool TrigPoly::is_constant() const {
  for (const auto& [k, a] : modes_)
    for (int v : k)
      if (v != 0) return false;
  return true;
}

bool TrigPoly::exact() const {
  if (!omega_.exact()) return false;
  for (const auto& [k, a] : modes_)
    if (!a.exact()) return false;
  return true;
}

ZPoly TrigPoly::mean() const { return amplitude(Multi(n_, 0)); }

ZPoly TrigPoly::amplitude(const Multi& k) const {
  auto it = modes_.find(k);
  return it == modes_.end() ? ZPoly() : it->second;
}

void TrigPoly::add_mode(const Multi& k, const ZPoly& amp) {
  if (amp.is_zero()) return;
  auto [it, fresh] = modes_.emplace(k, amp);
  if (!fresh) {
    it->second += amp;
    if (it->second.is_zero()) modes_.erase(it);
  }
}

TrigPoly TrigPoly::dx(int axis) const {
  TrigPoly r(n_, omega_);
  for (const auto& [k, a] : modes_) {
    if (k[axis] == 0) continue;
    r.add_mode(k, a * (Num::i() * omega_ * Num(k[axis])));
  }
  return r;
}

TrigPoly TrigPoly::dz() const {
  TrigPoly r(n_, omega_);
  for (const auto& [k, a] : modes_) r.add_mode(k, a.derivative());
  return r;
}

TrigPoly TrigPoly::at(const Num& z) const {
  TrigPoly r(n_, omega_);
  for (const auto& [k, a] : modes_) r.add_mode(k, ZPoly(a.eval(z)));
  return r;
}

TrigPoly TrigPoly::conj() const {
  TrigPoly r(n_, omega_);
  for (const auto& [k, a] : modes_) {
    Multi mk(k);
    for (auto& v : mk) v = -v;
    std::vector<Num> c;
    for (const auto& v : a.coeffs()) c.push_back(v.conj());
    r.add_mode(mk, ZPoly(std::move(c)));
  }
  return r;
}

Num TrigPoly::domain_integral() const {
  Num m = mean().constant();
  if (!mean().is_const()) throw std::logic_error("domain_integral of a z-dependent function");
  if (m.is_zero()) return Num(0);
  Num vol = Num::inexact(std::pow(period(), n_));
  return vol * m;
}

cplx TrigPoly::eval(const std::vector<double>& x, cplx z) const {
  cplx s = 0;
  double w = omega_.real();
  for (const auto& [k, a] : modes_) {
    double ph = 0;
    for (int i = 0; i < n_; ++i) ph += k[i] * x[i];
    s += a.eval(z) * std::polar(1.0, w * ph);
  }
  return s;
}

TrigPoly TrigPoly::operator-() const {
  TrigPoly r = *this;
  for (auto& [k, a] : r.modes_) a = -a;
  return r;
}

void TrigPoly::check_compatible(const TrigPoly& o) const {
  if (n_ != o.n_) throw std::invalid_argument("TrigPoly dimension mismatch");
  if (omega_ != o.omega_) throw std::invalid_argument("TrigPoly period mismatch");
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  if (o.modes_.empty()) return *this;
  if (modes_.empty()) {
    n_ = o.n_;
    omega_ = o.omega_;
  }
  check_compatible(o);
  for (const auto& [k, a] : o.modes_) add_mode(k, a);
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& o) { return *this += -o; }

TrigPoly& TrigPoly::operator*=(const ZPoly& s) {
  if (s.is_zero()) {
    modes_.clear();
    return *this;
  }
  for (auto it = modes_.begin(); it != modes_.end();) {
    it->second *= s;
    it = it->second.is_zero() ? modes_.erase(it) : std::next(it);
  }
  return *this;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  if (a.modes_.empty()) return TrigPoly(b.n_, b.omega_);
  if (b.modes_.empty()) return TrigPoly(a.n_, a.omega_);
  a.check_compatible(b);
  TrigPoly r(a.n_, a.omega_);
  for (const auto& [ka, va] : a.modes_)
    for (const auto& [kb, vb] : b.modes_) {
      Multi k(ka);
      for (int i = 0; i < a.n_; ++i) k[i] += kb[i];
      r.add_mode(k, va * vb);
    }
  return r;
}

bool operator==(const TrigPoly& a, const TrigPoly& b) {
  if (a.modes_.size() != b.modes_.size()) return false;
  for (const auto& [k, v] : a.modes_)
    if (b.amplitude(k) != v) return false;
  return true;
}

std::string TrigPoly::str() const {
  if (modes_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, a] : modes_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << a.str() << ")";
    bool zero = true;
    for (int v : k) zero = zero && v == 0;
    if (zero) continue;
    os << "e[";
    for (int i = 0; i < n_; ++i) os << (i ? "," : "") << k[i];
    os << "]";
  }
  return os.str();
}

TrigPoly trig_mul(const TrigPoly& a, const TrigPoly& b) { return a * b; }

Num trig_domain_integral(const TrigPoly& a) { return a.domain_integral(); }

}  // namespace zl
