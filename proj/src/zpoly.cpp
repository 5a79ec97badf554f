#include "zetalift/zpoly.hpp"

#include <sstream>

namespace zl {

void ZPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

bool ZPoly::exact() const {
  for (const auto& c : c_)
    if (!c.exact()) return false;
  return true;
}

Num ZPoly::eval(const Num& z) const {
  Num r(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + *it;
  return r;
}

cplx ZPoly::eval(cplx z) const {
  cplx r(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + it->value();
  return r;
}

ZPoly ZPoly::derivative() const {
  std::vector<Num> d;
  for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * Num(static_cast<long>(k)));
  return ZPoly(std::move(d));
}

ZPoly ZPoly::shifted(const Num& p0) const {
  // Horner on polynomials: r(u) = r(u)*(p0+u) + c_k
  ZPoly r;
  ZPoly lin = ZPoly::affine(p0, Num(1));
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    r *= lin;
    r += ZPoly(*it);
  }
  return r;
}

ZPoly ZPoly::operator-() const {
  ZPoly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

ZPoly& ZPoly::operator+=(const ZPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

ZPoly& ZPoly::operator-=(const ZPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

ZPoly& ZPoly::operator*=(const ZPoly& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    return *this;
  }
  std::vector<Num> r(c_.size() + o.c_.size() - 1);
  for (std::size_t a = 0; a < c_.size(); ++a)
    for (std::size_t b = 0; b < o.c_.size(); ++b) r[a + b] += c_[a] * o.c_[b];
  c_ = std::move(r);
  trim();
  return *this;
}

ZPoly& ZPoly::operator*=(const Num& s) {
  for (auto& c : c_) c *= s;
  trim();
  return *this;
}

bool operator==(const ZPoly& a, const ZPoly& b) {
  std::size_t n = std::max(a.c_.size(), b.c_.size());
  for (std::size_t k = 0; k < n; ++k)
    if (a.coeff(static_cast<int>(k)) != b.coeff(static_cast<int>(k))) return false;
  return true;
}

std::string ZPoly::str() const {
  if (c_.empty()) return "0";
  if (c_.size() == 1) return c_[0].str();
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[k].str();
    if (k == 1) os << "*z";
    if (k > 1) os << "*z^" << k;
  }
  return os.str();
}

}  // namespace zl
