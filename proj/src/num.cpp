#include "zetalift/num.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zl {

namespace {

Rat pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rat(mpz_class(1), p) : Rat(p);
}

Rat parse_real(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rat a = parse_real(s.substr(0, slash));
    Rat b = parse_real(s.substr(slash + 1));
    if (b == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Rat r = a / b;
    r.canonicalize();
    return r;
  }
  std::size_t pos = 0;
  bool neg = false;
  if (s[pos] == '+' || s[pos] == '-') neg = s[pos++] == '-';
  std::string digits;
  long frac = 0;
  bool dot = false, any = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits += c;
      any = true;
      if (dot) ++frac;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) throw std::invalid_argument("bad number '" + s + "'");
  long ex = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw std::invalid_argument("bad number '" + s + "'");
    std::size_t used = 0;
    ex = std::stol(s.substr(pos + 1), &used);
    if (pos + 1 + used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  }
  Rat r{mpz_class(digits, 10)};
  r *= pow10(ex - frac);
  r.canonicalize();
  return neg ? Rat(-r) : r;
}

}  // namespace

Num Num::inexact(cplx v) {
  Num n;
  n.exact_ = false;
  n.v_ = v;
  return n;
}

Num Num::parse(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (c != ' ' && c != '\t') s += c;
  if (s.empty()) throw std::invalid_argument("empty number");
  if (s.back() != 'i') return Num(parse_real(s));
  std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not an exponent sign or leading sign
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  std::string re = cut == std::string::npos ? "" : body.substr(0, cut);
  std::string im = cut == std::string::npos ? body : body.substr(cut);
  Rat imv;
  if (im.empty() || im == "+")
    imv = 1;
  else if (im == "-")
    imv = -1;
  else
    imv = parse_real(im);
  return Num(re.empty() ? Rat(0) : parse_real(re), imv);
}

cplx Num::value() const {
  if (!exact_) return v_;
  return {re_.get_d(), im_.get_d()};
}

bool Num::is_zero() const {
  if (exact_) return re_ == 0 && im_ == 0;
  return std::abs(v_) <= kInexactZero;
}

bool Num::is_real() const {
  if (exact_) return im_ == 0;
  return std::abs(v_.imag()) <= kInexactZero;
}

bool Num::is_integer() const { return exact_ && im_ == 0 && re_.get_den() == 1; }

long Num::to_long() const {
  if (!is_integer()) throw std::logic_error("Num::to_long on non-integer " + str());
  return re_.get_num().get_si();
}

Num Num::operator-() const {
  if (!exact_) return inexact(-v_);
  return Num(Rat(-re_), Rat(-im_));
}

Num& Num::operator+=(const Num& o) {
  if (exact_ && o.exact_) {
    re_ += o.re_;
    im_ += o.im_;
  } else {
    *this = inexact(value() + o.value());
  }
  return *this;
}

Num& Num::operator-=(const Num& o) {
  if (exact_ && o.exact_) {
    re_ -= o.re_;
    im_ -= o.im_;
  } else {
    *this = inexact(value() - o.value());
  }
  return *this;
}

Num& Num::operator*=(const Num& o) {
  if (exact_ && o.exact_) {
    Rat r = re_ * o.re_ - im_ * o.im_;
    Rat i = re_ * o.im_ + im_ * o.re_;
    re_ = r;
    im_ = i;
  } else {
    *this = inexact(value() * o.value());
  }
  return *this;
}

Num& Num::operator/=(const Num& o) {
  if (o.exact_ && o.re_ == 0 && o.im_ == 0) throw std::domain_error("Num division by zero");
  if (exact_ && o.exact_) {
    Rat d = o.re_ * o.re_ + o.im_ * o.im_;
    Rat r = (re_ * o.re_ + im_ * o.im_) / d;
    Rat i = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = r;
    im_ = i;
  } else {
    *this = inexact(value() / o.value());
  }
  return *this;
}

bool operator==(const Num& a, const Num& b) {
  if (a.exact_ && b.exact_) return a.re_ == b.re_ && a.im_ == b.im_;
  cplx x = a.value(), y = b.value();
  double scale = std::max({1.0, std::abs(x), std::abs(y)});
  return std::abs(x - y) <= kInexactZero * scale;
}

Num Num::conj() const {
  if (!exact_) return inexact(std::conj(v_));
  return Num(re_, Rat(-im_));
}

std::string Num::str() const {
  std::ostringstream os;
  if (!exact_) {
    os.precision(17);
    if (v_.imag() == 0.0)
      os << v_.real();
    else
      os << "(" << v_.real() << (v_.imag() < 0 ? "-" : "+") << std::abs(v_.imag()) << "i)";
    return os.str();
  }
  if (im_ == 0) return re_.get_str();
  if (re_ == 0) return (im_ == 1 ? std::string() : im_ == -1 ? std::string("-") : im_.get_str()) + "i";
  os << "(" << re_.get_str() << (im_ < 0 ? "-" : "+");
  Rat a = abs(im_);
  if (a != 1) os << a.get_str();
  os << "i)";
  return os.str();
}

Num pow_int(const Num& x, long k) {
  if (k < 0) return Num(1) / pow_int(x, -k);
  Num r(1), b = x;
  while (k) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

Num factorial(int k) {
  Rat r(1);
  for (int j = 2; j <= k; ++j) r *= j;
  return Num(r);
}

Num binomial_z(const Num& z, int k) {
  Num r(1);
  for (int j = 0; j < k; ++j) r *= (z - Num(j));
  return r / factorial(k);
}

}  // namespace zl
