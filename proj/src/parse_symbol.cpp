#include <cctype>
#include <stdexcept>

#include "zetalift/symbol.hpp"

namespace zl {

namespace {

struct Raw {
  TrigPoly coef;
  Multi alpha;
  Num mu;
  int ell = 0;
};
using Expr = std::vector<Raw>;

class Parser {
 public:
  Parser(const std::string& s, int n, Num omega) : s_(s), n_(n), w_(std::move(omega)) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (p_ != s_.size()) fail("unexpected '" + std::string(1, s_[p_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("symbol '" + s_ + "': " + msg + " at offset " + std::to_string(p_));
  }
  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  char peek() {
    skip();
    return p_ < s_.size() ? s_[p_] : '\0';
  }
  std::string ident() {
    skip();
    std::size_t b = p_;
    while (p_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[p_]))) ++p_;
    return s_.substr(b, p_ - b);
  }
  std::string number_text() {
    skip();
    std::size_t b = p_;
    while (p_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p_])) || s_[p_] == '.')) ++p_;
    if (b == p_) fail("expected a number");
    return s_.substr(b, p_ - b);
  }

  Expr constant(const Num& c) {
    return {Raw{TrigPoly::constant(n_, w_, ZPoly(c)), Multi(n_, 0), Num(0), 0}};
  }
  Expr from_trig(const TrigPoly& t) { return {Raw{t, Multi(n_, 0), Num(0), 0}}; }

  static Expr mul(const Expr& a, const Expr& b) {
    Expr out;
    for (const auto& x : a)
      for (const auto& y : b) {
        Raw r{x.coef * y.coef, x.alpha, x.mu + y.mu, x.ell + y.ell};
        for (std::size_t i = 0; i < r.alpha.size(); ++i) r.alpha[i] += y.alpha[i];
        if (!r.coef.is_zero()) out.push_back(std::move(r));
      }
    return out;
  }
  static Expr neg(Expr a) {
    for (auto& r : a) r.coef = -r.coef;
    return a;
  }

  Expr expr() {
    Expr e;
    bool first = true;
    for (;;) {
      char c = peek();
      bool minus = false;
      if (c == '+' || c == '-') {
        ++p_;
        minus = c == '-';
      } else if (!first) {
        break;
      }
      Expr t = term();
      if (minus) t = neg(t);
      e.insert(e.end(), t.begin(), t.end());
      first = false;
      c = peek();
      if (c != '+' && c != '-') break;
    }
    return e;
  }

  bool starts_factor(char c) const {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '|' || c == '.';
  }

  Expr term() {
    Expr e = power();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++p_;
        e = mul(e, power());
      } else if (c == '/') {
        ++p_;
        e = mul(e, reciprocal(power()));
      } else if (starts_factor(c)) {
        e = mul(e, power());
      } else {
        break;
      }
    }
    return e;
  }

  // Only single-term divisors with x-independent coefficient.
  Expr reciprocal(const Expr& d) {
    if (d.size() != 1 || !d[0].coef.is_constant() || d[0].ell != 0 || abs_multi(d[0].alpha) != 0)
      fail("can only divide by a constant times a power of |xi|");
    Num c = d[0].coef.mean().constant();
    if (!d[0].coef.mean().is_const() || c.is_zero()) fail("division by zero");
    return {Raw{TrigPoly::constant(n_, w_, ZPoly(Num(1) / c)), Multi(n_, 0), -d[0].mu, 0}};
  }

  Num exponent() {
    skip();
    if (eat('(')) {
      std::size_t b = p_;
      while (p_ < s_.size() && s_[p_] != ')') ++p_;
      std::string inner = s_.substr(b, p_ - b);
      expect(')');
      try {
        return Num::parse(inner);
      } catch (const std::exception&) {
        fail("bad exponent '" + inner + "'");
      }
    }
    bool minus = eat('-');
    Num v = Num::parse(number_text());
    return minus ? -v : v;
  }

  Expr power() {
    Expr base = atom();
    if (!eat('^')) return base;
    Num k = exponent();
    if (k.is_integer() && k.to_long() >= 0) {
      Expr r = constant(Num(1));
      for (long i = 0; i < k.to_long(); ++i) r = mul(r, base);
      return r;
    }
    if (base.size() != 1 || base[0].ell != 0 || abs_multi(base[0].alpha) != 0 || !base[0].coef.is_constant())
      fail("non-integer or negative powers need a single |xi|-power base");
    Num c = base[0].coef.mean().constant();
    if (!k.is_integer() && c != Num(1)) fail("non-integer power of a non-unit coefficient");
    Num ck = k.is_integer() ? pow_int(c, k.to_long()) : Num(1);
    return {Raw{TrigPoly::constant(n_, w_, ZPoly(ck)), Multi(n_, 0), base[0].mu * k, 0}};
  }

  Multi linear_form() {
    // sum of [int] [*] xK terms
    Multi k(n_, 0);
    bool first = true;
    for (;;) {
      char c = peek();
      int sign = 1;
      if (c == '+' || c == '-') {
        ++p_;
        sign = c == '-' ? -1 : 1;
      } else if (!first) {
        break;
      }
      first = false;
      long coef = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        Num v = Num::parse(number_text());
        if (!v.is_integer()) fail("trig frequencies must be integers");
        coef = v.to_long();
        eat('*');
      }
      std::string id = ident();
      int axis = axis_of(id, "x");
      if (axis < 0) fail("expected x or x1..x" + std::to_string(n_));
      k[axis] += static_cast<int>(sign * coef);
      c = peek();
      if (c != '+' && c != '-') break;
    }
    return k;
  }

  int axis_of(const std::string& id, const std::string& stem) const {
    if (id == stem && n_ == 1) return 0;
    if (id.size() > stem.size() && id.compare(0, stem.size(), stem) == 0) {
      std::string d = id.substr(stem.size());
      for (char ch : d)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return -1;
      int a = std::stoi(d);
      if (a >= 1 && a <= n_) return a - 1;
    }
    return -1;
  }

  Expr abs_xi() {
    std::string id = ident();
    if (id != "xi") fail("expected |xi|");
    expect('|');
    return {Raw{TrigPoly::constant(n_, w_, 1), Multi(n_, 0), Num(1), 0}};
  }

  Expr atom() {
    char c = peek();
    if (c == '(') {
      ++p_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (c == '|') {
      ++p_;
      return abs_xi();
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return constant(Num::parse(number_text()));
    std::string id = ident();
    if (id.empty()) fail("expected a factor");
    if (id == "i") return constant(Num::i());
    if (id == "log") {
      expect('|');
      Expr e = abs_xi();
      e[0].mu = Num(0);
      e[0].ell = 1;
      return e;
    }
    if (id == "cos" || id == "sin") {
      expect('(');
      Multi k = linear_form();
      expect(')');
      return from_trig(id == "cos" ? TrigPoly::cos_mode(n_, w_, k) : TrigPoly::sin_mode(n_, w_, k));
    }
    if (id == "e") {
      expect('(');
      Multi k(n_, 0);
      for (int i = 0; i < n_; ++i) {
        if (i) expect(',');
        bool minus = eat('-');
        Num v = Num::parse(number_text());
        if (!v.is_integer()) fail("mode indices must be integers");
        k[i] = static_cast<int>(minus ? -v.to_long() : v.to_long());
      }
      expect(')');
      return from_trig(TrigPoly::mode(n_, w_, k, 1));
    }
    int axis = axis_of(id, "xi");
    if (axis >= 0) {
      Multi a(n_, 0);
      a[axis] = 1;
      return {Raw{TrigPoly::constant(n_, w_, 1), a, Num(0), 0}};
    }
    fail("unknown name '" + id + "'");
  }

  const std::string& s_;
  std::size_t p_ = 0;
  int n_;
  Num w_;
};

}  // namespace

PolyhomSymbol parse_symbol(const std::string& text, int n, const Num& omega) {
  Expr e = Parser(text, n, omega).run();
  if (e.empty()) return PolyhomSymbol(n, omega, ZPoly(), kExactDepth);
  Num order = Num(abs_multi(e[0].alpha)) + e[0].mu;
  for (const auto& r : e) {
    Num d = Num(abs_multi(r.alpha)) + r.mu;
    if (!(d - order).is_integer()) throw std::invalid_argument("symbol '" + text + "' mixes non-integer-spaced degrees");
    if ((d - order).to_long() > 0) order = d;
  }
  PolyhomSymbol s(n, omega, ZPoly(order), kExactDepth);
  for (const auto& r : e) {
    Num d = Num(abs_multi(r.alpha)) + r.mu;
    s.add_key(0, 0, static_cast<int>((order - d).to_long()), r.alpha, r.ell, r.coef);
  }
  return s;
}

}  // namespace zl
