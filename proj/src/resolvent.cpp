#include "zetalift/resolvent.hpp"

#include <cmath>
#include <stdexcept>

namespace zl {

namespace {

void add_res(ResComp& comp, int n, const Multi& alpha, int t, const TrigPoly& coef) {
  if (coef.is_zero()) return;
  if (alpha[n - 1] >= 2) {
    Multi base = alpha;
    base[n - 1] -= 2;
    add_res(comp, n, base, t, coef);
    for (int i = 0; i < n - 1; ++i) {
      Multi s = base;
      s[i] += 2;
      add_res(comp, n, s, t, -coef);
    }
    return;
  }
  auto [it, fresh] = comp.emplace(ResKey{alpha, t}, coef);
  if (!fresh) {
    it->second += coef;
    if (it->second.is_zero()) comp.erase(it);
  }
}

// xi-derivatives of every component of every entry of sigma(Q), by gamma.
class DerivCache {
 public:
  DerivCache(const PolyhomSymbol& s, int max_order) : s_(s), by_size_(multis_by_size(s.dim(), max_order)) {
    int k = s.size();
    cache_.resize(k * k);
    for (int e = 0; e < k * k; ++e)
      for (const auto& [j, comp] : s.entry_comps(e / k, e % k)) {
        auto& m = cache_[e][j];
        m[Multi(s.dim(), 0)] = comp;
        for (int g = 1; g <= max_order - j; ++g)
          for (const auto& gam : by_size_[g]) {
            int axis = 0;
            while (gam[axis] == 0) ++axis;
            Multi prev = gam;
            prev[axis] -= 1;
            m[gam] = comp_dxi(m[prev], s.order() - ZPoly(Num(j + g - 1)), axis);
          }
      }
  }
  const std::vector<Multi>& of_size(int g) const { return by_size_[g]; }
  const Comp* get(int e, int j, const Multi& gam) const {
    auto it = cache_[e].find(j);
    if (it == cache_[e].end()) return nullptr;
    auto jt = it->second.find(gam);
    return jt == it->second.end() ? nullptr : &jt->second;
  }

 private:
  const PolyhomSymbol& s_;
  std::vector<std::vector<Multi>> by_size_;
  std::vector<std::map<int, std::map<Multi, Comp>>> cache_;
};

// Sum over kk + l + |gamma| = j of (-i)^|gamma|/gamma! d_xi^gamma sigma_{q-kk}
// d_x^gamma b_{-q-l}, leaving out (kk, gamma) = (0, 0).
std::vector<ResComp> accumulate(const PolyhomSymbol& sig, const DerivCache& dc, const ResolventSymbol& b, int j) {
  int k = sig.size(), n = sig.dim();
  std::vector<ResComp> out(k * k);
  Num mi = -Num::i();
  for (int r = 0; r < k; ++r)
    for (int col = 0; col < k; ++col)
      for (int s = 0; s < k; ++s)
        for (const auto& [l, bc] : b.entry_comps(s, col)) {
          if (l > j) break;
          for (int g = 0; g <= j - l; ++g) {
            int kk = j - l - g;
            if (kk == 0 && g == 0) continue;
            Num f0 = pow_int(mi, g);
            for (const auto& gam : dc.of_size(g)) {
              const Comp* sc = dc.get(r * k + s, kk, gam);
              if (!sc || sc->empty()) continue;
              ZPoly f(f0 / multi_factorial(gam));
              for (const auto& [bkey, bcoef] : bc) {
                TrigPoly db = bcoef;
                for (int i = 0; i < n; ++i)
                  for (int m = 0; m < gam[i]; ++m) db = db.dx(i);
                if (db.is_zero()) continue;
                for (const auto& [skey, scoef] : *sc) {
                  Multi a = skey.first;
                  for (int i = 0; i < n; ++i) a[i] += bkey.first[i];
                  add_res(out[r * k + col], n, a, bkey.second, (scoef * db) * f);
                }
              }
            }
          }
        }
  return out;
}

}  // namespace

Weight::Weight(PolyhomSymbol symbol, double cut, std::optional<double> agmon)
    : sym_(std::move(symbol)), cut_(cut), agmon_(agmon) {
  if (std::abs(cut - 3.141592653589793) > 1e-12)
    throw std::invalid_argument("only the spectral cut along the negative real axis is supported");
  if (!sym_.order().is_const()) throw std::invalid_argument("weight order must not depend on z");
  q_ = sym_.order().constant();
  if (!q_.exact() || !q_.is_real() || q_.re() <= 0) throw std::invalid_argument("weight order must be a positive rational");
  int k = sym_.size(), n = sym_.dim();
  bool have_c = false;
  for (int r = 0; r < k; ++r)
    for (int col = 0; col < k; ++col) {
      for (const auto& [j, comp] : sym_.entry_comps(r, col))
        for (const auto& [key, coef] : comp)
          if (key.second != 0) throw std::invalid_argument("weight symbol must be log-free");
      const Comp& lead = sym_.comp(r, col, 0);
      if (r != col) {
        if (!lead.empty()) throw std::invalid_argument("weight leading symbol is not scalar");
        continue;
      }
      if (lead.size() != 1 || lead.begin()->first != TermKey{Multi(n, 0), 0} || !lead.begin()->second.is_constant())
        throw std::invalid_argument("weight leading symbol must be c |xi|^q with constant c");
      ZPoly cz = lead.begin()->second.mean();
      if (!cz.is_const()) throw std::invalid_argument("weight leading coefficient depends on z");
      Num c = cz.constant();
      if (!c.is_real() || c.real() <= 0) throw std::invalid_argument("weight leading coefficient must be positive");
      if (have_c && c != c_) throw std::invalid_argument("weight leading symbol is not scalar");
      c_ = c;
      have_c = true;
    }
}

ResolventSymbol::ResolventSymbol(int n, Num omega, Num q, Num c, int depth, int k, Num d0)
    : n_(n), omega_(std::move(omega)), q_(std::move(q)), c_(std::move(c)), d0_(std::move(d0)), depth_(depth), k_(k),
      ents_(k * k) {}

Num ResolventSymbol::rho(int j, const Multi& alpha, int t) const {
  return d0_ + q_ * Num(t) - Num(j + abs_multi(alpha));
}

void ResolventSymbol::add(int r, int col, int j, const Multi& alpha, int t, const TrigPoly& coef) {
  if (coef.is_zero() || j >= depth_) return;
  auto& comps = ents_[r * k_ + col];
  add_res(comps[j], n_, alpha, t, coef);
  if (comps[j].empty()) comps.erase(j);
}

const ResComp& ResolventSymbol::comp(int r, int col, int j) const {
  static const ResComp empty;
  const auto& m = ents_[r * k_ + col];
  auto it = m.find(j);
  return it == m.end() ? empty : it->second;
}

bool ResolventSymbol::is_identity() const {
  for (int r = 0; r < k_; ++r)
    for (int col = 0; col < k_; ++col) {
      const auto& m = ents_[r * k_ + col];
      if (r != col) {
        if (!m.empty()) return false;
        continue;
      }
      if (m.size() != 1 || m.begin()->first != 0) return false;
      const auto& c0 = m.begin()->second;
      if (c0.size() != 1 || c0.begin()->first != ResKey{Multi(n_, 0), 0}) return false;
      if (c0.begin()->second != TrigPoly::constant(n_, omega_, 1)) return false;
    }
  return true;
}

cplx ResolventSymbol::eval(int r, int col, const std::vector<double>& x, const std::vector<double>& xi,
                           cplx lambda) const {
  double r2 = 0;
  for (double v : xi) r2 += v * v;
  double rr = std::sqrt(r2);
  cplx mu = c_.value() * std::pow(rr, q_.real());
  cplx s = 0;
  for (const auto& [j, comp] : ents_[r * k_ + col])
    for (const auto& [key, coef] : comp) {
      double mono = 1;
      for (int i = 0; i < n_; ++i) mono *= std::pow(xi[i], key.first[i]);
      s += coef.eval(x) * mono * std::pow(rr, rho(j, key.first, key.second).real()) *
           std::pow(mu - lambda, -key.second);
    }
  return s;
}

ResolventSymbol resolvent_symbol(const Weight& Q, int depth) {
  if (depth < 1) throw std::invalid_argument("truncation depth must be >= 1");
  const PolyhomSymbol& sig = Q.symbol();
  int n = sig.dim(), k = sig.size();
  ResolventSymbol b(n, sig.omega(), Q.order(), Q.leading_coefficient(), depth, k, -Q.order());
  for (int i = 0; i < k; ++i) b.add(i, i, 0, Multi(n, 0), 1, TrigPoly::constant(n, sig.omega(), 1));
  DerivCache dc(sig, depth - 1);
  for (int j = 1; j < depth; ++j) {
    auto acc = accumulate(sig, dc, b, j);
    for (int e = 0; e < k * k; ++e)
      for (const auto& [key, coef] : acc[e]) b.add(e / k, e % k, j, key.first, key.second + 1, -coef);
  }
  return b;
}

ResolventSymbol resolvent_defect(const Weight& Q, const ResolventSymbol& b) {
  const PolyhomSymbol& sig = Q.symbol();
  int n = sig.dim(), k = sig.size(), depth = b.depth();
  ResolventSymbol d(n, sig.omega(), Q.order(), Q.leading_coefficient(), depth, k, Num(0));
  DerivCache dc(sig, depth - 1);
  for (int j = 0; j < depth; ++j) {
    auto acc = accumulate(sig, dc, b, j);
    for (int e = 0; e < k * k; ++e) {
      for (const auto& [key, coef] : acc[e]) d.add(e / k, e % k, j, key.first, key.second, coef);
      // (c|xi|^q - lambda) (c|xi|^q - lambda)^{-t} = (c|xi|^q - lambda)^{1-t}
      for (const auto& [key, coef] : b.comp(e / k, e % k, j)) d.add(e / k, e % k, j, key.first, key.second - 1, coef);
    }
  }
  return d;
}

PolyhomSymbol PowerFamily::at(const Num& z) const {
  PolyhomSymbol s = symbol.at(z);
  if (c == Num(1)) return s;
  Num f = (c.exact() && z.is_integer()) ? pow_int(c, -z.to_long()) : Num::inexact(std::exp(-z.value() * log_c.value()));
  return s.scaled(ZPoly(f));
}

PowerFamily complex_power_family(const Weight& Q, int depth) {
  ResolventSymbol b = resolvent_symbol(Q, depth);
  const PolyhomSymbol& sig = Q.symbol();
  int n = sig.dim(), k = sig.size();
  const Num& q = Q.order();
  const Num& c = Q.leading_coefficient();
  PolyhomSymbol out(n, sig.omega(), ZPoly::affine(Num(0), -q), depth, k);
  if (sig.grading()) out.set_grading(*sig.grading());
  // -(1/2 pi i) \oint lambda^{-z} (mu - lambda)^{-t} d lambda
  //   = z (z+1) ... (z+t-2) / (t-1)! * mu^{-z-t+1}
  std::map<int, ZPoly> pt;
  auto poly_t = [&pt](int t) {
    auto it = pt.find(t);
    if (it != pt.end()) return it->second;
    ZPoly p(1);
    for (int m = 0; m <= t - 2; ++m) p *= ZPoly::affine(Num(m), Num(1));
    p *= Num(1) / factorial(t - 1);
    return pt[t] = p;
  };
  for (int e = 0; e < k * k; ++e)
    for (const auto& [j, comp] : b.entry_comps(e / k, e % k))
      for (const auto& [key, coef] : comp) {
        ZPoly f = poly_t(key.second) * pow_int(c, 1 - key.second);
        out.add_key(e / k, e % k, j, key.first, 0, coef * f);
      }
  Num lc = c == Num(1) ? Num(0) : Num::inexact(std::log(c.value()));
  return PowerFamily{out, c, lc};
}

PolyhomSymbol complex_power_symbol(const Weight& Q, const Num& z, int depth) {
  return complex_power_family(Q, depth).at(z);
}

PolyhomSymbol log_symbol(const Weight& Q, int depth) {
  PowerFamily fam = complex_power_family(Q, depth);
  PolyhomSymbol d = -fam.symbol.dz().at(Num(0));
  if (fam.log_c.is_zero()) return d;
  const PolyhomSymbol& sig = Q.symbol();
  PolyhomSymbol id = PolyhomSymbol::identity(sig.dim(), sig.omega(), sig.size()).scaled(ZPoly(fam.log_c));
  return d + id;
}

HFunctionSpec HFunctionSpec::power(const Num& s) {
  if (s.real() <= 0) throw std::invalid_argument("power kind needs Re s > 0");
  return {Kind::Power, {}, s};
}

HFunctionSpec HFunctionSpec::composite(std::vector<Num> coeffs, const Num& s) {
  if (s.real() <= 0) throw std::invalid_argument("power kind needs Re s > 0");
  return {Kind::Composite, std::move(coeffs), s};
}

bool HFunctionSpec::is_one() const {
  return kind == Kind::Polynomial && poly.size() == 1 && poly[0] == Num(1);
}

namespace {

PolyhomSymbol poly_of(const Weight& Q, const std::vector<Num>& coeffs, int depth) {
  const PolyhomSymbol& sig = Q.symbol();
  PolyhomSymbol pw = PolyhomSymbol::identity(sig.dim(), sig.omega(), sig.size());
  if (sig.grading()) pw.set_grading(*sig.grading());
  std::optional<PolyhomSymbol> sum;
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    if (m > 0) pw = star_product(pw, sig, depth);
    if (coeffs[m].is_zero()) continue;
    PolyhomSymbol term = pw.scaled(ZPoly(coeffs[m]));
    sum = sum ? *sum + term : term;
  }
  if (!sum) return PolyhomSymbol(sig.dim(), sig.omega(), ZPoly(), depth, sig.size());
  return sum->truncated(depth);
}

}  // namespace

PolyhomSymbol h_of_weight(const Weight& Q, const HFunctionSpec& h, int depth) {
  switch (h.kind) {
    case HFunctionSpec::Kind::Polynomial:
      return poly_of(Q, h.poly, depth);
    case HFunctionSpec::Kind::Power:
      if (h.s.real() <= 0) throw std::invalid_argument("power kind needs Re s > 0");
      return complex_power_symbol(Q, h.s, depth);
    case HFunctionSpec::Kind::Composite:
      if (h.s.real() <= 0) throw std::invalid_argument("power kind needs Re s > 0");
      return star_product(poly_of(Q, h.poly, depth), complex_power_symbol(Q, h.s, depth), depth);
  }
  throw std::invalid_argument("unsupported h kind");
}

}  // namespace zl
