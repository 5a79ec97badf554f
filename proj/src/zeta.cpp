#include "zetalift/zeta.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace zl {

HoloFamily::HoloFamily(PolyhomSymbol P, HFunctionSpec h, Weight Q, int depth)
    : P_(std::move(P)), h_(std::move(h)), Q_(std::move(Q)), depth_(depth) {
  if (!P_.is_differential()) throw std::invalid_argument("P must be a differential symbol");
  if (P_.dim() != Q_.dim() || P_.size() != Q_.size()) throw std::invalid_argument("P and Q shapes differ");
  PowerFamily pf = complex_power_family(Q_, depth_);
  PolyhomSymbol base = h_.is_one() ? P_ : star_product(P_, h_of_weight(Q_, h_, depth_), depth_);
  if (!base.order().is_const()) throw std::invalid_argument("h(Q) must not depend on z");
  a_ = base.order().constant();
  PolyhomSymbol s = star_product(base, pf.symbol, depth_);
  if (Q_.symbol().grading()) s.set_grading(*Q_.symbol().grading());
  fam_ = PowerFamily{std::move(s), pf.c, pf.log_c};
}

HoloFamily HoloFamily::power(const Weight& Q, int depth) {
  const PolyhomSymbol& s = Q.symbol();
  return HoloFamily(PolyhomSymbol::identity(s.dim(), s.omega(), s.size()), HFunctionSpec::one(), Q, depth);
}

PolyhomSymbol HoloFamily::at(const Num& z) const { return fam_.at(z); }

PolyhomSymbol HoloFamily::dz_at(const Num& z) const {
  PolyhomSymbol d = PowerFamily{fam_.symbol.dz(), fam_.c, fam_.log_c}.at(z);
  if (fam_.log_c.is_zero()) return d;
  return d - fam_.at(z).scaled(ZPoly(fam_.log_c));
}

Num HoloFamily::pole(int j) const { return (a_ + Num(dim() - j)) / q(); }

std::optional<int> HoloFamily::pole_index(const Num& p) const {
  Num j = a_ + Num(dim()) - q() * p;
  if (!j.is_integer() || j.to_long() < 0) return std::nullopt;
  return static_cast<int>(j.to_long());
}

PolyhomSymbol family_symbol_at(const HoloFamily& F, const Num& z) { return F.at(z); }

namespace {

// Taylor coefficients of exp(-z log c) at z = p, orders 0..m.
std::vector<Num> exp_series(const Num& log_c, const Num& p, int m) {
  std::vector<Num> e(m + 1, Num(0));
  if (log_c.is_zero()) {
    e[0] = Num(1);
    return e;
  }
  Num e0 = p.is_zero() ? Num(1) : Num::inexact(std::exp(-p.value() * log_c.value()));
  Num pw(1);
  for (int k = 0; k <= m; ++k) {
    e[k] = e0 * pw / factorial(k);
    pw *= -log_c;
  }
  return e;
}

std::vector<Num> series_mul(const ZPoly& w, const std::vector<Num>& e) {
  std::vector<Num> g(e.size(), Num(0));
  for (size_t i = 0; i < e.size(); ++i)
    for (size_t k = 0; k <= i; ++k) g[i] += w.coeff(static_cast<int>(k)) * e[i - k];
  return g;
}

bool within(const Num& a, const Num& b, double tol) { return std::abs((a - b).value()) <= tol; }

}  // namespace

MeromorphicGerm laurent_germ(const PolyhomSymbol& sym, const Num& log_c, const Num& p, const ExcisionConvention& conv) {
  MeromorphicGerm g{p, Num(0), Num(0)};
  Num inner(0);
  for (const auto& t : trace_terms(sym, conv, p)) {
    if (t.s.degree() > 1) throw std::invalid_argument("radial exponent not affine in z");
    std::vector<Num> gs = series_mul(t.weight.shifted(p), exp_series(log_c, p, t.ell + 1));
    inner += gs[0] * t.inner;
    Num s0 = t.s.eval(p), s1 = t.s.coeff(1);
    if (!s0.is_zero()) {
      g.finite += gs[0] * t.K() / pow_int(s0, t.ell + 1);
      continue;
    }
    if (s1.is_zero()) throw std::domain_error("z-independent term of degree -n");
    for (int i = 0; i < t.ell; ++i)
      if (!gs[i].is_zero()) throw std::domain_error("double pole at z = " + p.str());
    Num d = t.K() / pow_int(s1, t.ell + 1);
    g.principal += gs[t.ell] * d;
    g.finite += gs[t.ell + 1] * d;
  }
  g.finite += conv.inner_override ? Num::inexact(conv.inner_override(p.value())) : inner;
  return g;
}

void check_reachable(const HoloFamily& F, const Num& p) {
  const PolyhomSymbol& sym = F.symbol();
  if (sym.exact_depth()) return;
  auto j = F.pole_index(p);
  if (j && *j >= sym.depth())
    throw std::out_of_range("pole index " + std::to_string(*j) + " at z = " + p.str() +
                            " is beyond truncation depth " + std::to_string(sym.depth()));
}

MeromorphicGerm zeta_germ(const HoloFamily& F, const Num& p, const ExcisionConvention& conv) {
  check_reachable(F, p);
  return laurent_germ(F.symbol(), F.log_c(), p, conv);
}

Num zeta_invariant(const HoloFamily& F, const ExcisionConvention& conv) { return zeta_germ(F, Num(0), conv).finite; }

KVCheck kv_residue_check(const HoloFamily& F, int j, double tol, const ExcisionConvention& conv) {
  KVCheck k;
  k.j = j;
  k.point = F.pole(j);
  k.lhs = zeta_germ(F, k.point, conv).principal;
  k.rhs = wres(F.at(k.point)) / F.q();
  k.tol = tol;
  k.pass = within(k.lhs, k.rhs, tol);
  return k;
}

PSCheck ps_fp_check(const HoloFamily& F, const Num& p, double tol, const ExcisionConvention& conv) {
  PSCheck c;
  c.point = p;
  c.fp = zeta_germ(F, p, conv).finite;
  PolyhomSymbol ap = F.at(p);
  c.differential = ap.is_differential();
  c.tr_term = c.differential ? Num(0) : canonical_trace(ap, conv);
  c.res_term = wres(F.dz_at(p)) / F.q();
  c.tol = tol;
  c.pass = within(c.fp, c.tr_term + c.res_term, tol);
  return c;
}

PSCheck ps_fp_check_at_pole(const HoloFamily& F, int j, double tol, const ExcisionConvention& conv) {
  return ps_fp_check(F, F.pole(j), tol, conv);
}

bool PoleReport::pass() const {
  for (const auto& e : poles)
    if (!e.kv.pass || (e.ps && !e.ps->pass)) return false;
  return true;
}

PoleReport pole_report(const HoloFamily& F, double tol, std::optional<int> J, const ExcisionConvention& conv) {
  int last = J ? *J : F.depth() - 1;
  PoleReport r;
  for (int j = 0; j <= last; ++j) {
    PoleEntry e;
    e.j = j;
    e.germ = zeta_germ(F, F.pole(j), conv);
    e.kv = kv_residue_check(F, j, tol, conv);
    if (F.at(F.pole(j)).is_differential()) e.ps = ps_fp_check(F, F.pole(j), tol, conv);
    r.poles.push_back(std::move(e));
  }
  return r;
}

std::vector<Num> detected_poles(const HoloFamily& F, const ExcisionConvention& conv) {
  std::vector<Num> roots;
  for (const auto& t : trace_terms(F.symbol(), conv)) {
    Num s1 = t.s.coeff(1);
    if (s1.is_zero()) continue;
    Num r = -t.s.constant() / s1;
    bool seen = false;
    for (const auto& x : roots) seen = seen || x == r;
    if (!seen) roots.push_back(r);
  }
  std::vector<Num> out;
  for (const auto& r : roots)
    if (!zeta_germ(F, r, conv).principal.is_zero()) out.push_back(r);
  return out;
}

Num index_via_residue(const Weight& Q, int depth) {
  if (!Q.symbol().grading()) throw std::invalid_argument("index needs a graded weight");
  return -sres(log_symbol(Q, depth)) / Q.order();
}

PolyhomSymbol shifted_dirac_symbol(const Num& a) {
  PolyhomSymbol d(1, Num(1), ZPoly(1), kExactDepth);
  d.add_key(0, 0, 0, {1}, 0, TrigPoly::constant(1, Num(1), ZPoly(1)));
  if (!a.is_zero()) d.add_key(0, 0, 1, {0}, 0, TrigPoly::constant(1, Num(1), ZPoly(a)));
  return d;
}

HoloFamily eta_family(const Num& a, int depth) {
  if (!a.is_real() || a.real() <= 0 || a.real() >= 1) throw std::invalid_argument("shift must lie in (0, 1)");
  PolyhomSymbol d2(1, Num(1), ZPoly(2), kExactDepth);
  d2.add_key(0, 0, 0, {2}, 0, TrigPoly::constant(1, Num(1), ZPoly(1)));
  d2.add_key(0, 0, 1, {1}, 0, TrigPoly::constant(1, Num(1), ZPoly(Num(2) * a)));
  d2.add_key(0, 0, 2, {0}, 0, TrigPoly::constant(1, Num(1), ZPoly(a * a)));
  return HoloFamily(shifted_dirac_symbol(a), HFunctionSpec::power(Num::rational(1, 2)), Weight(d2), depth);
}

// \int_{-1}^{1} sign(xi + a) dxi
Num eta_inner(const Num& a) { return (Num(1) + a) - (Num(1) - a); }

EtaResult eta_invariant(const Num& a, int depth) {
  HoloFamily F = eta_family(a, depth);
  ExcisionConvention pure{ExcisionConvention::Mode::SharpPure, {}};
  EtaResult r;
  r.outer = zeta_germ(F, Num(0), pure).finite;
  r.inner = eta_inner(a);
  r.local = r.outer + r.inner;
  // sum over m != 0 of i e^{-2 pi i m a} / (pi m) = (2/pi) Im(-log(1 - e^{2 pi i a}))
  std::complex<double> w = std::polar(1.0, 2 * std::numbers::pi * a.real());
  r.off_diagonal = Num::inexact(2 / std::numbers::pi * (-std::log(1.0 - w)).imag());
  r.value = r.local + r.off_diagonal;
  return r;
}

}  // namespace zl
