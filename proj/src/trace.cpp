#include "zetalift/trace.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace zl {

Num SphereIntegralTable::compute(const Multi& alpha) {
  for (int a : alpha)
    if (a % 2 != 0) return Num(0);
  int n = static_cast<int>(alpha.size());
  if (n == 1) return Num(2);
  double lg = 0;
  for (int a : alpha) lg += std::lgamma((a + 1) / 2.0);
  lg -= std::lgamma((abs_multi(alpha) + n) / 2.0);
  return Num::inexact(2 * std::exp(lg));
}

Num SphereIntegralTable::operator()(const Multi& alpha) const {
  if (static_cast<int>(alpha.size()) != n_) throw std::invalid_argument("sphere integral dimension mismatch");
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(alpha);
  if (it != cache_.end()) return it->second;
  return cache_[alpha] = compute(alpha);
}

const SphereIntegralTable& sphere_table(int n) {
  static const auto tables = [] {
    std::array<std::unique_ptr<SphereIntegralTable>, 9> t;
    for (int d = 1; d < 9; ++d) t[d] = std::make_unique<SphereIntegralTable>(d);
    return t;
  }();
  if (n < 1 || n > 8) throw std::invalid_argument("sphere tables cover dimensions 1..8");
  return *tables[n];
}

namespace {

PolyhomSymbol scalar_of(const PolyhomSymbol& s) { return s.size() == 1 ? s : s.matrix_trace(); }

Num residue_sum(const PolyhomSymbol& s) {
  int n = s.dim();
  const auto& tab = sphere_table(n);
  Num total(0);
  for (const auto& [j, comp] : s.entry_comps(0, 0)) {
    ZPoly deg = s.order() - ZPoly(Num(j));
    if (deg != ZPoly(Num(-n))) continue;
    for (const auto& [key, coef] : comp) {
      if (key.second != 0) continue;
      Num sp = tab(key.first);
      if (sp.is_zero()) continue;
      ZPoly m = coef.mean();
      if (!m.is_const()) throw std::invalid_argument("residue of a z-dependent component");
      total += sp * m.constant();
    }
  }
  return total * pow_int(s.omega(), -n);
}

bool even_nonneg_integer(const Num& v) {
  if (!v.is_integer()) return false;
  long m = v.to_long();
  return m >= 0 && m % 2 == 0;
}

}  // namespace

DensityOnBase res_density(const PolyhomSymbol& sigma) {
  PolyhomSymbol s = scalar_of(sigma);
  int n = s.dim();
  const auto& tab = sphere_table(n);
  TrigPoly dens(n, s.omega());
  Num norm = Num::inexact(std::pow(2 * std::numbers::pi, -n));
  for (const auto& [j, comp] : s.entry_comps(0, 0)) {
    if (s.order() - ZPoly(Num(j)) != ZPoly(Num(-n))) continue;
    for (const auto& [key, coef] : comp) {
      if (key.second != 0) continue;
      Num sp = tab(key.first);
      if (!sp.is_zero()) dens += coef * ZPoly(sp * norm);
    }
  }
  return {dens};
}

Num wres(const PolyhomSymbol& sigma) { return residue_sum(scalar_of(sigma)); }

Num sres(const PolyhomSymbol& sigma) { return residue_sum(sigma.supertrace()); }

Num RadialMero::K() const {
  Num k = factorial(ell);
  return ell % 2 == 0 ? -k : k;
}

Num RadialMero::value(const Num& d) const {
  Num s = d + Num(n);
  if (s.is_zero()) throw std::domain_error("radial finite part evaluated at its pole d = -n");
  return K() / pow_int(s, ell + 1) + inner;
}

RadialMero radial_finite_part(const HomTerm& t, int n, const ExcisionConvention& conv, const Num& at) {
  RadialMero r{n, t.ell, Num(0)};
  Num mu0 = t.mu.eval(at);
  if (conv.mode == ExcisionConvention::Mode::Sharp && t.ell == 0 && even_nonneg_integer(mu0))
    r.inner = Num(1) / (Num(abs_multi(t.alpha) + n) + mu0);
  return r;
}

Num TraceTerm::K() const {
  Num k = factorial(ell);
  return ell % 2 == 0 ? -k : k;
}

std::vector<TraceTerm> trace_terms(const PolyhomSymbol& sigma, const ExcisionConvention& conv, const Num& at) {
  if (conv.mode == ExcisionConvention::Mode::Smooth) throw std::invalid_argument("smooth excision is reserved");
  PolyhomSymbol s = scalar_of(sigma);
  int n = s.dim();
  const auto& tab = sphere_table(n);
  Num scale = pow_int(s.omega(), -n);
  std::vector<TraceTerm> out;
  for (const auto& [j, comp] : s.entry_comps(0, 0))
    for (const auto& [key, coef] : comp) {
      Num sp = tab(key.first);
      if (sp.is_zero()) continue;
      ZPoly w = coef.mean() * (sp * scale);
      if (w.is_zero()) continue;
      HomTerm h{coef, key.first, s.mu_of(j, key.first), key.second};
      RadialMero rm = radial_finite_part(h, n, conv, at);
      out.push_back(TraceTerm{w, h.degree() + ZPoly(Num(n)), key.second, rm.inner});
    }
  return out;
}

bool excluded_order(const ZPoly& order, int n, const Num& z) {
  Num m = order.eval(z);
  return m.is_integer() && m.to_long() >= -n;
}

Num canonical_trace_at(const PolyhomSymbol& sigma, const Num& z, const ExcisionConvention& conv) {
  int n = sigma.dim();
  if (excluded_order(sigma.order(), n, z))
    throw std::domain_error("canonical trace undefined at integer order " + sigma.order().eval(z).str() +
                            " >= -" + std::to_string(n));
  Num total(0), inner(0);
  for (const auto& t : trace_terms(sigma, conv, z)) {
    Num s = t.s.eval(z);
    if (s.is_zero()) throw std::domain_error("canonical trace hit the radial pole");
    Num w = t.weight.eval(z);
    total += w * t.K() / pow_int(s, t.ell + 1);
    inner += w * t.inner;
  }
  if (conv.inner_override) return total + Num::inexact(conv.inner_override(z.value()));
  return total + inner;
}

Num canonical_trace(const PolyhomSymbol& sigma, const ExcisionConvention& conv) {
  if (!sigma.order().is_const()) throw std::invalid_argument("canonical_trace of a z-dependent symbol needs z");
  return canonical_trace_at(sigma, Num(0), conv);
}

Num str_canonical(const PolyhomSymbol& sigma, const ExcisionConvention& conv) {
  return canonical_trace(sigma.supertrace(), conv);
}

}  // namespace zl
