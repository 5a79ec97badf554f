#include "zetalift/covering.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <stdexcept>

namespace zl {

namespace {

constexpr double kPi = std::numbers::pi;

ExcisionConvention sharp_pure() { return {ExcisionConvention::Mode::SharpPure, {}}; }

double sphere_area(int n) { return 2 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0); }

ZPoly trapezoid_average(const TrigPoly& c) {
  int N = 1;
  for (const auto& [k, amp] : c.modes())
    for (int ki : k) N = std::max(N, std::abs(ki) + 1);
  // sum over the grid of e^{i omega k.x_j} is N^n when every k_i = 0 mod N
  ZPoly avg;
  for (const auto& [k, amp] : c.modes())
    if (std::all_of(k.begin(), k.end(), [&](int ki) { return ki % N == 0; })) avg += amp;
  return avg;
}

struct Quad {
  cplx value;
  double error;
};

// \int_0^oo (1 + i s)^nu e^{-y s} ds
Quad rotated_integral(double nu, double y) {
  boost::math::quadrature::exp_sinh<double> q;
  double er = 0, ei = 0, l1 = 0;
  auto f = [&](double s) { return std::pow(cplx(1, s), nu) * std::exp(-y * s); };
  double re = q.integrate([&](double s) { return f(s).real(); }, 1e-15, &er, &l1);
  double im = q.integrate([&](double s) { return f(s).imag(); }, 1e-15, &ei, &l1);
  return {cplx(re, im), er + ei};
}

// nu (nu - 1) ... (nu - k + 1)
double falling(double nu, int k) {
  double p = 1;
  for (int i = 0; i < k; ++i) p *= nu - i;
  return p;
}

// One even-extended power: sigma = c_plus xi^nu on xi >= 1, c_minus |xi|^nu on
// xi <= -1.
struct PowerTerm {
  double nu;
  cplx c_plus, c_minus;
};

std::vector<PowerTerm> power_terms(const PolyhomSymbol& sigma, bool* x_dependent) {
  PolyhomSymbol s = sigma.size() == 1 ? sigma : sigma.matrix_trace();
  std::vector<PowerTerm> out;
  for (const HomTerm& t : s.terms(0, 0)) {
    if (t.ell != 0) throw std::invalid_argument("off-diagonal kernel of a log term");
    if (!t.mu.is_const()) throw std::invalid_argument("off-diagonal kernel of a z-dependent symbol");
    ZPoly m = t.coef.mean();
    if (!m.is_const()) throw std::invalid_argument("off-diagonal kernel of a z-dependent symbol");
    if (x_dependent && t.coef.modes().size() > (m.is_zero() ? 0u : 1u)) *x_dependent = true;
    if (m.is_zero()) continue;
    Num mu = t.mu.constant();
    if (!mu.is_real()) throw std::invalid_argument("complex radial exponent");
    int a = t.alpha[0];
    // polynomial core: the representative is a polynomial, kernel on the diagonal
    if (mu.is_integer() && mu.to_long() >= 0 && mu.to_long() % 2 == 0) continue;
    cplx c = m.constant().value();
    out.push_back({a + mu.real(), c, a % 2 == 0 ? c : -c});
  }
  return out;
}

int circle_multiple(const CoveringSpec& cov) {
  double p = cov.period() / (2 * kPi);
  long r = std::lround(p);
  if (r < 1 || std::abs(p - double(r)) > 1e-12) throw std::invalid_argument("off-diagonal kernel needs L in 2 pi N");
  return static_cast<int>(r);
}

}  // namespace

CoveringSpec::CoveringSpec(int n, double L, std::optional<double> eps) : n_(n), L_(L), eps_(eps ? *eps : L / 4) {
  if (n < 1) throw std::invalid_argument("covering dimension must be positive");
  if (!(L > 0)) throw std::invalid_argument("period must be positive");
  if (!(eps_ > 0) || eps_ >= L / 2) throw std::invalid_argument("need 0 < eps < L/2");
}

double CoveringSpec::volume() const { return std::pow(L_, n_); }

bool CoveringSpec::matches(const PolyhomSymbol& sigma) const {
  double w = 2 * kPi / L_;
  return sigma.dim() == n_ && std::abs(sigma.omega().value() - w) <= 1e-12 * w;
}

LiftedSymbol lift_symbol(const PolyhomSymbol& sigma, const CoveringSpec& cov) {
  if (!cov.matches(sigma)) throw std::invalid_argument("symbol period does not match the covering");
  return LiftedSymbol{sigma, true};
}

PolyhomSymbol project_symbol(const LiftedSymbol& s) { return s.base; }

PolyhomSymbol cell_average(const PolyhomSymbol& sigma) {
  int n = sigma.dim();
  PolyhomSymbol out(n, sigma.omega(), sigma.order(), sigma.depth(), sigma.size());
  for (int r = 0; r < sigma.size(); ++r)
    for (int c = 0; c < sigma.size(); ++c)
      for (const auto& [j, comp] : sigma.entry_comps(r, c))
        for (const auto& [key, coef] : comp) {
          ZPoly avg = trapezoid_average(coef);
          if (!avg.is_zero()) out.add_key(r, c, j, key.first, key.second, TrigPoly::constant(n, sigma.omega(), avg));
        }
  if (sigma.grading()) out.set_grading(*sigma.grading());
  return out;
}

EpsLocalDecomposition eps_local_decompose(const PolyhomSymbol& sigma, const CoveringSpec& cov, int gamma_max) {
  if (!cov.matches(sigma)) throw std::invalid_argument("symbol period does not match the covering");
  EpsLocalDecomposition d{sigma, {}};
  OffDiagonalKernel& k = d.off_diagonal;
  k.n = cov.dim();
  k.L = cov.period();
  if (sigma.is_differential()) return d;
  if (cov.dim() != 1) throw std::invalid_argument("off-diagonal kernel of a non-differential symbol needs n = 1");
  circle_multiple(cov);
  bool xdep = false;
  std::vector<PowerTerm> terms = power_terms(sigma, &xdep);
  k.zero_mode_only = xdep;
  const double L = cov.period();
  const double norm = 1 / (2 * kPi);
  // \int_1^oo xi^nu e^{i xi y} dxi = e^{i y} i \int_0^oo (1 + i s)^nu e^{-y s} ds, e^{i y} = 1 on the lattice
  for (int m = 1; m <= gamma_max; ++m) {
    cplx plus = 0, minus = 0;
    double y = m * L;
    for (const auto& t : terms) {
      Quad I = rotated_integral(t.nu, y);
      cplx F = cplx(0, 1) * I.value;
      plus += norm * (t.c_plus * F + t.c_minus * std::conj(F));
      minus += norm * (t.c_plus * std::conj(F) + t.c_minus * F);
      k.truncation_bound += 2 * norm * (std::abs(t.c_plus) + std::abs(t.c_minus)) * I.error;
    }
    k.translates.push_back({{m}, plus});
    k.translates.push_back({{-m}, minus});
  }
  // pairs m, -m beyond gamma_max: (c_+ + c_-) 2 Re F(y),
  // 2 Re F(y) ~ 2 sum over odd j of (-1)^{(j+1)/2} nu^(j) / y^{j+1}
  const int last = 15;
  for (const auto& t : terms) {
    cplx c = norm * (t.c_plus + t.c_minus);
    if (c == cplx(0)) continue;
    for (int j = 1; j <= last + 2; j += 2) {
      oracle::Estimate h = oracle::hurwitz_zeta(j + 1.0, gamma_max + 1.0);
      double coef = 2 * ((j + 1) / 2 % 2 == 0 ? 1.0 : -1.0) * falling(t.nu, j) * std::pow(L, -(j + 1.0));
      cplx term = c * coef * h.value;
      if (j > last) {
        k.truncation_bound += 2 * std::abs(term);
        break;
      }
      k.tail += term;
      k.truncation_bound += std::abs(c * coef) * h.error;
    }
  }
  return d;
}

OffDiagonalKernel gaussian_off_diagonal(double t, const CoveringSpec& cov) {
  if (!(t > 0)) throw std::invalid_argument("Gaussian kernel needs t > 0");
  OffDiagonalKernel k;
  k.n = cov.dim();
  k.L = cov.period();
  const double L = cov.period();
  const int n = cov.dim();
  int M = static_cast<int>(std::ceil(std::sqrt(4 * t * 80) / L)) + 1;
  double norm = std::pow(4 * kPi * t, -n / 2.0);
  Multi m(n, -M);
  while (true) {
    long r2 = 0;
    for (int v : m) r2 += long(v) * v;
    if (r2 > 0) k.translates.push_back({m, norm * std::exp(-double(r2) * L * L / (4 * t))});
    int i = 0;
    while (i < n && m[i] == M) m[i++] = -M;
    if (i == n) break;
    ++m[i];
  }
  k.truncation_bound = 2 * n * norm * std::pow(2 * M + 3.0, n - 1) * std::exp(-std::pow(L * (M + 1), 2) / (4 * t));
  return k;
}

OffDiagonalKernel shifted_sign_off_diagonal(double a, const CoveringSpec& cov, int M) {
  if (cov.dim() != 1) throw std::invalid_argument("shifted model lives on the circle");
  double frac = a - std::floor(a);
  if (frac == 0) throw std::domain_error("D_a is not invertible for integer a");
  OffDiagonalKernel k;
  k.L = cov.period();
  // k(gamma) = i e^{-i a gamma} / (pi gamma)
  for (int m = 1; m <= 8 * M; ++m)
    for (int s : {1, -1}) {
      double g = s * m * cov.period();
      cplx v = cplx(0, 1) * std::polar(1.0, -a * g) / (kPi * g) * std::exp(-std::pow(double(m) / M, 2));
      k.translates.push_back({{s * m}, v});
    }
  // mollified sawtooth: error from the jumps at distance min(a, 1 - a), plus the cut at 8M
  double dist = std::min(frac, 1 - frac);
  k.truncation_bound = (2 * boost::math::erfc(kPi * M * dist) + 2 * std::exp(-64.0) / kPi) / cov.volume();
  return k;
}

GammaValue gamma_res(const LiftedSymbol& s) {
  return {GammaValue::Kind::Residue, wres(cell_average(s.base)), 0};
}

GammaValue gamma_sres(const LiftedSymbol& s) {
  if (!s.base.grading()) throw std::invalid_argument("supertrace needs a grading");
  return {GammaValue::Kind::Residue, sres(cell_average(s.base)), 0};
}

GammaValue gamma_tr_canonical(const LiftedSymbol& s, const ExcisionConvention& conv) {
  return {GammaValue::Kind::CanonicalTrace, canonical_trace(cell_average(s.base), conv), 0};
}

GammaValue gamma_tr_smoothing(const MultiplierKernel& k, const CoveringSpec& cov) {
  const int n = cov.dim();
  auto f = [&](double r) { return std::pow(r, n - 1) * k.symbol(r); };
  double I = 0, err = 0;
  if (std::isfinite(k.support)) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    I = GK::integrate(f, 0.0, k.support, 15, 1e-14, &err);
  } else {
    const double R = 1e3;
    if (std::abs(k.symbol(R)) * std::pow(R, n + 1) > 1e-10) throw std::domain_error("multiplier decay bound violated");
    boost::math::quadrature::exp_sinh<double> q;
    double l1 = 0;
    I = q.integrate(f, 1e-14, &err, &l1);
  }
  double scale = cov.volume() * std::pow(2 * kPi, -n) * sphere_area(n);
  return {GammaValue::Kind::SmoothingTrace, Num::inexact(scale * I), scale * err};
}

GammaValue gamma_tr_smoothing(const OffDiagonalKernel& k) {
  cplx s = k.tail;
  for (const auto& t : k.translates) s += t.value;
  double vol = std::pow(k.L, k.n);
  return {GammaValue::Kind::SmoothingTrace, Num::inexact(vol * s), vol * k.truncation_bound};
}

LiftedFamily lift_family(const HoloFamily& F, const CoveringSpec& cov) {
  return LiftedFamily{F, cov, lift_symbol(F.symbol(), cov)};
}

MeromorphicGerm gamma_zeta_germ(const LiftedFamily& F, const Num& p, const ExcisionConvention& conv) {
  check_reachable(F.base, p);
  return laurent_germ(cell_average(F.symbol.base), F.base.log_c(), p, conv);
}

PoleReport lifted_defect_check(const HoloFamily& F, const CoveringSpec& cov, double tol, std::optional<int> J,
                               const ExcisionConvention& conv) {
  LiftedFamily LF = lift_family(F, cov);
  int last = J ? *J : F.depth() - 1;
  PoleReport r;
  for (int j = 0; j <= last; ++j) {
    Num p = F.pole(j);
    PoleEntry e;
    e.j = j;
    e.germ = gamma_zeta_germ(LF, p, conv);
    e.kv.j = j;
    e.kv.point = p;
    e.kv.lhs = e.germ.principal;
    e.kv.rhs = gamma_res(lift_symbol(F.at(p), cov)).value / F.q();
    e.kv.tol = tol;
    e.kv.pass = std::abs((e.kv.lhs - e.kv.rhs).value()) <= tol;
    PolyhomSymbol ap = F.at(p);
    if (ap.is_differential()) {
      PSCheck c;
      c.point = p;
      c.fp = e.germ.finite;
      c.differential = true;
      c.tr_term = Num(0);
      c.res_term = gamma_res(lift_symbol(F.dz_at(p), cov)).value / F.q();
      c.tol = tol;
      c.pass = std::abs((c.fp - c.tr_term - c.res_term).value()) <= tol;
      e.ps = c;
    }
    r.poles.push_back(std::move(e));
  }
  return r;
}

ComparisonResult comparison_trace(const HoloFamily& base, const CoverFamily& cover, const CoveringSpec& cov,
                                  const std::optional<OracleModel>& oracle, double tol) {
  if (!equivalent(base.at(Num(0)), cover.family.at(Num(0))))
    throw std::invalid_argument("families differ by a non-smoothing term at z = 0");
  ComparisonResult r;
  r.tol = tol;
  MeromorphicGerm gb = zeta_germ(base, Num(0));
  MeromorphicGerm gc = gamma_zeta_germ(lift_family(cover.family, cov), Num(0));
  r.base_fp = gb.finite;
  r.cover_fp = gc.finite;
  r.principal_difference = gc.principal - gb.principal;
  cplx pert = 0;
  r.smoothing_trace = 0;
  if (cover.perturbation) {
    const auto& g = *cover.perturbation;
    // closed form on the TR side, quadrature on the smoothing side
    pert = g.amplitude * cov.volume() * std::pow(4 * kPi * g.t, -cov.dim() / 2.0);
    MultiplierKernel mk{[g](double x) { return g.amplitude * std::exp(-g.t * x * x); }};
    r.smoothing_trace = gamma_tr_smoothing(mk, cov).value.value();
  }
  r.difference = (r.cover_fp - r.base_fp).value() + pert;
  r.pass = std::abs(r.difference - r.smoothing_trace) <= tol && std::abs(r.principal_difference.value()) <= 1e-10;
  if (oracle) {
    r.base_oracle = oracle::spectral_zeta(oracle->model, oracle->base_patch, 0.0).value;
    r.cover_oracle = oracle::gamma_zeta(oracle->model, oracle->cover_patch, 0.0).value + pert;
    r.pass = r.pass && std::abs(*r.base_oracle - r.base_fp.value()) <= tol &&
             std::abs(*r.cover_oracle - (r.cover_fp.value() + pert)) <= tol;
  }
  return r;
}

LiftedZetaResult lifted_zeta_equality(const HoloFamily& F, const CoveringSpec& cov,
                                      const std::optional<OracleModel>& oracle, double tol) {
  LiftedZetaResult r;
  r.tol = tol;
  r.base_fp = zeta_invariant(F);
  r.cover_fp = gamma_zeta_germ(lift_family(F, cov), Num(0)).finite;
  if (oracle) {
    r.base_oracle = oracle::spectral_zeta(oracle->model, oracle->base_patch, 0.0).value;
    r.cover_oracle = oracle::gamma_zeta(oracle->model, oracle->cover_patch, 0.0).value;
  }
  if (!F.h().is_one()) {
    r.asserted = false;
    r.discrepancy = gamma_tr_smoothing(eps_local_decompose(F.at(Num(0)), cov).off_diagonal).value.value();
    r.pass = true;
    return r;
  }
  r.discrepancy = (r.base_fp - r.cover_fp).value();
  r.pass = std::abs(r.discrepancy) <= tol;
  if (oracle)
    r.pass = r.pass && std::abs(*r.base_oracle - r.base_fp.value()) <= tol &&
             std::abs(*r.cover_oracle - r.cover_fp.value()) <= tol;
  return r;
}

L2IndexResult l2_index(const Weight& Q, const CoveringSpec& cov, int depth,
                       const std::optional<std::pair<oracle::ModelSpectrum, oracle::ModelSpectrum>>& graded,
                       double tol) {
  if (!Q.symbol().grading()) throw std::invalid_argument("index needs a graded weight");
  L2IndexResult r;
  r.tol = tol;
  r.base = index_via_residue(Q, depth);
  r.gamma = -gamma_sres(lift_symbol(log_symbol(Q, depth), cov)).value / Q.order();
  r.pass = std::abs((r.base - r.gamma).value()) <= tol && std::abs(r.base.value()) <= tol;
  if (graded) {
    // McKean-Singer: the supertrace is constant in t and equals the index
    std::vector<double> s;
    for (double t : {1.0, 2.0, 4.0})
      s.push_back(oracle::heat_trace(graded->first, t) - oracle::heat_trace(graded->second, t));
    r.oracle = s.back();
    bool flat = std::abs(s[0] - s[2]) <= tol && std::abs(s[1] - s[2]) <= tol;
    r.pass = r.pass && flat && std::abs(*r.oracle - r.base.real()) <= tol;
  }
  return r;
}

EtaGammaResult eta_gamma(const Num& a, const CoveringSpec& cov, int depth, double tol) {
  HoloFamily F = eta_family(a, depth);
  EtaGammaResult r;
  r.tol = tol;
  r.eta_gamma = gamma_zeta_germ(lift_family(F, cov), Num(0), sharp_pure()).finite + eta_inner(a);
  r.eta = eta_invariant(a, depth).value;
  r.oracle = oracle::eta_series(oracle::ModelSpectrum::shifted(a.real()), 0.0).value;
  r.difference = r.eta - r.eta_gamma;
  r.smoothing_trace = gamma_tr_smoothing(shifted_sign_off_diagonal(a.real(), cov)).value.value();
  r.pass = r.eta_gamma.is_zero() && std::abs(r.eta.value() - r.oracle) <= tol &&
           std::abs(r.difference.value() - r.smoothing_trace) <= tol;
  return r;
}

PoissonCheck poisson_consistency(const PolyhomSymbol& sigma, const CoveringSpec& cov, double tol) {
  if (cov.dim() != 1 || !cov.matches(sigma)) throw std::invalid_argument("Poisson check lives on the circle");
  if (!sigma.order().is_const() || !(sigma.order().constant().real() < -1))
    throw std::invalid_argument("Poisson check needs a trace-class symbol");
  bool xdep = false;
  std::vector<PowerTerm> terms = power_terms(sigma, &xdep);
  if (xdep) throw std::invalid_argument("Poisson check needs constant coefficients");
  int p = circle_multiple(cov);
  PoissonCheck c;
  c.tol = tol;
  // lattice xi_k = k / p; |xi| >= 1 from k = p on, half weight at k = p
  c.discrete = 0;
  for (const auto& t : terms) {
    oracle::Estimate h = oracle::hurwitz_zeta(-t.nu, double(p));
    cplx side = std::pow(double(p), -t.nu) * h.value - 0.5;
    c.discrete += (t.c_plus + t.c_minus) * side;
    c.bound += std::abs(t.c_plus + t.c_minus) * std::pow(double(p), -t.nu) * h.error;
  }
  c.canonical = canonical_trace(sigma);
  GammaValue off = gamma_tr_smoothing(eps_local_decompose(sigma, cov).off_diagonal);
  c.off_diagonal = off.value.value();
  c.bound += off.error;
  c.residual = std::abs(c.discrete - c.canonical.value() - c.off_diagonal);
  c.pass = c.residual <= tol;
  return c;
}

ThetaCheck theta_identity(double t, const CoveringSpec& cov, double tol) {
  ThetaCheck c;
  c.t = t;
  c.lhs = oracle::torus_heat_trace(t, cov.dim(), cov.period()) -
          oracle::gamma_heat_trace_laplacian(t, cov.dim(), cov.period());
  c.rhs = gamma_tr_smoothing(gaussian_off_diagonal(t, cov)).value.real();
  c.residual = std::abs(c.lhs - c.rhs);
  c.pass = c.residual <= tol;
  return c;
}

}  // namespace zl
