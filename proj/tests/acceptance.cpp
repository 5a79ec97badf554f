// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance        run every criterion
//   acceptance N      run criterion N only
#include <boost/math/special_functions/zeta.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zetalift/covering.hpp"

using namespace zl;

namespace {

const Num kOne(1);
constexpr double kPi = std::numbers::pi;

PolyhomSymbol sym(const char* s, int n = 1) { return parse_symbol(s, n, kOne); }
Weight weight(const char* s, int n = 1) { return Weight(sym(s, n)); }

// Collects sub-checks of one criterion.
struct Check {
  bool ok = true;
  std::ostringstream log;

  void near(const std::string& what, cplx a, cplx b, double tol) {
    double d = std::abs(a - b);
    if (!(d <= tol)) {
      ok = false;
      log << "  " << what << ": |" << a << " - " << b << "| = " << d << " > " << tol << "\n";
    }
  }
  void near(const std::string& what, const Num& a, const Num& b, double tol) { near(what, a.value(), b.value(), tol); }
  void near(const std::string& what, double a, double b, double tol) { near(what, cplx(a), cplx(b), tol); }
  void that(const std::string& what, bool cond) {
    if (!cond) {
      ok = false;
      log << "  " << what << " failed\n";
    }
  }
};

// (1 / 2 pi i) \oint f around p on a circle of radius rho
cplx contour_residue(const std::function<cplx(cplx)>& f, cplx p, double rho = 0.05, int N = 64) {
  cplx s = 0;
  for (int k = 0; k < N; ++k) {
    cplx u = std::polar(rho, 2 * kPi * (k + 0.5) / N);
    s += u * f(p + u);
  }
  return s / double(N);
}

void kv_circle(Check& c) {
  HoloFamily F = HoloFamily::power(weight("xi^2"), 4);
  KVCheck k = kv_residue_check(F, 0);
  c.that("pole at 1/2", k.point == Num::rational(1, 2));
  c.near("principal coefficient", k.lhs, Num(1), 1e-10);
  c.near("half residue of Q^{-1/2}", k.rhs, Num(1), 1e-10);
  c.near("residue of the germ", zeta_germ(F, k.point).principal, Num(1), 1e-10);
  auto zeta = [](cplx z) { return oracle::spectral_zeta(oracle::ModelSpectrum::torus(1), oracle::SpectralPatch::base(), z).value; };
  c.near("oracle residue of 2 zeta_R(2z)", contour_residue(zeta, 0.5), 1.0, 1e-10);
}

void kv_torus2(Check& c) {
  HoloFamily F = HoloFamily::power(weight("xi1^2 + xi2^2", 2), 3);
  KVCheck k = kv_residue_check(F, 0, 1e-8);
  c.that("pole at 1", k.point == Num(1));
  c.near("principal coefficient", k.lhs, Num::inexact(kPi), 1e-8);
  c.near("half residue of Q^{-1}", k.rhs, Num::inexact(kPi), 1e-8);
  auto eps = [](cplx s) { return oracle::epstein_zeta(s, 2).value; };
  c.near("Epstein residue", contour_residue(eps, 1.0), kPi, 1e-8);
}

void ps_circle(Check& c) {
  Weight Q = weight("xi^2");
  HoloFamily F = HoloFamily::power(Q, 4);
  Num fp = zeta_germ(F, Num(0)).finite;
  c.that("symbolic fp is exact", fp.exact());
  PSCheck ps = ps_fp_check(F, Num(0));
  c.near("fp against TR + res term", ps.fp, ps.tr_term + ps.res_term, 1e-10);
  Num via_log = -wres(log_symbol(Q, 4)) / Q.order();
  double oracle = 1 + 2 * boost::math::zeta(0.0);
  double spectral = oracle::spectral_zeta(oracle::ModelSpectrum::torus(1), oracle::SpectralPatch::base(), 0.0).value.real();
  c.near("fp vs log residue", fp, via_log, 1e-10);
  c.near("fp vs 1 + 2 zeta_R(0)", fp.value(), oracle, 1e-10);
  c.near("log residue vs 1 + 2 zeta_R(0)", via_log.value(), oracle, 1e-10);
  c.near("patched spectral zeta", spectral, oracle, 1e-10);
}

void ps_potential(Check& c) {
  struct Case {
    const char* symbol;
    std::vector<std::pair<int, cplx>> V;
  };
  for (const Case& k : {Case{"xi^2 + 2", {{0, 2.0}}}, Case{"xi^2 + 2 + cos(x)", {{0, 2.0}, {1, 0.5}, {-1, 0.5}}}}) {
    PSCheck ps = ps_fp_check(HoloFamily::power(weight(k.symbol), 6), Num(0));
    oracle::Estimate o = oracle::spectral_zeta(oracle::ModelSpectrum::fourier(k.V, 512), {}, 0.0);
    std::string s = k.symbol;
    c.that(s + ": doubling error below tolerance", o.error <= 1e-4);
    c.near(s + ": symbolic fp vs Fourier matrix", ps.fp.value(), o.value, 1e-4);
    c.that(s + ": PS identity", ps.pass);
  }
}

void eta(Check& c) {
  CoveringSpec cov;
  for (const char* a : {"1/4", "0.3"}) {
    Num av = Num::parse(a);
    EtaGammaResult r = eta_gamma(av, cov);
    // zeta_H(0, a) - zeta_H(0, 1 - a) with zeta_H(0, a) = 1/2 - a
    double expected = 1 - 2 * av.real();
    std::string s = std::string("a = ") + a;
    c.near(s + ": eta vs 1 - 2a", r.eta.value(), expected, 1e-8);
    c.near(s + ": eta vs Hurwitz oracle", r.eta.value(), r.oracle, 1e-8);
    c.near(s + ": oracle vs 1 - 2a", r.oracle, expected, 1e-8);
    c.that(s + ": eta_Gamma exactly zero", r.eta_gamma.exact() && r.eta_gamma.is_zero());
    c.near(s + ": difference vs Gamma trace term", r.difference.value(), r.smoothing_trace, 1e-8);
  }
}

void lifted_zeta(Check& c) {
  CoveringSpec c1, c2(2);
  LiftedZetaResult s1 = lifted_zeta_equality(HoloFamily::power(weight("xi^2"), 4), c1,
                                             OracleModel{oracle::ModelSpectrum::torus(1)});
  c.near("S1 base vs Gamma", s1.base_fp, s1.cover_fp, 1e-8);
  c.near("S1 base vs oracle", s1.base_fp.value(), *s1.base_oracle, 1e-8);
  c.near("S1 Gamma vs oracle", s1.cover_fp.value(), *s1.cover_oracle, 1e-8);

  LiftedZetaResult t2 = lifted_zeta_equality(HoloFamily::power(weight("xi1^2 + xi2^2", 2), 3), c2,
                                             OracleModel{oracle::ModelSpectrum::torus(2)});
  c.near("T2 base vs Gamma", t2.base_fp, t2.cover_fp, 1e-8);
  c.near("T2 base vs oracle", t2.base_fp.value(), *t2.base_oracle, 1e-8);
  c.near("T2 Gamma vs oracle", t2.cover_fp.value(), *t2.cover_oracle, 1e-8);

  oracle::ModelSpectrum w = oracle::ModelSpectrum::torus(1, 2 * kPi, 1.0);
  w.weight = {0.0, 1.0};
  HoloFamily pd(sym("xi"), HFunctionSpec::one(), weight("xi^2 + 1"), 5);
  LiftedZetaResult d = lifted_zeta_equality(pd, c1, OracleModel{w, {}, {}});
  c.near("P = D base vs Gamma", d.base_fp, d.cover_fp, 1e-8);
  c.near("P = D base vs oracle", d.base_fp.value(), *d.base_oracle, 1e-8);
  c.near("P = D Gamma vs oracle", d.cover_fp.value(), *d.cover_oracle, 1e-8);
  c.that("all asserted", s1.asserted && t2.asserted && d.asserted);
}

void l2_index_check(Check& c) {
  CoveringSpec cov;
  PolyhomSymbol l = sym("xi^2");
  PolyhomSymbol flat = PolyhomSymbol::block_diag({l, l});
  flat.set_grading({1, -1});
  auto torus = oracle::ModelSpectrum::torus(1);
  L2IndexResult a = l2_index(Weight(flat), cov, 4, std::make_pair(torus, torus));

  PolyhomSymbol vp = sym("xi^2 + (1 + cos(2x))/2 + sin(x)");
  PolyhomSymbol vm = sym("xi^2 + (1 + cos(2x))/2 - sin(x)");
  PolyhomSymbol pair = PolyhomSymbol::block_diag({vp, vm});
  pair.set_grading({1, -1});
  std::vector<std::pair<int, cplx>> Vp = {{0, 0.5}, {2, 0.25}, {-2, 0.25}, {1, cplx(0, -0.5)}, {-1, cplx(0, 0.5)}};
  std::vector<std::pair<int, cplx>> Vm = {{0, 0.5}, {2, 0.25}, {-2, 0.25}, {1, cplx(0, 0.5)}, {-1, cplx(0, -0.5)}};
  L2IndexResult b = l2_index(Weight(pair), cov, 5,
                             std::make_pair(oracle::ModelSpectrum::fourier(Vp, 64), oracle::ModelSpectrum::fourier(Vm, 64)));
  for (auto [name, r] : {std::pair<const char*, const L2IndexResult*>{"flat", &a}, {"Delta + V", &b}}) {
    std::string s = name;
    c.near(s + ": base index", r->base, Num(0), 1e-8);
    c.near(s + ": Gamma index", r->gamma, Num(0), 1e-8);
    c.near(s + ": base vs Gamma", r->base, r->gamma, 1e-8);
    c.that(s + ": oracle present", r->oracle.has_value());
    if (r->oracle) c.near(s + ": heat supertrace", *r->oracle, 0.0, 1e-8);
    c.that(s + ": pipeline verdict", r->pass);
  }
}

void poisson(Check& c) {
  CoveringSpec cov;
  struct Case {
    const char* symbol;
    std::vector<std::pair<double, double>> terms;  // (coefficient of |xi|^nu summed over both sides, nu)
  };
  // the odd part xi |xi|^-5.5 cancels in the lattice sum
  std::vector<Case> cases = {{"|xi|^-2.5", {{2, -2.5}}},
                             {"|xi|^-1.6 + 2 |xi|^-3.6", {{2, -1.6}, {4, -3.6}}},
                             {"xi^2 |xi|^-5.5 + xi |xi|^-5.5", {{2, -3.5}}},
                             {"0.5 |xi|^-5.2", {{1, -5.2}}},
                             {"|xi|^-3.25 - 4 |xi|^-4.25", {{2, -3.25}, {-8, -4.25}}}};
  for (const auto& k : cases) {
    PoissonCheck p = poisson_consistency(sym(k.symbol), cov);
    // sum over k != 0 with weight 1/2 at |k| = 1
    double direct = 0;
    for (auto [w, nu] : k.terms) direct += w * (boost::math::zeta(-nu) - 0.5);
    std::string s = k.symbol;
    c.that(s + ": order in (-6, -1.5)", sym(k.symbol).order().constant().real() > -6 &&
                                             sym(k.symbol).order().constant().real() < -1.5);
    c.near(s + ": discrete trace vs Riemann zeta", p.discrete, direct, 1e-10);
    c.near(s + ": discrete = canonical + off-diagonal", p.discrete, p.canonical.value() + p.off_diagonal, 1e-6);
  }
}

void theta(Check& c) {
  for (double t : {0.5, 1.0, 2.0}) {
    ThetaCheck th = theta_identity(t, CoveringSpec());
    // direct lattice sums on both sides
    double torus = 1, off = 0;
    for (int m = 1; m < 60; ++m) {
      torus += 2 * std::exp(-t * m * m);
      off += 2 * std::sqrt(kPi / t) * std::exp(-kPi * kPi * m * m / t);
    }
    double gamma = std::sqrt(kPi / t);
    char s[32];
    std::snprintf(s, sizeof s, "t = %g", t);
    c.that(std::string(s) + ": residual <= 1e-12", th.residual <= 1e-12);
    c.near(std::string(s) + ": direct residual", torus - gamma, off, 1e-12);
    c.near(std::string(s) + ": lhs vs direct", th.lhs, torus - gamma, 1e-12);
  }
}

PolyhomSymbol random_symbol(std::mt19937& rng, int n, const Num& order, int depth) {
  std::uniform_int_distribution<int> small(-3, 3), pick(0, 2), comps(1, 2), kmode(-2, 2);
  PolyhomSymbol s(n, kOne, ZPoly(order), depth);
  int nc = comps(rng);
  for (int j = 0; j < nc; ++j)
    for (int t = 0, nt = 1 + pick(rng) % 2; t < nt; ++t) {
      TrigPoly co(n, kOne);
      for (int m = 0, nm = 1 + pick(rng); m < nm; ++m) {
        Multi k(n);
        for (auto& v : k) v = kmode(rng);
        co.add_mode(k, ZPoly(Num(Rat(small(rng), 1 + pick(rng)), Rat(small(rng), 2))));
      }
      Multi a(n, 0);
      a[pick(rng) % n] = pick(rng) % 2;
      s.add_key(0, 0, j, a, 0, co);
    }
  return s;
}

TrigPoly random_real_trig(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> small(-3, 3), den(1, 3), kmode(-2, 2);
  TrigPoly c(n, kOne);
  for (int m = 0; m < 2; ++m) {
    Multi k(n), mk(n);
    for (int i = 0; i < n; ++i) mk[i] = -(k[i] = kmode(rng));
    Num a = Num::rational(small(rng), den(rng));
    c.add_mode(k, ZPoly(a));
    c.add_mode(mk, ZPoly(a));
  }
  return c;
}

Weight random_laplace(std::mt19937& rng, int n, bool first_order) {
  PolyhomSymbol s = sym(n == 1 ? "xi^2" : "xi1^2 + xi2^2", n);
  PolyhomSymbol v(n, kOne, ZPoly(2), kExactDepth);
  v.add_key(0, 0, 2, Multi(n, 0), 0, random_real_trig(rng, n));
  if (first_order) {
    Multi e1(n, 0);
    e1[0] = 1;
    v.add_key(0, 0, 1, e1, 0, random_real_trig(rng, n));
  }
  return Weight(s + v);
}

void properties(Check& c) {
  std::mt19937 rng(2024);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 1 + rep % 2, N = 3;
    PolyhomSymbol a = random_symbol(rng, n, Num(1), N);
    PolyhomSymbol b = random_symbol(rng, n, Num(0), N);
    PolyhomSymbol d = random_symbol(rng, n, Num::rational(-3, 2), N);
    c.that("star associativity #" + std::to_string(rep),
           equivalent(star_product(star_product(a, b, N), d, N), star_product(a, star_product(b, d, N), N)));
  }
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 1 + rep % 2, N = n == 1 ? 5 : 3;
    Weight q = random_laplace(rng, n, rep % 4 == 1);
    Num z1 = Num::rational(num(rng), den(rng)), z2 = Num::rational(num(rng), den(rng));
    c.that("group law #" + std::to_string(rep),
           equivalent(star_product(complex_power_symbol(q, z1, N), complex_power_symbol(q, z2, N), N),
                      complex_power_symbol(q, z1 + z2, N)));
  }
  for (int rep = 0; rep < 10; ++rep) {
    int n = 1 + rep % 2;
    Weight q = random_laplace(rng, n, rep % 3 == 0);
    c.that("resolvent defect #" + std::to_string(rep), resolvent_defect(q, resolvent_symbol(q, n == 1 ? 6 : 4)).is_identity());
  }
  std::uniform_int_distribution<int> pos(1, 3);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 1 + rep % 2;
    Weight q = random_laplace(rng, n, rep % 2 == 0);
    HFunctionSpec h = rep % 3 == 1 ? HFunctionSpec::power(Num::rational(pos(rng), 4)) : HFunctionSpec::one();
    PolyhomSymbol P = rep % 3 == 2 ? sym(n == 1 ? "xi + 2" : "xi1 + 3 xi2", n) : PolyhomSymbol::identity(n, kOne);
    HoloFamily F(P, h, q, 4);
    std::string s = "pole grid #" + std::to_string(rep);
    for (const Num& p : detected_poles(F)) {
      auto j = F.pole_index(p);
      c.that(s + ": pole " + p.str() + " on the grid", j.has_value() && *j < F.depth());
    }
    for (int j = 0; j < F.depth(); ++j)
      c.that(s + ": off-grid point regular",
             zeta_germ(F, F.pole(j) + Num::rational(1, 7)).principal.is_zero());
  }
}

struct Criterion {
  const char* name;
  double budget_ms;
  void (*run)(Check&);
};

const std::vector<Criterion> kCriteria = {
    {"KV residue on the circle", 1000, kv_circle},
    {"KV residue on the 2-torus", 5000, kv_torus2},
    {"PS finite part on the circle", 1000, ps_circle},
    {"PS finite part with potential", 30000, ps_potential},
    {"eta invariant of the shifted model", 2000, eta},
    {"lifted zeta equality", 10000, lifted_zeta},
    {"L2 index", 10000, l2_index_check},
    {"Poisson consistency", 10000, poisson},
    {"theta identity", 1000, theta},
    {"algebraic property suites", 120000, properties},
};

}  // namespace

int main(int argc, char** argv) {
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (size_t i = 0; i < kCriteria.size(); ++i) {
    if (only && only != int(i + 1)) continue;
    const Criterion& k = kCriteria[i];
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      k.run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.log << "  exception: " << e.what() << "\n";
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (ms > k.budget_ms) {
      c.ok = false;
      c.log << "  runtime " << ms << " ms over budget " << k.budget_ms << " ms\n";
    }
    std::printf("%s %2zu %-40s %9.1f ms\n", c.ok ? "PASS" : "FAIL", i + 1, k.name, ms);
    std::fputs(c.log.str().c_str(), stdout);
    failed += !c.ok;
  }
  return failed ? 1 : 0;
}
