#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "zetalift/spectral.hpp"

using namespace zl::oracle;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCatalan = 0.915965594177219015054603514932;

double coth(double x) { return 1 / std::tanh(x); }

}  // namespace

TEST_CASE("Riemann and Hurwitz continuations") {
  CHECK(std::abs(riemann_zeta(2.0).value - kPi * kPi / 6) < 1e-13);
  CHECK(std::abs(riemann_zeta(0.0).value + 0.5) < 1e-14);
  CHECK(std::abs(riemann_zeta(-1.0).value + 1.0 / 12) < 1e-14);
  CHECK(std::abs(hurwitz_zeta(0.0, 0.25).value - 0.25) < 1e-14);
  for (double s : {3.5, 0.3, -2.5, 1.0001, 0.9999, 12.0}) {
    Estimate e = riemann_zeta(s);
    CHECK(std::abs(e.value.real() - boost::math::zeta(s)) < 1e-12 * std::max(1.0, std::abs(e.value)));
    CHECK(e.error < 1e-12 * std::max(1.0, std::abs(e.value)));
  }
  // first nontrivial zero
  CHECK(std::abs(riemann_zeta(cplx(0.5, 14.134725141734693)).value) < 1e-9);
  // zeta(s, a) = zeta(s, a + 1) + a^{-s}
  cplx s(0.7, 2.0);
  CHECK(std::abs(hurwitz_zeta(s, 0.3).value - hurwitz_zeta(s, 1.3).value - std::pow(0.3, -s)) < 1e-12);
  CHECK_THROWS_AS(hurwitz_zeta(1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(hurwitz_zeta(2.0, 0.0), std::invalid_argument);
}

TEST_CASE("Epstein zeta") {
  for (double s : {0.3, 1.7, -0.4, 2.0}) {
    CHECK(std::abs(epstein_zeta(s, 1).value - 2.0 * riemann_zeta(2 * s).value) < 1e-12);
  }
  // sum' |k|^{-4} over Z^2 = 4 zeta(2) beta(2)
  CHECK(std::abs(epstein_zeta(2.0, 2).value.real() - 4 * kPi * kPi / 6 * kCatalan) < 1e-10);
  // against a direct sum over |k| <= 200 plus the integral tail pi / R^2
  double direct = 0;
  for (int a = -200; a <= 200; ++a)
    for (int b = -200; b <= 200; ++b) {
      int r2 = a * a + b * b;
      if (r2 > 0 && r2 <= 40000) direct += 1.0 / (double(r2) * r2);
    }
  CHECK(std::abs(epstein_zeta(2.0, 2).value.real() - direct - kPi / 40000.0) < 1e-6);
  CHECK(std::abs(epstein_zeta(0.0, 2).value + 1.0) < 1e-12);
  CHECK(std::abs(epstein_zeta(0.0, 3).value + 1.0) < 1e-12);
  CHECK(std::abs(epstein_zeta(-1.0, 2).value) < 1e-12);
  CHECK(std::abs(epstein_residue(2) - kPi) < 1e-15);
  // residue by symmetric difference quotient
  double h = 1e-5;
  double res = 0.5 * h * (epstein_zeta(1 + h, 2).value.real() - epstein_zeta(1 - h, 2).value.real());
  CHECK(std::abs(res - kPi) < 1e-8);
  // period L scales eigenvalues by (2 pi / L)^2
  CHECK(std::abs(epstein_zeta(1.5, 2, kPi).value - std::pow(2.0, -3.0) * epstein_zeta(1.5, 2).value) < 1e-12);
  CHECK_THROWS_AS(epstein_zeta(1.0, 2), std::domain_error);
}

TEST_CASE("heat traces and the theta identity") {
  for (double t : {0.5, 1.0, 2.0}) {
    double lhs = torus_heat_trace(t, 1) - gamma_heat_trace_laplacian(t, 1);
    double rhs = 0;
    for (int m = 1; m < 50; ++m) rhs += 2 * std::exp(-kPi * kPi * m * m / t);
    rhs *= std::sqrt(kPi / t);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  CHECK(std::abs(gamma_heat_trace([](double x) { return x * x; }, 1.0) - std::sqrt(kPi)) < 1e-13);
  CHECK(std::abs(gamma_heat_trace_laplacian(1.0, 1) - std::sqrt(kPi)) < 1e-15);
  CHECK(std::abs(torus_heat_trace(1.0, 2) - std::pow(torus_heat_trace(1.0, 1), 2)) < 1e-13);
  // patched zero mode: eigenvalue 0 -> 1
  CHECK(std::abs(heat_trace(ModelSpectrum::torus(1), 1.0, SpectralPatch::base()) - (torus_heat_trace(1.0, 1) - 1 + std::exp(-1.0))) < 1e-15);
}

TEST_CASE("spectral zeta of model spectra") {
  auto q = ModelSpectrum::torus(1);
  CHECK(std::abs(spectral_zeta(q, SpectralPatch::base(), 0.0).value) < 1e-14);
  CHECK(std::abs(spectral_zeta(q, SpectralPatch::base(), 1.0).value - (1 + kPi * kPi / 3)) < 1e-12);
  CHECK_THROWS_AS(spectral_zeta(q, SpectralPatch::none(), 1.0), std::domain_error);

  // sum (k^2 + 2)^{-1} = pi coth(pi sqrt 2) / sqrt 2
  double closed = kPi * coth(kPi * std::sqrt(2.0)) / std::sqrt(2.0);
  auto q2 = ModelSpectrum::torus(1, 2 * kPi, 2.0);
  CHECK(std::abs(spectral_zeta(q2, {}, 1.0).value - closed) < 1e-12);
  CHECK(std::abs(spectral_zeta(q2, {}, 0.0).value) < 1e-12);

  auto fm = ModelSpectrum::fourier({{0, 2.0}}, 512);
  Estimate f1 = spectral_zeta(fm, {}, 1.0);
  CHECK(std::abs(f1.value - closed) < 1e-8);
  CHECK(f1.error < 1e-8);
  CHECK(std::abs(spectral_zeta(ModelSpectrum::fourier({{0, 2.0}}, 64), {}, 0.0).value) < 1e-10);
  for (double z : {0.3, 1.5, -0.2})
    CHECK(std::abs(spectral_zeta(ModelSpectrum::fourier({{0, 2.0}}, 64), {}, z).value - spectral_zeta(q2, {}, z).value) <
          1e-9);

  // weighted: sum k (k^2 + 1)^{-z} = 0, sum k^2 (k^2 + 1)^{-2} in closed form
  auto w = ModelSpectrum::torus(1, 2 * kPi, 1.0);
  w.weight = {0.0, 1.0};
  CHECK(std::abs(spectral_zeta(w, {}, 0.7).value) == 0.0);
  w.weight = {0.0, 0.0, 1.0};
  double s22 = kPi / 2 * coth(kPi) - kPi * kPi / (2 * std::pow(std::sinh(kPi), 2));
  CHECK(std::abs(spectral_zeta(w, {}, 2.0).value - s22) < 1e-12);

  // 2-torus: Epstein plus the patched zero mode
  CHECK(std::abs(spectral_zeta(ModelSpectrum::torus(2), SpectralPatch::base(), 0.0).value) < 1e-12);
}

TEST_CASE("shifted model") {
  for (double a : {0.25, 0.3, 0.5}) {
    Estimate e = eta_series(ModelSpectrum::shifted(a), 0.0);
    CHECK(std::abs(e.value - (1 - 2 * a)) < 1e-13);
  }
  CHECK_THROWS_AS(eta_series(ModelSpectrum::shifted(1.0), 0.0), std::domain_error);
  // |D_a| zeta at z = 2: sum over k of (k + a)^{-2} = pi^2 / sin^2(pi a)
  double a = 0.3;
  CHECK(std::abs(spectral_zeta(ModelSpectrum::shifted(a), {}, 2.0).value - std::pow(kPi / std::sin(kPi * a), 2)) < 1e-12);
}

TEST_CASE("Fourier matrix with a potential") {
  // Delta + V_{+-}, V = cos^2 x +- sin x from D_+ = d/dx + cos x
  std::vector<std::pair<int, cplx>> vp = {{0, 0.5}, {2, 0.25}, {-2, 0.25}, {1, cplx(0, -0.5)}, {-1, cplx(0, 0.5)}};
  std::vector<std::pair<int, cplx>> vm = {{0, 0.5}, {2, 0.25}, {-2, 0.25}, {1, cplx(0, 0.5)}, {-1, cplx(0, -0.5)}};
  auto ep = fourier_matrix_eigenvalues(vp, 64);
  auto em = fourier_matrix_eigenvalues(vm, 64);
  CHECK(std::abs(ep[0]) < 1e-12);  // ker D_+ = span e^{-sin x}
  for (int i = 0; i < 60; ++i) CHECK(std::abs(ep[i] - em[i]) < 1e-9 * (1 + ep[i]));
  double str = heat_trace(ModelSpectrum::fourier(vp, 64), 1.0) - heat_trace(ModelSpectrum::fourier(vm, 64), 1.0);
  CHECK(std::abs(str) < 1e-10);
  // V = 0 agrees with the multiplier model
  CHECK(std::abs(heat_trace(ModelSpectrum::fourier({}, 64), 0.5) - torus_heat_trace(0.5, 1)) < 1e-12);
  CHECK_THROWS_AS(fourier_matrix_eigenvalues({{1, 1.0}}, 8), std::invalid_argument);
}

TEST_CASE("Gamma-side zeta continuation") {
  auto band = SpectralPatch::covering(0.25);
  auto lap = ModelSpectrum::torus(1);
  CHECK(std::abs(gamma_zeta(lap, band, 0.0).value) < 1e-14);
  // \int_{|xi| < 1/2} (xi^2 + 1)^{-1} + \int_{|xi| > 1/2} xi^{-2}
  CHECK(std::abs(gamma_zeta(lap, band, 1.0).value - (2 * std::atan(0.5) + 4)) < 1e-12);
  CHECK_THROWS_AS(gamma_zeta(lap, {}, 0.5), std::domain_error);
  CHECK_THROWS_AS(gamma_zeta(lap, SpectralPatch::base(), 0.5), std::invalid_argument);

  auto q2 = ModelSpectrum::torus(1, 2 * kPi, 2.0);
  CHECK(std::abs(gamma_zeta(q2, {}, 1.0).value - kPi / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(gamma_zeta(q2, {}, 1.5).value - 1.0) < 1e-12);
  CHECK(std::abs(gamma_zeta(q2, {}, 0.0).value) < 1e-12);
  CHECK(std::abs(gamma_zeta(q2, {}, -1.0).value) < 1e-12);
  // Delta + 1 on R^2, Vol(F) = 4 pi^2: pi / (z - 1)
  auto t2 = ModelSpectrum::torus(2, 2 * kPi, 1.0);
  for (cplx z : {cplx(0.0), cplx(0.4), cplx(2.5, 1.0)}) CHECK(std::abs(gamma_zeta(t2, {}, z).value - kPi / (z - 1.0)) < 1e-11);
  CHECK(std::abs(gamma_zeta(ModelSpectrum::torus(2), band, 0.0).value) < 1e-13);
  // xi^2 (xi^2 + 1)^{-2} integrates to pi / 2; odd weights vanish
  auto w = ModelSpectrum::torus(1, 2 * kPi, 1.0);
  w.weight = {0.0, 0.0, 1.0};
  CHECK(std::abs(gamma_zeta(w, {}, 2.0).value - kPi / 2) < 1e-12);
  w.weight = {0.0, 1.0};
  CHECK(std::abs(gamma_zeta(w, {}, 0.3).value) == 0.0);
}
