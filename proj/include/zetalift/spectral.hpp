#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

// Spectral ground truth. Nothing here touches the symbol calculus.
namespace zl::oracle {

using cplx = std::complex<double>;

struct Estimate {
  cplx value;
  double error = 0;  // absolute error bound
};

// Euler-Maclaurin with 8 Bernoulli terms. Throws std::domain_error at s = 1.
Estimate hurwitz_zeta(cplx s, double a);
Estimate riemann_zeta(cplx s);

// sum over k in Z^n \ {0} of |omega k|^{-2s}, omega = 2 pi / L, by the theta
// split. Throws std::domain_error at s = n/2.
Estimate epstein_zeta(cplx s, int n, double L = 2 * std::numbers::pi);
// Residue of epstein_zeta at s = n/2.
double epstein_residue(int n, double L = 2 * std::numbers::pi);

// sum over k in Z^n of exp(-t |omega k|^2)
double torus_heat_trace(double t, int n, double L = 2 * std::numbers::pi);

// Q_eps deformation on the oracle side.
struct SpectralPatch {
  enum class Kind { None, Base, Covering };
  Kind kind = Kind::None;
  double eps = 0.25;  // band [0, eps] for the covering kind
  static SpectralPatch none() { return {}; }
  static SpectralPatch base() { return {Kind::Base, 0.25}; }
  static SpectralPatch covering(double eps) { return {Kind::Covering, eps}; }
};

struct ModelSpectrum {
  enum class Kind { TorusMultiplier, Shifted1D, FourierMatrix };
  Kind kind = Kind::TorusMultiplier;
  int n = 1;
  double L = 2 * std::numbers::pi;
  // TorusMultiplier: eigenvalues |omega k|^2 + shift, weighted by
  // p(omega k) = sum weight[m] (omega k)^m (n = 1 only when weighted).
  // Shifted1D: eigenvalues k + shift.
  double shift = 0;
  std::vector<double> weight{1.0};
  // FourierMatrix (n = 1, L = 2 pi): Delta + V, V = sum amp e^{i k x}.
  std::vector<std::pair<int, cplx>> potential;
  int cutoff = 512;

  static ModelSpectrum torus(int n, double L = 2 * std::numbers::pi, double shift = 0);
  static ModelSpectrum shifted(double a);
  static ModelSpectrum fourier(std::vector<std::pair<int, cplx>> V, int cutoff);
};

// Eigenvalues of the (2K+1)x(2K+1) matrix of Delta + V in the e^{ikx} basis,
// ascending.
std::vector<double> fourier_matrix_eigenvalues(const std::vector<std::pair<int, cplx>>& V, int K);

// Continued sum of p(lambda) lambda^{-z}. The FourierMatrix kind uses the
// eigenvalues with index <= K, a Weyl tail sum_{|k| > K/2} (k^2 + mean V)^{-z}
// and reports |zeta_K - zeta_{2K}| as its error.
Estimate spectral_zeta(const ModelSpectrum& m, const SpectralPatch& patch, cplx z);
// sum sign(lambda) |lambda|^{-z} for the Shifted1D kind.
Estimate eta_series(const ModelSpectrum& m, cplx z);
// sum exp(-t lambda), with the patch applied.
double heat_trace(const ModelSpectrum& m, double t, const SpectralPatch& patch = {});
// Gamma-side continuation of Vol(F) (2 pi)^{-n} \int p(xi) lambda(xi)^{-z} dxi
// for the TorusMultiplier kind read on R^n, lambda = |xi|^2 + shift. The
// covering patch adds 1 where lambda <= eps.
Estimate gamma_zeta(const ModelSpectrum& m, const SpectralPatch& patch, cplx z);
// Vol(F) (2 pi)^{-n} \int exp(-t symbol(xi)) dxi on the cover of the circle.
double gamma_heat_trace(const std::function<double(double)>& symbol, double t, double L = 2 * std::numbers::pi);
double gamma_heat_trace_laplacian(double t, int n, double L = 2 * std::numbers::pi);

}  // namespace zl::oracle
