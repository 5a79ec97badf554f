#pragma once

#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "zetalift/spectral.hpp"
#include "zetalift/zeta.hpp"

namespace zl {

// Lattice covering R^n -> T^n with Gamma = L Z^n and F = [0, L)^n.
class CoveringSpec {
 public:
  // eps is the locality radius, L/4 by default. Throws std::invalid_argument
  // unless 0 < eps < L/2.
  explicit CoveringSpec(int n = 1, double L = 2 * std::numbers::pi, std::optional<double> eps = {});

  int dim() const { return n_; }
  double period() const { return L_; }
  double eps() const { return eps_; }
  double injectivity_bound() const { return L_; }
  double volume() const;
  // True when sigma lives on the same torus.
  bool matches(const PolyhomSymbol& sigma) const;

 private:
  int n_;
  double L_;
  double eps_;
};

// The same periodic data read on R^n.
struct LiftedSymbol {
  PolyhomSymbol base;
  bool lifted = true;
  cplx eval(int r, int c, const std::vector<double>& x, const std::vector<double>& xi, cplx z = 0.0) const {
    return base.eval(r, c, x, xi, z);
  }
};

// Throws std::invalid_argument on a period or dimension mismatch.
LiftedSymbol lift_symbol(const PolyhomSymbol& sigma, const CoveringSpec& cov);
PolyhomSymbol project_symbol(const LiftedSymbol& s);

// Every coefficient replaced by its average over F (trapezoid rule on a grid
// finer than the highest mode, evaluated through aliasing).
PolyhomSymbol cell_average(const PolyhomSymbol& sigma);

// Kernel value k(gamma) = (2 pi)^{-n} \int sigma(xi) e^{i gamma.xi} dxi at
// gamma = L m.
struct Translate {
  Multi m;
  cplx value;
};

struct OffDiagonalKernel {
  int n = 1;
  double L = 2 * std::numbers::pi;
  std::vector<Translate> translates;
  cplx tail = 0;                // sum of the kernel values not listed
  double truncation_bound = 0;  // bound on the error of the listed sum plus tail
  bool zero_mode_only = false;  // values are F-averages of K(x, x + gamma)
  bool is_zero() const { return translates.empty() && tail == cplx(0); }
};

struct EpsLocalDecomposition {
  PolyhomSymbol local;
  OffDiagonalKernel off_diagonal;
};

// Differential symbols: zero off-diagonal part in any dimension. Otherwise
// n = 1, L a multiple of 2 pi, log-free and z-free; x-dependent coefficients
// contribute their F-average. The listed translates are |m| <= gamma_max; the
// rest is summed asymptotically.
EpsLocalDecomposition eps_local_decompose(const PolyhomSymbol& sigma, const CoveringSpec& cov, int gamma_max = 24);
// Kernel of the multiplier exp(-t |xi|^2).
OffDiagonalKernel gaussian_off_diagonal(double t, const CoveringSpec& cov);
// Kernel of sign(D_a), D_a = -i d/dx + a on R, summed with the mollifier
// exp(-(m/M)^2).
OffDiagonalKernel shifted_sign_off_diagonal(double a, const CoveringSpec& cov, int M = 64);

struct GammaValue {
  enum class Kind { Residue, CanonicalTrace, SmoothingTrace };
  Kind kind = Kind::Residue;
  Num value;
  double error = 0;
};

GammaValue gamma_res(const LiftedSymbol& s);
GammaValue gamma_sres(const LiftedSymbol& s);  // requires grading
GammaValue gamma_tr_canonical(const LiftedSymbol& s, const ExcisionConvention& conv = {});

// Radial multiplier g(|xi|) on R^n, zero beyond support.
struct MultiplierKernel {
  std::function<double(double)> symbol;
  double support = std::numeric_limits<double>::infinity();
};
// Vol(F) (2 pi)^{-n} \int g(|xi|) dxi. Throws std::domain_error when an
// unbounded support decays slower than |xi|^{-n-1} at |xi| = 1e3.
GammaValue gamma_tr_smoothing(const MultiplierKernel& k, const CoveringSpec& cov);
// Vol(F) times the sum of k(gamma) over gamma != 0.
GammaValue gamma_tr_smoothing(const OffDiagonalKernel& k);

struct LiftedFamily {
  HoloFamily base;
  CoveringSpec cov;
  LiftedSymbol symbol;
};
LiftedFamily lift_family(const HoloFamily& F, const CoveringSpec& cov);
// Laurent data of TR_Gamma(A(z)) at p.
MeromorphicGerm gamma_zeta_germ(const LiftedFamily& F, const Num& p, const ExcisionConvention& conv = {});
// pole_report with gamma_res and gamma_tr_canonical in place of the base
// functionals.
PoleReport lifted_defect_check(const HoloFamily& F, const CoveringSpec& cov, double tol = 1e-10,
                               std::optional<int> J = {}, const ExcisionConvention& conv = {});

// Multiplier spectra standing for the base operator and its lift.
struct OracleModel {
  oracle::ModelSpectrum model;
  oracle::SpectralPatch base_patch = oracle::SpectralPatch::base();
  oracle::SpectralPatch cover_patch = oracle::SpectralPatch::covering(0.25);
};

// amplitude * exp(-t |xi|^2), added on the cover independently of z.
struct GaussianPerturbation {
  double amplitude = 1;
  double t = 1;
};

struct CoverFamily {
  HoloFamily family;
  std::optional<GaussianPerturbation> perturbation;
};

struct ComparisonResult {
  Num base_fp, cover_fp;
  Num principal_difference;  // must vanish
  cplx difference;           // fp TR_Gamma(cover) - fp TR(base)
  cplx smoothing_trace;      // Tr_Gamma of cover(0) - lift(base(0))
  std::optional<cplx> base_oracle, cover_oracle;
  double tol = 0;
  bool pass = false;
};
// Throws std::invalid_argument when the two symbols differ at z = 0.
ComparisonResult comparison_trace(const HoloFamily& base, const CoverFamily& cover, const CoveringSpec& cov,
                                  const std::optional<OracleModel>& oracle = {}, double tol = 1e-8);

struct LiftedZetaResult {
  Num base_fp, cover_fp;
  std::optional<cplx> base_oracle, cover_oracle;
  bool asserted = true;  // false for h != 1
  cplx discrepancy;      // h != 1: Tr_Gamma of the off-diagonal part of A(0)
  double tol = 0;
  bool pass = false;
};
LiftedZetaResult lifted_zeta_equality(const HoloFamily& F, const CoveringSpec& cov,
                                      const std::optional<OracleModel>& oracle = {}, double tol = 1e-8);

struct L2IndexResult {
  Num base;                     // -(1/q) sRes(log Q)
  Num gamma;                    // -(1/q) sRes_Gamma(log Q)
  std::optional<double> oracle;  // heat supertrace, constant in t
  double tol = 0;
  bool pass = false;
};
// Throws std::invalid_argument without grading.
L2IndexResult l2_index(const Weight& Q, const CoveringSpec& cov, int depth,
                       const std::optional<std::pair<oracle::ModelSpectrum, oracle::ModelSpectrum>>& graded = {},
                       double tol = 1e-8);

struct EtaGammaResult {
  Num eta_gamma;     // Gamma canonical trace finite part, exact
  Num eta;           // base symbolic pipeline
  cplx oracle;       // Hurwitz
  Num difference;    // eta - eta_gamma
  cplx smoothing_trace;
  double tol = 0;
  bool pass = false;
};
EtaGammaResult eta_gamma(const Num& a, const CoveringSpec& cov, int depth = 4, double tol = 1e-8);

struct PoissonCheck {
  cplx discrete;  // sum over the lattice, value 1/2 at the jump |xi| = 1
  Num canonical;
  cplx off_diagonal;
  double bound = 0;
  double residual = 0;
  double tol = 0;
  bool pass = false;
};
// Trace-class constant-coefficient symbols on the circle.
PoissonCheck poisson_consistency(const PolyhomSymbol& sigma, const CoveringSpec& cov, double tol = 1e-6);

struct ThetaCheck {
  double t = 0;
  double lhs = 0;  // torus heat trace minus Gamma heat trace
  double rhs = 0;  // off-diagonal Gaussian kernel
  double residual = 0;
  bool pass = false;
};
ThetaCheck theta_identity(double t, const CoveringSpec& cov, double tol = 1e-12);

}  // namespace zl
