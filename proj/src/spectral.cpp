#include "zetalift/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <cmath>
#include <map>
#include <stdexcept>

namespace zl::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

// B_2 .. B_18
constexpr std::array<double, 9> kBernoulli = {1.0 / 6,       -1.0 / 30,        1.0 / 42,
                                              -1.0 / 30,     5.0 / 66,         -691.0 / 2730,
                                              7.0 / 6,       -3617.0 / 510,    43867.0 / 798};

// Lanczos, g = 7
cplx gamma_lanczos(cplx z) {
  static const double c[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma_lanczos(1.0 - z));
  z -= 1.0;
  cplx x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + double(i));
  cplx t = z + 7.5;
  return std::sqrt(2 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

bool nonpositive_integer(cplx s) {
  return s.imag() == 0 && s.real() <= 0 && s.real() == std::round(s.real());
}

cplx rgamma(cplx s) { return nonpositive_integer(s) ? cplx(0) : 1.0 / gamma_lanczos(s); }

// \int_1^oo t^{a-1} e^{-x t} dt = Gamma(a, x) x^{-a}
cplx upper_gamma_scaled(cplx a, double x) {
  boost::math::quadrature::exp_sinh<double> q;
  auto f = [&](double u, bool im) {
    cplx v = std::pow(1.0 + u / x, a - 1.0) * std::exp(-u);
    return im ? v.imag() : v.real();
  };
  double re = q.integrate([&](double u) { return f(u, false); }, 1e-14);
  double im = a.imag() == 0 ? 0.0 : q.integrate([&](double u) { return f(u, true); }, 1e-14);
  return std::exp(-x) / x * cplx(re, im);
}

// number of k in Z^n with |k|^2 = m, for m = 0..M
std::vector<long> shell_counts(int n, int M) {
  std::vector<long> c(M + 1, 0);
  c[0] = 1;
  for (int d = 0; d < n; ++d) {
    std::vector<long> next(M + 1, 0);
    for (int m = 0; m <= M; ++m) {
      if (!c[m]) continue;
      for (int k = 0; m + k * k <= M; ++k) next[m + k * k] += c[m] * (k == 0 ? 1 : 2);
    }
    c = std::move(next);
  }
  return c;
}

cplx binom_neg(cplx z, int j) {  // binom(-z, j)
  cplx b = 1;
  for (int i = 0; i < j; ++i) b *= (-z - double(i)) / double(i + 1);
  return b;
}

// sum_{k > K0} (omega k)^{2m} (omega^2 k^2 + c)^{-z}, requires c/(omega (K0+1))^2 <= 1/4
Estimate binomial_tail(cplx z, double c, double omega, int m, int K0) {
  double ratio = c / (omega * omega);
  Estimate out{0, 0};
  for (int j = 0; j < 80; ++j) {
    cplx b = binom_neg(z, j) * std::pow(ratio, j);
    if (b == cplx(0)) break;
    Estimate h = hurwitz_zeta(2.0 * z + 2.0 * double(j) - 2.0 * double(m), K0 + 1.0);
    cplx term = b * h.value;
    out.value += term;
    out.error += std::abs(b) * h.error;
    if (j > 2 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(out.value))) {
      out.error += std::abs(term);
      break;
    }
  }
  cplx scale = std::pow(omega, 2.0 * double(m) - 2.0 * z);
  return {out.value * scale, out.error * std::abs(scale)};
}

cplx fourier_amp(const std::map<int, cplx>& V, int k) {
  auto it = V.find(k);
  return it == V.end() ? cplx(0) : it->second;
}

Estimate zeta_from_eigenvalues(const std::vector<double>& ev, int K0, double vbar, const SpectralPatch& patch, cplx z) {
  cplx sum = 0;
  for (int i = 0; i <= 2 * K0; ++i) {
    double l = ev[i];
    if (patch.kind == SpectralPatch::Kind::Base && std::abs(l) < 1e-9) l = 1;
    if (l <= 0) throw std::domain_error("eigenvalue on the spectral cut");
    sum += std::exp(-z * std::log(l));
  }
  Estimate t = binomial_tail(z, vbar, 1.0, 0, K0);
  return {sum + 2.0 * t.value, 2 * t.error};
}

// \int_a^b f(rho) drho for complex f, adaptive Gauss-Kronrod
Estimate integrate_complex(const std::function<cplx(double)>& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double er = 0, ei = 0;
  double re = GK::integrate([&](double r) { return f(r).real(); }, a, b, 15, 1e-14, &er);
  double im = GK::integrate([&](double r) { return f(r).imag(); }, a, b, 15, 1e-14, &ei);
  return {cplx(re, im), er + ei};
}

// binom(-z, j) / (2 z + 2 j - d), continued through z = -k when the numerator
// vanishes there.
cplx tail_coefficient(cplx z, int j, int d) {
  cplx den = 2.0 * z + 2.0 * double(j) - double(d);
  if (std::abs(den) > 1e-12) return binom_neg(z, j) / den;
  double zr = z.real();
  int k = static_cast<int>(std::lround(-zr));
  if (std::abs(z.imag()) > 0 || std::abs(zr + k) > 1e-12 || k < 0 || j <= k)
    throw std::domain_error("gamma_zeta pole at z = " + std::to_string(zr));
  // d/dz binom(-z, j) at z = -k, halved
  double prod = 1;
  for (int i = 0; i < j; ++i)
    if (i != k) prod *= double(k - i);
  double fact = 1;
  for (int i = 2; i <= j; ++i) fact *= i;
  return -prod / (2 * fact);
}

// Continuation of \int_0^oo rho^{d-1} lambda(rho)^{-z} drho, lambda = rho^2 + c,
// raised by 1 on rho < rb.
Estimate radial_zeta(cplx z, int d, double c, double rb) {
  double R = std::max({1.0, 2 * std::sqrt(c), rb});
  Estimate out{0, 0};
  auto powc = [](double x, cplx e) { return std::exp(e * std::log(x)); };
  if (rb > 0) {
    Estimate b = integrate_complex([&](double r) { return std::pow(r, d - 1) * powc(r * r + c + 1, -z); }, 0, rb);
    out.value += b.value;
    out.error += b.error;
  }
  if (c == 0) {
    cplx e = double(d) - 2.0 * z;
    if (std::abs(e) < 1e-14) throw std::domain_error("gamma_zeta pole at z = d/2");
    // middle piece and the tail sum to -rb^e / e
    if (rb > 0) out.value -= powc(rb, e) / e;
    return out;
  }
  Estimate mid = integrate_complex([&](double r) { return std::pow(r, d - 1) * powc(r * r + c, -z); }, rb, R);
  out.value += mid.value;
  out.error += mid.error;
  cplx tail = 0;
  for (int j = 0; j < 200; ++j) {
    cplx t = tail_coefficient(z, j, d) * std::pow(c, j) * powc(R, double(d) - 2.0 * z - 2.0 * double(j));
    tail += t;
    if (j > 2 && std::abs(t) < 1e-18 * std::max(1.0, std::abs(tail))) break;
  }
  out.value += tail;
  out.error += 1e-16 * std::abs(tail);
  return out;
}

}  // namespace

Estimate hurwitz_zeta(cplx s_in, double a) {
  if (a <= 0) throw std::invalid_argument("hurwitz_zeta needs a > 0");
  if (s_in == cplx(1)) throw std::domain_error("hurwitz_zeta pole at s = 1");
  // extended precision: for Re s < 0 the partial sum cancels heavily
  using lcplx = std::complex<long double>;
  const lcplx s(s_in.real(), s_in.imag());
  const int M = 8;
  int N = 10 + static_cast<int>(std::ceil(std::abs(s_in)));
  lcplx sum = 0;
  long double mag = 0;
  for (int k = 0; k < N; ++k) {
    lcplx t = std::exp(-s * std::log(static_cast<long double>(k) + a));
    sum += t;
    mag += std::abs(t);
  }
  long double Na = N + a;
  lcplx lN = std::log(lcplx(Na));
  lcplx head = std::exp((1.0L - s) * lN) / (s - 1.0L);
  sum += head + 0.5L * std::exp(-s * lN);
  mag += std::abs(head);
  lcplx rising = s;  // (s)_{2j-1}
  long double fact = 2;  // (2j)!
  for (int j = 1; j <= M; ++j) {
    sum += static_cast<long double>(kBernoulli[j - 1]) / fact * rising * std::exp((-s - (2.0L * j - 1)) * lN);
    rising *= (s + (2.0L * j - 1)) * (s + 2.0L * j);
    fact *= (2.0L * j + 1) * (2.0L * j + 2);
  }
  // next term of the series, times a margin for the remainder integral
  lcplx next = static_cast<long double>(kBernoulli.back()) / fact * rising * std::exp((-s - (2.0L * M + 1)) * lN);
  cplx v(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  double err = static_cast<double>(4 * std::abs(next) + 4e-19L * mag) + 1.2e-16 * std::abs(v);
  return {v, err};
}

Estimate riemann_zeta(cplx s) { return hurwitz_zeta(s, 1.0); }

Estimate epstein_zeta(cplx s, int n, double L) {
  if (n < 1) throw std::invalid_argument("epstein_zeta needs n >= 1");
  double h = n / 2.0;
  if (s == cplx(h)) throw std::domain_error("epstein_zeta pole at s = n/2");
  const int M = 16;  // pi * 16 > 50
  auto shells = shell_counts(n, M);
  cplx S = 0;
  for (int m = 1; m <= M; ++m) {
    if (!shells[m]) continue;
    double x = kPi * m;
    S += double(shells[m]) * (upper_gamma_scaled(s, x) + upper_gamma_scaled(h - s, x));
  }
  cplx rg = rgamma(s);
  cplx core = rg / (s - h) - rgamma(s + 1.0) + rg * S;
  double omega = 2 * kPi / L;
  cplx v = std::exp(s * std::log(kPi)) * core * std::exp(-2.0 * s * std::log(omega));
  // first omitted shell bounds the truncation
  double tail = double(shell_counts(n, M + 1)[M + 1] + 1) * std::exp(-kPi * (M + 1)) * 10;
  return {v, std::abs(v) * 1e-14 + tail * std::abs(rg)};
}

double epstein_residue(int n, double L) {
  double omega = 2 * kPi / L;
  return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0) * std::pow(omega, -n);
}

double torus_heat_trace(double t, int n, double L) {
  if (t <= 0) throw std::invalid_argument("heat trace needs t > 0");
  double w2 = std::pow(2 * kPi / L, 2);
  double s = 1;
  for (int k = 1;; ++k) {
    double e = std::exp(-t * w2 * k * k);
    s += 2 * e;
    if (e < 1e-20) break;
  }
  return std::pow(s, n);
}

ModelSpectrum ModelSpectrum::torus(int n, double L, double shift) {
  ModelSpectrum m;
  m.kind = Kind::TorusMultiplier;
  m.n = n;
  m.L = L;
  m.shift = shift;
  return m;
}

ModelSpectrum ModelSpectrum::shifted(double a) {
  ModelSpectrum m;
  m.kind = Kind::Shifted1D;
  m.shift = a;
  return m;
}

ModelSpectrum ModelSpectrum::fourier(std::vector<std::pair<int, cplx>> V, int cutoff) {
  ModelSpectrum m;
  m.kind = Kind::FourierMatrix;
  m.potential = std::move(V);
  m.cutoff = cutoff;
  return m;
}

std::vector<double> fourier_matrix_eigenvalues(const std::vector<std::pair<int, cplx>>& Vin, int K) {
  std::map<int, cplx> V;
  for (const auto& [k, a] : Vin) V[k] += a;
  bool real = true;
  for (const auto& [k, a] : V) {
    if (std::abs(fourier_amp(V, -k) - std::conj(a)) > 1e-14 * (1 + std::abs(a)))
      throw std::invalid_argument("potential is not real-valued");
    real = real && a.imag() == 0;
  }
  int d = 2 * K + 1;
  std::vector<double> ev;
  if (real) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) H(i, j) = fourier_amp(V, i - j).real() + (i == j ? double(i - K) * (i - K) : 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    ev.assign(es.eigenvalues().data(), es.eigenvalues().data() + d);
  } else {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) H(i, j) = fourier_amp(V, i - j) + (i == j ? double(i - K) * (i - K) : 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    ev.assign(es.eigenvalues().data(), es.eigenvalues().data() + d);
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

Estimate spectral_zeta(const ModelSpectrum& m, const SpectralPatch& patch, cplx z) {
  switch (m.kind) {
    case ModelSpectrum::Kind::TorusMultiplier: {
      double omega = 2 * kPi / m.L, c = m.shift;
      bool weighted = m.weight.size() != 1 || m.weight[0] != 1.0;
      if (m.n > 1) {
        if (c != 0 || weighted) throw std::invalid_argument("n > 1 supports the plain Laplacian only");
        Estimate e = epstein_zeta(z, m.n, m.L);
        if (patch.kind == SpectralPatch::Kind::Base) e.value += 1.0;
        else if (patch.kind != SpectralPatch::Kind::None) throw std::invalid_argument("covering patch on a base spectrum");
        return e;
      }
      if (c < 0 && -c >= omega * omega) throw std::domain_error("negative eigenvalue");
      Estimate out{0, 0};
      // k = 0
      double p0 = m.weight.empty() ? 0.0 : m.weight[0];
      if (p0 != 0) {
        if (c > 0) out.value += p0 * std::exp(-z * std::log(c));
        else if (c == 0 && patch.kind == SpectralPatch::Kind::Base) out.value += p0;
        else if (c == 0) throw std::domain_error("zero eigenvalue without a patch");
        else throw std::domain_error("eigenvalue on the spectral cut");
      }
      int K0 = static_cast<int>(std::ceil(2 * std::sqrt(std::abs(c)) / omega)) + 2;
      for (size_t mm = 0; mm < m.weight.size(); mm += 2) {
        double w = m.weight[mm];
        if (w == 0) continue;
        cplx part = 0;
        for (int k = 1; k <= K0; ++k) {
          double wk = omega * k;
          part += std::pow(wk, double(mm)) * std::exp(-z * std::log(wk * wk + c));
        }
        Estimate t = binomial_tail(z, c, omega, static_cast<int>(mm / 2), K0);
        out.value += 2.0 * w * (part + t.value);
        out.error += 2 * std::abs(w) * t.error;
      }
      return out;
    }
    case ModelSpectrum::Kind::Shifted1D: {
      double a = m.shift - std::floor(m.shift);
      if (a == 0) {
        Estimate r = riemann_zeta(z);
        Estimate out{2.0 * r.value, 2 * r.error};
        if (patch.kind == SpectralPatch::Kind::Base) out.value += 1.0;
        else throw std::domain_error("zero eigenvalue without a patch");
        return out;
      }
      Estimate p = hurwitz_zeta(z, a), q = hurwitz_zeta(z, 1 - a);
      return {p.value + q.value, p.error + q.error};
    }
    case ModelSpectrum::Kind::FourierMatrix: {
      cplx vbar = 0;
      for (const auto& [k, a] : m.potential)
        if (k == 0) vbar += a;
      int K = m.cutoff;
      auto e1 = fourier_matrix_eigenvalues(m.potential, K);
      auto e2 = fourier_matrix_eigenvalues(m.potential, 2 * K);
      Estimate z1 = zeta_from_eigenvalues(e1, K / 2, vbar.real(), patch, z);
      Estimate z2 = zeta_from_eigenvalues(e2, K, vbar.real(), patch, z);
      return {z2.value, std::abs(z2.value - z1.value) + z2.error};
    }
  }
  throw std::invalid_argument("unknown spectrum kind");
}

Estimate eta_series(const ModelSpectrum& m, cplx z) {
  if (m.kind != ModelSpectrum::Kind::Shifted1D) throw std::invalid_argument("eta_series needs the shifted model");
  double a = m.shift - std::floor(m.shift);
  if (a == 0) throw std::domain_error("D_a is not invertible for integer a");
  Estimate p = hurwitz_zeta(z, a), q = hurwitz_zeta(z, 1 - a);
  return {p.value - q.value, p.error + q.error};
}

double heat_trace(const ModelSpectrum& m, double t, const SpectralPatch& patch) {
  if (t <= 0) throw std::invalid_argument("heat trace needs t > 0");
  switch (m.kind) {
    case ModelSpectrum::Kind::TorusMultiplier: {
      double h = torus_heat_trace(t, m.n, m.L) * std::exp(-t * m.shift);
      if (m.shift == 0 && patch.kind == SpectralPatch::Kind::Base) h += std::exp(-t) - 1;
      return h;
    }
    case ModelSpectrum::Kind::Shifted1D: {
      double s = 0;
      for (int k = -1000; k <= 1000; ++k) s += std::exp(-t * (k + m.shift) * (k + m.shift));
      return s;
    }
    case ModelSpectrum::Kind::FourierMatrix: {
      double s = 0;
      for (double l : fourier_matrix_eigenvalues(m.potential, m.cutoff)) {
        if (patch.kind == SpectralPatch::Kind::Base && std::abs(l) < 1e-9) l = 1;
        s += std::exp(-t * l);
      }
      return s;
    }
  }
  throw std::invalid_argument("unknown spectrum kind");
}

Estimate gamma_zeta(const ModelSpectrum& m, const SpectralPatch& patch, cplx z) {
  if (m.kind != ModelSpectrum::Kind::TorusMultiplier) throw std::invalid_argument("gamma_zeta needs a multiplier model");
  if (patch.kind == SpectralPatch::Kind::Base) throw std::invalid_argument("base patch on the cover");
  double c = m.shift;
  if (c < 0) throw std::domain_error("negative spectrum");
  double rb = patch.kind == SpectralPatch::Kind::Covering ? std::sqrt(std::max(0.0, patch.eps - c)) : 0.0;
  if (c == 0 && rb == 0) throw std::domain_error("Laplacian on the cover needs the band patch");
  bool weighted = m.weight.size() != 1 || m.weight[0] != 1.0;
  if (weighted && m.n != 1) throw std::invalid_argument("weights need n = 1");
  double scale = std::pow(m.L / (2 * kPi), m.n);
  Estimate out{0, 0};
  if (!weighted) {
    double sphere = 2 * std::pow(kPi, m.n / 2.0) / std::tgamma(m.n / 2.0);
    Estimate r = radial_zeta(z, m.n, c, rb);
    return {scale * sphere * r.value, scale * sphere * r.error};
  }
  // odd powers of xi integrate to zero
  for (size_t k = 0; k < m.weight.size(); k += 2) {
    if (m.weight[k] == 0) continue;
    Estimate r = radial_zeta(z, 1 + static_cast<int>(k), c, rb);
    out.value += 2 * m.weight[k] * scale * r.value;
    out.error += 2 * std::abs(m.weight[k]) * scale * r.error;
  }
  return out;
}

double gamma_heat_trace(const std::function<double(double)>& symbol, double t, double L) {
  boost::math::quadrature::sinh_sinh<double> q;
  double I = q.integrate([&](double xi) { return std::exp(-t * symbol(xi)); }, 1e-14);
  return L / (2 * kPi) * I;
}

double gamma_heat_trace_laplacian(double t, int n, double L) {
  return std::pow(L / (2 * kPi), n) * std::pow(kPi / t, n / 2.0);
}

}  // namespace zl::oracle
