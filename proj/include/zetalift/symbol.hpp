#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zetalift/trigpoly.hpp"

namespace zl {

// c(x) xi^alpha |xi|^mu log^ell |xi|, read on |xi| >= 1.
struct HomTerm {
  TrigPoly coef;
  Multi alpha;
  ZPoly mu;
  int ell = 0;

  ZPoly degree() const;
  cplx eval(const std::vector<double>& x, const std::vector<double>& xi, cplx z = 0.0) const;
};

std::vector<HomTerm> term_dxi(const HomTerm& t, int axis);
// Rewrites xi_n^2 = |xi|^2 - sum_{i<n} xi_i^2 until alpha_n <= 1.
std::vector<HomTerm> normal_form(const HomTerm& t);

int abs_multi(const Multi& a);

// Terms of one homogeneous component, keyed by (alpha, ell). The radial
// exponent is implied: mu = degree - |alpha|.
using TermKey = std::pair<Multi, int>;
using Comp = std::map<TermKey, TrigPoly>;

// d/dxi_axis of a component of the given degree; the result has degree - 1.
Comp comp_dxi(const Comp& c, const ZPoly& degree, int axis);
// d/dx^gamma of every coefficient.
Comp comp_dx(const Comp& c, const Multi& gamma);
// All multi-indices of length n and size <= m, grouped by size.
std::vector<std::vector<Multi>> multis_by_size(int n, int m);
Num multi_factorial(const Multi& g);

struct HomComponent {
  ZPoly degree;
  std::vector<HomTerm> terms;
};

// Depth used for symbols known in closed form (every component beyond the
// listed ones is exactly zero).
inline constexpr int kExactDepth = 1 << 20;

class PolyhomSymbol {
 public:
  PolyhomSymbol() = default;
  PolyhomSymbol(int n, Num omega, ZPoly order, int depth, int k = 1);
  static PolyhomSymbol identity(int n, const Num& omega, int k = 1, int depth = kExactDepth);
  // Scalar multiple of |xi|^mu with exact depth; mu may depend on z.
  static PolyhomSymbol radial(int n, const Num& omega, const ZPoly& mu, const ZPoly& c = ZPoly(1));
  static PolyhomSymbol block_diag(const std::vector<PolyhomSymbol>& blocks);

  int dim() const { return n_; }
  const Num& omega() const { return omega_; }
  const ZPoly& order() const { return order_; }
  int depth() const { return depth_; }
  int size() const { return k_; }
  bool exact_depth() const { return depth_ >= kExactDepth / 2; }

  const std::optional<std::vector<int>>& grading() const { return grading_; }
  PolyhomSymbol& set_grading(std::vector<int> signs);

  // Places the term by its degree; throws when the degree is not
  // order - j for an integer j >= 0. Terms with j >= depth are dropped.
  void add_term(int r, int c, const HomTerm& t);
  void add_term(const HomTerm& t) { add_term(0, 0, t); }
  // Adds coef * xi^alpha |xi|^(order - j - |alpha|) log^ell at component j.
  void add_key(int r, int c, int j, const Multi& alpha, int ell, const TrigPoly& coef);

  const std::map<int, Comp>& entry_comps(int r, int c) const { return ents_[r * k_ + c]; }
  const Comp& comp(int r, int c, int j) const;
  HomComponent component(int r, int c, int j) const;
  std::vector<HomTerm> terms(int r, int c) const;
  ZPoly mu_of(int j, const Multi& alpha) const;
  bool is_zero() const;

  PolyhomSymbol entry(int r, int c) const;
  PolyhomSymbol matrix_trace() const;
  PolyhomSymbol supertrace() const;  // requires grading
  PolyhomSymbol truncated(int depth) const;
  // Same symbol described with a larger order (new_order - order must be a
  // non-negative integer).
  PolyhomSymbol reordered(const ZPoly& new_order) const;
  PolyhomSymbol dz() const;
  PolyhomSymbol at(const Num& z) const;
  PolyhomSymbol scaled(const ZPoly& s) const;
  PolyhomSymbol mul_coef(const TrigPoly& c) const;  // pointwise multiply by c(x)

  // Every term is xi^alpha |xi|^(2m) with m >= 0 an integer and no logs.
  bool is_differential() const;

  cplx eval(int r, int c, const std::vector<double>& x, const std::vector<double>& xi, cplx z = 0.0) const;

  PolyhomSymbol operator-() const;
  friend PolyhomSymbol operator+(const PolyhomSymbol& a, const PolyhomSymbol& b);
  friend PolyhomSymbol operator-(const PolyhomSymbol& a, const PolyhomSymbol& b) { return a + (-b); }
  // Componentwise equality up to the smaller depth (orders must agree).
  friend bool equivalent(const PolyhomSymbol& a, const PolyhomSymbol& b);

  std::string str() const;

 private:
  void check_entry(int r, int c) const;
  int n_ = 1;
  Num omega_{1};
  ZPoly order_;
  int depth_ = 1;
  int k_ = 1;
  std::vector<std::map<int, Comp>> ents_{1};
  std::optional<std::vector<int>> grading_;
};

PolyhomSymbol star_product(const PolyhomSymbol& a, const PolyhomSymbol& b, int depth);

// Inner-region convention used by the radial integrals. Sharp: symbols vanish
// on |xi| < 1 except that a term whose radial part is a non-negative even
// power (polynomial in xi, no log) keeps its polynomial value on the unit
// ball. SharpPure: every term vanishes on |xi| < 1. Smooth is reserved.
struct ExcisionConvention {
  enum class Mode { Sharp, SharpPure, Smooth };
  Mode mode = Mode::Sharp;
  // Replaces the unit-ball contribution of the whole symbol by a value
  // depending on z (used by families whose inner part is known in closed
  // form).
  std::function<cplx(cplx)> inner_override;
  std::string name() const;
};

// Small expression language for scalar symbols:
//   numbers, i, xi (n = 1), xi1..xin, |xi|, log|xi|, cos(2*x), sin(x1+x2),
//   e(k1,..,kn) for exp(i omega k.x), x-free powers, products, sums.
PolyhomSymbol parse_symbol(const std::string& text, int n, const Num& omega);

}  // namespace zl
