#pragma once

#include <optional>
#include <vector>

#include "zetalift/symbol.hpp"

namespace zl {

// Elliptic weight whose leading component is c |xi|^q Id with c > 0 constant.
class Weight {
 public:
  // Throws std::invalid_argument when the leading component is not of that
  // form or the cut is not the negative real axis.
  explicit Weight(PolyhomSymbol symbol, double cut = 3.141592653589793, std::optional<double> agmon = {});

  const PolyhomSymbol& symbol() const { return sym_; }
  const Num& order() const { return q_; }
  const Num& leading_coefficient() const { return c_; }
  double spectral_cut() const { return cut_; }
  std::optional<double> agmon_angle() const { return agmon_; }
  bool principal_scalar() const { return true; }
  int dim() const { return sym_.dim(); }
  int size() const { return sym_.size(); }

 private:
  PolyhomSymbol sym_;
  Num q_, c_;
  double cut_;
  std::optional<double> agmon_;
};

// Terms coef(x) xi^alpha |xi|^rho (c|xi|^q - lambda)^(-t), keyed by (alpha, t).
// Component j is jointly homogeneous of degree d0 - j (d0 = -q for a
// resolvent, 0 for a resolvent defect), which fixes
// rho = d0 + q t - j - |alpha|.
using ResKey = std::pair<Multi, int>;
using ResComp = std::map<ResKey, TrigPoly>;

class ResolventSymbol {
 public:
  ResolventSymbol(int n, Num omega, Num q, Num c, int depth, int k, Num d0);

  int dim() const { return n_; }
  const Num& q() const { return q_; }
  const Num& c() const { return c_; }
  int depth() const { return depth_; }
  int size() const { return k_; }
  Num rho(int j, const Multi& alpha, int t) const;

  void add(int r, int col, int j, const Multi& alpha, int t, const TrigPoly& coef);
  const std::map<int, ResComp>& entry_comps(int r, int col) const { return ents_[r * k_ + col]; }
  const ResComp& comp(int r, int col, int j) const;
  bool is_identity() const;  // exactly Id in component 0 (t = 0) and nothing else
  cplx eval(int r, int col, const std::vector<double>& x, const std::vector<double>& xi, cplx lambda) const;

 private:
  int n_;
  Num omega_, q_, c_, d0_;
  int depth_, k_;
  std::vector<std::map<int, ResComp>> ents_;
};

ResolventSymbol resolvent_symbol(const Weight& Q, int depth);
// (sigma(Q) - lambda) * b computed with the full star product; t = 0 terms
// are lambda-free.
ResolventSymbol resolvent_defect(const Weight& Q, const ResolventSymbol& b);

// Q^{-z} = c^{-z} * symbol(z): the symbol has coefficients polynomial in z and
// radial exponents affine in z; the scalar c^{-z} is carried as log c.
struct PowerFamily {
  PolyhomSymbol symbol;
  Num c;
  Num log_c;  // 0 when c = 1
  PolyhomSymbol at(const Num& z) const;
};

PowerFamily complex_power_family(const Weight& Q, int depth);
PolyhomSymbol complex_power_symbol(const Weight& Q, const Num& z, int depth);
PolyhomSymbol log_symbol(const Weight& Q, int depth);

struct HFunctionSpec {
  enum class Kind { Polynomial, Power, Composite };
  Kind kind = Kind::Polynomial;
  std::vector<Num> poly{Num(1)};  // h(x) = sum poly[k] x^k
  Num s{0};                       // h(x) = x^{-s}

  static HFunctionSpec one() { return {}; }
  static HFunctionSpec polynomial(std::vector<Num> coeffs) { return {Kind::Polynomial, std::move(coeffs), Num(0)}; }
  static HFunctionSpec power(const Num& s);
  static HFunctionSpec composite(std::vector<Num> coeffs, const Num& s);
  bool is_one() const;
};

PolyhomSymbol h_of_weight(const Weight& Q, const HFunctionSpec& h, int depth);

}  // namespace zl
