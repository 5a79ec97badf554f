#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "zetalift/symbol.hpp"

namespace zl {

// Integrals of xi^alpha over the unit sphere S^{n-1}. Exact for n = 1.
class SphereIntegralTable {
 public:
  explicit SphereIntegralTable(int n) : n_(n) {}
  SphereIntegralTable(const SphereIntegralTable& o) : n_(o.n_) {}
  int dim() const { return n_; }
  Num operator()(const Multi& alpha) const;
  static Num compute(const Multi& alpha);

 private:
  int n_;
  mutable std::mutex mu_;
  mutable std::map<Multi, Num> cache_;
};

const SphereIntegralTable& sphere_table(int n);

struct DensityOnBase {
  TrigPoly value;
  Num integrate() const { return value.domain_integral(); }
};

// Pointwise residue density of tr sigma: degree -n, log-free part only.
DensityOnBase res_density(const PolyhomSymbol& sigma);
Num wres(const PolyhomSymbol& sigma);
Num sres(const PolyhomSymbol& sigma);  // graded, tr_+ - tr_-

// Finite part of \int_1^R r^{d+n-1} log^ell r dr as R -> oo, as a function
// of the degree d: K / (d + n)^{ell+1} with K = (-1)^{ell+1} ell!, plus the
// unit-ball part fixed by the excision convention. The polynomial-core test
// looks at the exponent evaluated at z = at.
struct RadialMero {
  int n = 1;
  int ell = 0;
  Num inner;
  Num K() const;
  bool pole_at(const Num& d) const { return (d + Num(n)).is_zero(); }
  Num value(const Num& d) const;  // throws at the pole
};
RadialMero radial_finite_part(const HomTerm& t, int n, const ExcisionConvention& conv = {}, const Num& at = Num(0));

// One scalar term of TR: weight(z) * [K / s(z)^{ell+1} + inner] where
// weight = omega^{-n} * sphere(alpha) * mean(coef)(z) and
// s(z) = |alpha| + mu(z) + n.
struct TraceTerm {
  ZPoly weight;
  ZPoly s;
  int ell = 0;
  Num inner;
  Num K() const;
};
// inner is the unit-ball part of the representative used near z = at.
std::vector<TraceTerm> trace_terms(const PolyhomSymbol& scalar_sigma, const ExcisionConvention& conv,
                                   const Num& at = Num(0));

// Canonical trace of tr sigma. canonical_trace_at(sigma, z) equals
// canonical_trace(sigma.at(z)).
Num canonical_trace(const PolyhomSymbol& sigma, const ExcisionConvention& conv = {});
Num canonical_trace_at(const PolyhomSymbol& sigma, const Num& z, const ExcisionConvention& conv = {});
Num str_canonical(const PolyhomSymbol& sigma, const ExcisionConvention& conv = {});

// True when the order is an integer >= -n (TR undefined there).
bool excluded_order(const ZPoly& order, int n, const Num& z = Num(0));

}  // namespace zl
