#pragma once

#include <optional>
#include <vector>

#include "zetalift/resolvent.hpp"
#include "zetalift/trace.hpp"

namespace zl {

// A(z) = P(D) h(Q) Q^{-z}, order a - q z. P must be differential.
class HoloFamily {
 public:
  HoloFamily(PolyhomSymbol P, HFunctionSpec h, Weight Q, int depth);
  static HoloFamily power(const Weight& Q, int depth);  // P = 1, h = 1

  const PolyhomSymbol& P() const { return P_; }
  const HFunctionSpec& h() const { return h_; }
  const Weight& weight() const { return Q_; }
  int depth() const { return depth_; }
  int dim() const { return Q_.dim(); }
  const Num& a() const { return a_; }
  const Num& q() const { return Q_.order(); }

  // c^{z} A(z): coefficients polynomial in z, exponents affine in z.
  const PolyhomSymbol& symbol() const { return fam_.symbol; }
  const Num& c() const { return fam_.c; }
  const Num& log_c() const { return fam_.log_c; }

  PolyhomSymbol at(const Num& z) const;
  PolyhomSymbol dz_at(const Num& z) const;  // d/dz A(z), c^{-z} included
  Num pole(int j) const;                    // (a + n - j) / q
  // Index j when p = d_j for an integer j >= 0.
  std::optional<int> pole_index(const Num& p) const;

 private:
  PolyhomSymbol P_;
  HFunctionSpec h_;
  Weight Q_;
  int depth_;
  Num a_;
  PowerFamily fam_;
};

PolyhomSymbol family_symbol_at(const HoloFamily& F, const Num& z);

struct MeromorphicGerm {
  Num point;
  Num principal;  // coefficient of 1/(z - p)
  Num finite;
};

// Laurent data of TR(A(z)) at p. Throws std::domain_error on a double pole
// and std::out_of_range when p = d_j with j beyond the truncation depth.
// For P = 1 (or any P) and h = 1 the finite part at p = 0 is unaffected by
// truncation: every dropped component carries a factor z.
MeromorphicGerm zeta_germ(const HoloFamily& F, const Num& p, const ExcisionConvention& conv = {});
// Laurent data of TR(exp(-z log_c) sym(z)) at p, without the depth check.
MeromorphicGerm laurent_germ(const PolyhomSymbol& sym, const Num& log_c, const Num& p,
                             const ExcisionConvention& conv = {});
// Throws std::out_of_range when p = d_j lies beyond the truncation depth.
void check_reachable(const HoloFamily& F, const Num& p);
Num zeta_invariant(const HoloFamily& F, const ExcisionConvention& conv = {});

struct KVCheck {
  int j = 0;
  Num point, lhs, rhs;
  double tol = 0;
  bool pass = false;
};
KVCheck kv_residue_check(const HoloFamily& F, int j, double tol = 1e-10, const ExcisionConvention& conv = {});

struct PSCheck {
  Num point, fp, tr_term, res_term;
  bool differential = false;
  double tol = 0;
  bool pass = false;
};
// fp_{z=p} TR(A(z)) = TR(A(p)) + (1/q) Res(A'(p)). Throws std::domain_error
// when A(p) has an excluded integer order and is not differential.
PSCheck ps_fp_check(const HoloFamily& F, const Num& p, double tol = 1e-10, const ExcisionConvention& conv = {});
PSCheck ps_fp_check_at_pole(const HoloFamily& F, int j, double tol = 1e-10, const ExcisionConvention& conv = {});

struct PoleEntry {
  int j = 0;
  MeromorphicGerm germ;
  KVCheck kv;
  std::optional<PSCheck> ps;  // only where A(d_j) is differential
};
struct PoleReport {
  std::vector<PoleEntry> poles;
  bool pass() const;
};
// Poles d_0 .. d_J, J = depth - 1 unless given.
PoleReport pole_report(const HoloFamily& F, double tol = 1e-10, std::optional<int> J = {},
                       const ExcisionConvention& conv = {});

// Points where some radial finite part of TR(A(z)) is singular with a
// nonzero principal part.
std::vector<Num> detected_poles(const HoloFamily& F, const ExcisionConvention& conv = {});

// -(1/q) sRes(log Q) for a graded weight.
Num index_via_residue(const Weight& Q, int depth);

// Shifted model D_a = -i d/dx + a on the circle of length 2 pi, 0 < a < 1.
struct EtaResult {
  Num outer;         // fp at 0 of the |xi| >= 1 part of TR(D |D|^{-1-2z})
  Num inner;         // unit-ball integral of the full symbol at z = 0
  Num local;         // outer + inner: the canonical-trace value
  Num off_diagonal;  // lattice translates of the kernel of sign(D_a)
  Num value;         // local + off_diagonal
};
PolyhomSymbol shifted_dirac_symbol(const Num& a);
// D_a (D_a^2)^{-1/2} (D_a^2)^{-z}
HoloFamily eta_family(const Num& a, int depth = 4);
Num eta_inner(const Num& a);
EtaResult eta_invariant(const Num& a, int depth = 4);

}  // namespace zl
