#include <cmath>
#include <random>

#include "doctest.h"
#include "zetalift/resolvent.hpp"

using namespace zl;

namespace {

const Num kOne(1);

TrigPoly random_trig(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> small(-3, 3), den(1, 3), kmode(-2, 2);
  TrigPoly c(n, kOne);
  for (int m = 0; m < 2; ++m) {
    Multi k(n);
    for (auto& v : k) v = kmode(rng);
    Multi mk(k);
    for (auto& v : mk) v = -v;
    Num a = Num::rational(small(rng), den(rng));
    // real-valued: a e^{ik} + a e^{-ik}
    c.add_mode(k, ZPoly(a));
    c.add_mode(mk, ZPoly(a));
  }
  return c;
}

// |xi|^2 + b(x) xi_1 + V(x) with random trig coefficients.
Weight random_laplace(std::mt19937& rng, int n, bool first_order) {
  PolyhomSymbol s = parse_symbol(n == 1 ? "xi^2" : "xi1^2 + xi2^2", n, kOne);
  PolyhomSymbol v(n, kOne, ZPoly(2), kExactDepth);
  v.add_key(0, 0, 2, Multi(n, 0), 0, random_trig(rng, n));
  if (first_order) {
    Multi e1(n, 0);
    e1[0] = 1;
    v.add_key(0, 0, 1, e1, 0, random_trig(rng, n));
  }
  return Weight(s + v);
}

Num random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  return Num::rational(num(rng), den(rng));
}

}  // namespace

TEST_CASE("weight validation") {
  CHECK_NOTHROW(Weight(parse_symbol("xi^2 + cos(x)", 1, kOne)));
  CHECK_THROWS_AS(Weight(parse_symbol("xi", 1, kOne)), std::invalid_argument);
  CHECK_THROWS_AS(Weight(parse_symbol("-xi^2", 1, kOne)), std::invalid_argument);
  CHECK_THROWS_AS(Weight(parse_symbol("(2 + cos(x)) xi^2", 1, kOne)), std::invalid_argument);
  CHECK_THROWS_AS(Weight(parse_symbol("xi^2", 1, kOne), 1.0), std::invalid_argument);
  Weight w(parse_symbol("3 xi1^2 + 3 xi2^2 + 1", 2, kOne));
  CHECK(w.leading_coefficient() == Num(3));
  CHECK(w.order() == Num(2));
  PolyhomSymbol m = PolyhomSymbol::block_diag({parse_symbol("xi^2", 1, kOne), parse_symbol("2 xi^2", 1, kOne)});
  CHECK_THROWS_AS(Weight{m}, std::invalid_argument);
}

TEST_CASE("resolvent of the flat Laplacian") {
  Weight q(parse_symbol("xi^2", 1, kOne));
  ResolventSymbol b = resolvent_symbol(q, 5);
  CHECK(b.entry_comps(0, 0).size() == 1);
  CHECK(b.comp(0, 0, 0).size() == 1);
  CHECK(b.comp(0, 0, 0).begin()->first == ResKey{Multi{0}, 1});
  cplx lam(-2.0, 0.5);
  CHECK(std::abs(b.eval(0, 0, {0.1}, {3.0}, lam) - 1.0 / (9.0 - lam)) < 1e-14);
}

TEST_CASE("resolvent with a potential") {
  Weight q(parse_symbol("xi^2 + cos(x)", 1, kOne));
  ResolventSymbol b = resolvent_symbol(q, 4);
  CHECK(b.comp(0, 0, 1).empty());
  const ResComp& c2 = b.comp(0, 0, 2);
  REQUIRE(c2.size() == 1);
  CHECK(c2.begin()->first == ResKey{Multi{0}, 2});
  CHECK(c2.begin()->second == -TrigPoly::cos_mode(1, kOne, {1}));
  CHECK(resolvent_defect(q, b).is_identity());
}

TEST_CASE("resolvent defect vanishes exactly, randomized") {
  std::mt19937 rng(21);
  for (int rep = 0; rep < 12; ++rep) {
    int n = 1 + rep % 2;
    Weight q = random_laplace(rng, n, rep % 3 == 0);
    int N = n == 1 ? 6 : 4;
    ResolventSymbol b = resolvent_symbol(q, N);
    CHECK(resolvent_defect(q, b).is_identity());
  }
  // matrix weight with scalar leading part
  PolyhomSymbol m = PolyhomSymbol::block_diag(
      {parse_symbol("xi^2 + cos(x)", 1, kOne), parse_symbol("xi^2 + 2 sin(2x) + xi", 1, kOne)});
  Weight qm(m);
  CHECK(resolvent_defect(qm, resolvent_symbol(qm, 5)).is_identity());
  // non-unit leading coefficient
  Weight q3(parse_symbol("3 xi^2 + cos(x) xi", 1, kOne));
  CHECK(resolvent_defect(q3, resolvent_symbol(q3, 5)).is_identity());
}

TEST_CASE("complex powers: closed-form examples") {
  Weight flat(parse_symbol("xi^2", 1, kOne));
  PowerFamily f = complex_power_family(flat, 5);
  CHECK(equivalent(f.symbol, PolyhomSymbol::radial(1, kOne, ZPoly::affine(Num(0), Num(-2))).truncated(5)));

  Weight q(parse_symbol("xi^2 + cos(x)", 1, kOne));
  PowerFamily g = complex_power_family(q, 4);
  const Comp& c2 = g.symbol.comp(0, 0, 2);
  REQUIRE(c2.size() == 1);
  // -z V |xi|^{-2z-2}
  TrigPoly want = TrigPoly::cos_mode(1, kOne, {1}) * ZPoly::affine(Num(0), Num(-1));
  CHECK(c2.begin()->second == want);
  CHECK(g.symbol.mu_of(2, Multi{0}) == ZPoly::affine(Num(-2), Num(-2)));

  // z = -1 gives sigma(Q) back; z = -2 gives sigma(Q) * sigma(Q)
  CHECK(equivalent(complex_power_symbol(q, Num(-1), 6), q.symbol().truncated(6)));
  CHECK(equivalent(complex_power_symbol(q, Num(-2), 6), star_product(q.symbol(), q.symbol(), 6)));
}

TEST_CASE("consistency at integers, randomized") {
  std::mt19937 rng(4);
  for (int rep = 0; rep < 6; ++rep) {
    int n = 1 + rep % 2;
    Weight q = random_laplace(rng, n, true);
    int N = n == 1 ? 5 : 4;
    CHECK(equivalent(complex_power_symbol(q, Num(-1), N), q.symbol().truncated(N)));
    CHECK(equivalent(complex_power_symbol(q, Num(-2), N), star_product(q.symbol(), q.symbol(), N)));
    CHECK(equivalent(complex_power_symbol(q, Num(0), N), PolyhomSymbol::identity(n, kOne).truncated(N)));
  }
}

TEST_CASE("group law, randomized rational exponents") {
  std::mt19937 rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 1 + rep % 2;
    Weight q = random_laplace(rng, n, rep % 4 == 1);
    int N = n == 1 ? 5 : 3;
    Num z1 = random_rational(rng), z2 = random_rational(rng);
    PolyhomSymbol lhs = star_product(complex_power_symbol(q, z1, N), complex_power_symbol(q, z2, N), N);
    PolyhomSymbol rhs = complex_power_symbol(q, z1 + z2, N);
    CHECK(equivalent(lhs, rhs));
  }
}

TEST_CASE("log symbol") {
  Weight flat(parse_symbol("xi^2", 1, kOne));
  CHECK(equivalent(log_symbol(flat, 4), parse_symbol("2 log|xi|", 1, kOne).truncated(4)));

  Weight q(parse_symbol("xi^2 + cos(x)", 1, kOne));
  PolyhomSymbol l = log_symbol(q, 4);
  CHECK(l.comp(0, 0, 1).empty());
  const Comp& c2 = l.comp(0, 0, 2);
  REQUIRE(c2.size() == 1);
  CHECK(c2.begin()->first == TermKey{Multi{0}, 0});
  CHECK(c2.begin()->second == TrigPoly::cos_mode(1, kOne, {1}));

  // c != 1: leading part q log|xi| + log c
  Weight q4(parse_symbol("4 xi^2", 1, kOne));
  PolyhomSymbol l4 = log_symbol(q4, 3);
  const Comp& c0 = l4.comp(0, 0, 0);
  REQUIRE(c0.size() == 2);
  CHECK(c0.at(TermKey{Multi{0}, 1}) == TrigPoly::constant(1, kOne, Num(2)));
  CHECK(std::abs(c0.at(TermKey{Multi{0}, 0}).mean().constant().value() - std::log(4.0)) < 1e-15);
}

TEST_CASE("derivative law at a sample point") {
  std::mt19937 rng(8);
  Weight q = random_laplace(rng, 1, true);
  int N = 5;
  Num z = Num::rational(3, 10);
  PolyhomSymbol rhs = -star_product(log_symbol(q, N), complex_power_symbol(q, z, N), N);
  double eps = 1e-4;
  PolyhomSymbol fam = complex_power_family(q, N).symbol;
  for (double xi : {3.0, -4.5, 7.0}) {
    std::vector<double> x{0.37}, v{xi};
    cplx fd = (fam.eval(0, 0, x, v, z.real() + eps) - fam.eval(0, 0, x, v, z.real() - eps)) / (2 * eps);
    CHECK(std::abs(fd - rhs.eval(0, 0, x, v)) < 1e-6);
  }
}

TEST_CASE("h(Q) for the admissible kinds") {
  Weight flat(parse_symbol("xi^2", 1, kOne));
  CHECK(equivalent(h_of_weight(flat, HFunctionSpec::polynomial({Num(0), Num(1)}), 4),
                   parse_symbol("xi^2", 1, kOne).truncated(4)));
  CHECK(equivalent(h_of_weight(flat, HFunctionSpec::power(Num::rational(1, 2)), 4),
                   parse_symbol("|xi|^-1", 1, kOne).truncated(4)));
  CHECK_THROWS_AS(HFunctionSpec::power(Num(-1)), std::invalid_argument);

  // sign symbol of D = xi + 1/4 through the power calculus
  Weight d2(parse_symbol("xi^2 + xi/2 + 1/16", 1, kOne));
  PolyhomSymbol inv = h_of_weight(d2, HFunctionSpec::power(Num::rational(1, 2)), 10);
  PolyhomSymbol sgn = star_product(parse_symbol("xi + 1/4", 1, kOne), inv, 10);
  CHECK(std::abs(inv.eval(0, 0, {0.0}, {5.0}) - 1.0 / 5.25) < 1e-10);
  CHECK(std::abs(sgn.eval(0, 0, {0.0}, {5.0}) - 1.0) < 1e-10);
  CHECK(std::abs(sgn.eval(0, 0, {0.0}, {-5.0}) + 1.0) < 1e-10);
  // leading components: xi |xi|^{-1}, then a-corrections
  CHECK(sgn.comp(0, 0, 0).size() == 1);
  CHECK(sgn.comp(0, 0, 0).begin()->first == TermKey{Multi{1}, 0});

  // composite: (1 + x) x^{-1} = 1 + Q^{-1}
  Weight q(parse_symbol("xi^2 + 1", 1, kOne));
  PolyhomSymbol comp = h_of_weight(q, HFunctionSpec::composite({Num(1), Num(1)}, Num(1)), 6);
  PolyhomSymbol want = PolyhomSymbol::identity(1, kOne) + complex_power_symbol(q, Num(1), 6);
  CHECK(equivalent(comp, want.truncated(6)));
}

TEST_CASE("family value at z = 1/2 with a potential") {
  Weight q(parse_symbol("xi^2 + 1 + cos(x)", 1, kOne));
  PolyhomSymbol s = complex_power_symbol(q, Num::rational(1, 2), 4);
  CHECK(s.comp(0, 0, 0).begin()->second == TrigPoly::constant(1, kOne, 1));
  const Comp& c2 = s.comp(0, 0, 2);
  REQUIRE(c2.size() == 1);
  TrigPoly want = (TrigPoly::constant(1, kOne, 1) + TrigPoly::cos_mode(1, kOne, {1})) * ZPoly(Num::rational(-1, 2));
  CHECK(c2.begin()->second == want);
}
