#include "zetalift/symbol.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zl {

int abs_multi(const Multi& a) {
  int s = 0;
  for (int v : a) s += v;
  return s;
}

ZPoly HomTerm::degree() const { return mu + ZPoly(Num(abs_multi(alpha))); }

cplx HomTerm::eval(const std::vector<double>& x, const std::vector<double>& xi, cplx z) const {
  double r2 = 0;
  cplx mono = 1;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    r2 += xi[i] * xi[i];
    mono *= std::pow(xi[i], alpha[i]);
  }
  double r = std::sqrt(r2);
  double lg = std::log(r);
  return coef.eval(x, z) * mono * std::exp(mu.eval(z) * lg) * std::pow(lg, ell);
}

std::vector<HomTerm> term_dxi(const HomTerm& t, int axis) {
  std::vector<HomTerm> out;
  if (t.alpha[axis] > 0) {
    HomTerm a = t;
    a.alpha[axis] -= 1;
    a.coef *= ZPoly(Num(t.alpha[axis]));
    out.push_back(a);
  }
  if (!t.mu.is_zero()) {
    HomTerm b = t;
    b.alpha[axis] += 1;
    b.mu -= ZPoly(2);
    b.coef *= t.mu;
    out.push_back(b);
  }
  if (t.ell > 0) {
    HomTerm c = t;
    c.alpha[axis] += 1;
    c.mu -= ZPoly(2);
    c.ell -= 1;
    c.coef *= ZPoly(Num(t.ell));
    out.push_back(c);
  }
  return out;
}

std::vector<HomTerm> normal_form(const HomTerm& t) {
  int n = static_cast<int>(t.alpha.size());
  if (t.alpha[n - 1] < 2) return {t};
  std::vector<HomTerm> out;
  HomTerm base = t;
  base.alpha[n - 1] -= 2;
  HomTerm up = base;
  up.mu += ZPoly(2);
  for (auto& h : normal_form(up)) out.push_back(h);
  for (int i = 0; i < n - 1; ++i) {
    HomTerm s = base;
    s.alpha[i] += 2;
    s.coef = -s.coef;
    for (auto& h : normal_form(s)) out.push_back(h);
  }
  return out;
}

namespace {
const Comp kEmptyComp;
}  // namespace

Comp comp_dxi(const Comp& c, const ZPoly& degree, int axis) {
  Comp out;
  auto put = [&out](const Multi& a, int ell, const TrigPoly& v) {
    if (v.is_zero()) return;
    auto [it, fresh] = out.emplace(TermKey{a, ell}, v);
    if (!fresh) {
      it->second += v;
      if (it->second.is_zero()) out.erase(it);
    }
  };
  for (const auto& [key, coef] : c) {
    const auto& [alpha, ell] = key;
    ZPoly mu = degree - ZPoly(Num(abs_multi(alpha)));
    Multi up = alpha;
    up[axis] += 1;
    if (alpha[axis] > 0) {
      Multi dn = alpha;
      dn[axis] -= 1;
      put(dn, ell, coef * ZPoly(Num(alpha[axis])));
    }
    if (!mu.is_zero()) put(up, ell, coef * mu);
    if (ell > 0) put(up, ell - 1, coef * ZPoly(Num(ell)));
  }
  return out;
}

Comp comp_dx(const Comp& c, const Multi& gamma) {
  Comp out;
  for (const auto& [key, coef] : c) {
    TrigPoly d = coef;
    for (std::size_t i = 0; i < gamma.size(); ++i)
      for (int k = 0; k < gamma[i]; ++k) d = d.dx(static_cast<int>(i));
    if (!d.is_zero()) out.emplace(key, d);
  }
  return out;
}

namespace {

void multis_rec(int n, int m, Multi& cur, int axis, std::vector<std::vector<Multi>>& out) {
  if (axis == n) {
    out[abs_multi(cur)].push_back(cur);
    return;
  }
  for (int v = 0; v <= m; ++v) {
    cur[axis] = v;
    multis_rec(n, m - v, cur, axis + 1, out);
  }
  cur[axis] = 0;
}

}  // namespace

std::vector<std::vector<Multi>> multis_by_size(int n, int m) {
  std::vector<std::vector<Multi>> out(m + 1);
  Multi cur(n, 0);
  multis_rec(n, m, cur, 0, out);
  return out;
}

Num multi_factorial(const Multi& g) {
  Num f(1);
  for (int v : g) f *= factorial(v);
  return f;
}

namespace {

bool constant_integer(const ZPoly& p, long& out) {
  if (!p.is_const()) return false;
  Num c = p.constant();
  if (!c.is_integer()) return false;
  out = c.to_long();
  return true;
}

}  // namespace

PolyhomSymbol::PolyhomSymbol(int n, Num omega, ZPoly order, int depth, int k)
    : n_(n), omega_(std::move(omega)), order_(std::move(order)), depth_(depth), k_(k), ents_(k * k) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  if (depth < 1) throw std::invalid_argument("truncation depth must be >= 1");
  if (k < 1) throw std::invalid_argument("matrix size must be >= 1");
}

PolyhomSymbol PolyhomSymbol::identity(int n, const Num& omega, int k, int depth) {
  PolyhomSymbol s(n, omega, ZPoly(), depth, k);
  for (int i = 0; i < k; ++i) s.add_key(i, i, 0, Multi(n, 0), 0, TrigPoly::constant(n, omega, 1));
  return s;
}

PolyhomSymbol PolyhomSymbol::radial(int n, const Num& omega, const ZPoly& mu, const ZPoly& c) {
  PolyhomSymbol s(n, omega, mu, kExactDepth);
  s.add_key(0, 0, 0, Multi(n, 0), 0, TrigPoly::constant(n, omega, c));
  return s;
}

PolyhomSymbol PolyhomSymbol::block_diag(const std::vector<PolyhomSymbol>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("block_diag of nothing");
  const auto& b0 = blocks.front();
  int k = 0, depth = kExactDepth;
  for (const auto& b : blocks) {
    if (b.n_ != b0.n_ || b.omega_ != b0.omega_) throw std::invalid_argument("block_diag geometry mismatch");
    if (b.order_ != b0.order_) throw std::invalid_argument("block_diag needs equal orders");
    k += b.k_;
    depth = std::min(depth, b.depth_);
  }
  PolyhomSymbol s(b0.n_, b0.omega_, b0.order_, depth, k);
  int off = 0;
  for (const auto& b : blocks) {
    for (int r = 0; r < b.k_; ++r)
      for (int c = 0; c < b.k_; ++c)
        for (const auto& [j, comp] : b.entry_comps(r, c))
          for (const auto& [key, coef] : comp) s.add_key(off + r, off + c, j, key.first, key.second, coef);
    off += b.k_;
  }
  return s;
}

PolyhomSymbol& PolyhomSymbol::set_grading(std::vector<int> signs) {
  if (static_cast<int>(signs.size()) != k_) throw std::invalid_argument("grading size differs from matrix size");
  for (int s : signs)
    if (s != 1 && s != -1) throw std::invalid_argument("grading signs must be +1 or -1");
  grading_ = std::move(signs);
  return *this;
}

void PolyhomSymbol::check_entry(int r, int c) const {
  if (r < 0 || c < 0 || r >= k_ || c >= k_) throw std::out_of_range("symbol entry out of range");
}

void PolyhomSymbol::add_term(int r, int c, const HomTerm& t) {
  long j = 0;
  if (!constant_integer(order_ - t.degree(), j))
    throw std::invalid_argument("term degree " + t.degree().str() + " is not order - j for integer j (order " +
                                order_.str() + ")");
  if (j < 0) throw std::invalid_argument("term degree exceeds symbol order");
  if (static_cast<int>(t.alpha.size()) != n_) throw std::invalid_argument("multi-index has wrong dimension");
  add_key(r, c, static_cast<int>(j), t.alpha, t.ell, t.coef);
}

void PolyhomSymbol::add_key(int r, int c, int j, const Multi& alpha, int ell, const TrigPoly& coef) {
  check_entry(r, c);
  if (j < 0) throw std::invalid_argument("negative component index");
  if (coef.is_zero() || j >= depth_) return;
  if (alpha[n_ - 1] >= 2) {
    Multi base = alpha;
    base[n_ - 1] -= 2;
    add_key(r, c, j, base, ell, coef);
    for (int i = 0; i < n_ - 1; ++i) {
      Multi s = base;
      s[i] += 2;
      add_key(r, c, j, s, ell, -coef);
    }
    return;
  }
  auto& comps = ents_[r * k_ + c];
  auto& comp = comps[j];
  auto [it, fresh] = comp.emplace(TermKey{alpha, ell}, coef);
  if (!fresh) {
    it->second += coef;
    if (it->second.is_zero()) comp.erase(it);
  }
  if (comp.empty()) comps.erase(j);
}

const Comp& PolyhomSymbol::comp(int r, int c, int j) const {
  check_entry(r, c);
  const auto& m = ents_[r * k_ + c];
  auto it = m.find(j);
  return it == m.end() ? kEmptyComp : it->second;
}

ZPoly PolyhomSymbol::mu_of(int j, const Multi& alpha) const {
  return order_ - ZPoly(Num(j + abs_multi(alpha)));
}

HomComponent PolyhomSymbol::component(int r, int c, int j) const {
  HomComponent h{order_ - ZPoly(Num(j)), {}};
  for (const auto& [key, coef] : comp(r, c, j)) h.terms.push_back(HomTerm{coef, key.first, mu_of(j, key.first), key.second});
  return h;
}

std::vector<HomTerm> PolyhomSymbol::terms(int r, int c) const {
  std::vector<HomTerm> out;
  for (const auto& [j, cp] : entry_comps(r, c))
    for (const auto& [key, coef] : cp) out.push_back(HomTerm{coef, key.first, mu_of(j, key.first), key.second});
  return out;
}

bool PolyhomSymbol::is_zero() const {
  for (const auto& e : ents_)
    if (!e.empty()) return false;
  return true;
}

PolyhomSymbol PolyhomSymbol::entry(int r, int c) const {
  check_entry(r, c);
  PolyhomSymbol s(n_, omega_, order_, depth_);
  s.ents_[0] = ents_[r * k_ + c];
  return s;
}

PolyhomSymbol PolyhomSymbol::matrix_trace() const {
  PolyhomSymbol s(n_, omega_, order_, depth_);
  for (int i = 0; i < k_; ++i)
    for (const auto& [j, comp] : entry_comps(i, i))
      for (const auto& [key, coef] : comp) s.add_key(0, 0, j, key.first, key.second, coef);
  return s;
}

PolyhomSymbol PolyhomSymbol::supertrace() const {
  if (!grading_) throw std::invalid_argument("supertrace needs a grading");
  PolyhomSymbol s(n_, omega_, order_, depth_);
  for (int i = 0; i < k_; ++i)
    for (const auto& [j, comp] : entry_comps(i, i))
      for (const auto& [key, coef] : comp)
        s.add_key(0, 0, j, key.first, key.second, (*grading_)[i] > 0 ? coef : -coef);
  return s;
}

PolyhomSymbol PolyhomSymbol::truncated(int depth) const {
  PolyhomSymbol s = *this;
  s.depth_ = std::min(depth_, depth);
  if (s.depth_ < 1) throw std::invalid_argument("truncation depth must be >= 1");
  for (auto& e : s.ents_) e.erase(e.lower_bound(s.depth_), e.end());
  return s;
}

PolyhomSymbol PolyhomSymbol::reordered(const ZPoly& new_order) const {
  long shift = 0;
  if (!constant_integer(new_order - order_, shift) || shift < 0)
    throw std::invalid_argument("cannot reorder symbol of order " + order_.str() + " to " + new_order.str());
  int depth = exact_depth() ? kExactDepth : depth_ + static_cast<int>(shift);
  PolyhomSymbol s(n_, omega_, new_order, depth, k_);
  s.grading_ = grading_;
  for (int e = 0; e < k_ * k_; ++e)
    for (const auto& [j, comp] : ents_[e]) s.ents_[e][j + static_cast<int>(shift)] = comp;
  return s;
}

PolyhomSymbol PolyhomSymbol::dz() const {
  PolyhomSymbol s(n_, omega_, order_, depth_, k_);
  s.grading_ = grading_;
  ZPoly dmu = order_.derivative();
  for (int r = 0; r < k_; ++r)
    for (int c = 0; c < k_; ++c)
      for (const auto& [j, comp] : entry_comps(r, c))
        for (const auto& [key, coef] : comp) {
          s.add_key(r, c, j, key.first, key.second, coef.dz());
          if (!dmu.is_zero()) s.add_key(r, c, j, key.first, key.second + 1, coef * dmu);
        }
  return s;
}

PolyhomSymbol PolyhomSymbol::at(const Num& z) const {
  PolyhomSymbol s(n_, omega_, ZPoly(order_.eval(z)), depth_, k_);
  s.grading_ = grading_;
  for (int r = 0; r < k_; ++r)
    for (int c = 0; c < k_; ++c)
      for (const auto& [j, comp] : entry_comps(r, c))
        for (const auto& [key, coef] : comp) s.add_key(r, c, j, key.first, key.second, coef.at(z));
  return s;
}

PolyhomSymbol PolyhomSymbol::scaled(const ZPoly& f) const {
  PolyhomSymbol s(n_, omega_, order_, depth_, k_);
  s.grading_ = grading_;
  for (int r = 0; r < k_; ++r)
    for (int c = 0; c < k_; ++c)
      for (const auto& [j, comp] : entry_comps(r, c))
        for (const auto& [key, coef] : comp) s.add_key(r, c, j, key.first, key.second, coef * f);
  return s;
}

PolyhomSymbol PolyhomSymbol::mul_coef(const TrigPoly& f) const {
  PolyhomSymbol s(n_, omega_, order_, depth_, k_);
  s.grading_ = grading_;
  for (int r = 0; r < k_; ++r)
    for (int c = 0; c < k_; ++c)
      for (const auto& [j, comp] : entry_comps(r, c))
        for (const auto& [key, coef] : comp) s.add_key(r, c, j, key.first, key.second, coef * f);
  return s;
}

bool PolyhomSymbol::is_differential() const {
  for (const auto& e : ents_)
    for (const auto& [j, comp] : e)
      for (const auto& [key, coef] : comp) {
        long m = 0;
        if (key.second != 0 || !constant_integer(mu_of(j, key.first), m) || m < 0 || m % 2 != 0) return false;
      }
  return true;
}

cplx PolyhomSymbol::eval(int r, int c, const std::vector<double>& x, const std::vector<double>& xi, cplx z) const {
  cplx s = 0;
  for (const auto& t : terms(r, c)) s += t.eval(x, xi, z);
  return s;
}

PolyhomSymbol PolyhomSymbol::operator-() const { return scaled(ZPoly(-1)); }

PolyhomSymbol operator+(const PolyhomSymbol& a, const PolyhomSymbol& b) {
  if (a.n_ != b.n_ || a.omega_ != b.omega_) throw std::invalid_argument("symbol geometry mismatch");
  if (a.k_ != b.k_) throw std::invalid_argument("symbol matrix size mismatch");
  long shift = 0;
  if (!constant_integer(a.order_ - b.order_, shift))
    throw std::invalid_argument("orders " + a.order_.str() + " and " + b.order_.str() + " differ by a non-integer");
  PolyhomSymbol x = shift >= 0 ? a : a.reordered(b.order_);
  PolyhomSymbol y = shift >= 0 ? b.reordered(a.order_) : b;
  int depth = std::min(x.depth_, y.depth_);
  PolyhomSymbol s(x.n_, x.omega_, x.order_, depth, x.k_);
  s.grading_ = a.grading_ ? a.grading_ : b.grading_;
  for (const auto* src : {&x, &y})
    for (int r = 0; r < s.k_; ++r)
      for (int c = 0; c < s.k_; ++c)
        for (const auto& [j, comp] : src->entry_comps(r, c))
          for (const auto& [key, coef] : comp) s.add_key(r, c, j, key.first, key.second, coef);
  return s;
}

bool equivalent(const PolyhomSymbol& a, const PolyhomSymbol& b) {
  if (a.n_ != b.n_ || a.k_ != b.k_ || a.order_ != b.order_) return false;
  int depth = std::min(a.depth_, b.depth_);
  for (int e = 0; e < a.k_ * a.k_; ++e) {
    auto diff = [&](const std::map<int, Comp>& p, const std::map<int, Comp>& q) {
      for (const auto& [j, comp] : p) {
        if (j >= depth) break;
        auto it = q.find(j);
        if (it == q.end()) return true;
        if (comp.size() != it->second.size()) return true;
        for (const auto& [key, coef] : comp) {
          auto jt = it->second.find(key);
          if (jt == it->second.end() || jt->second != coef) return true;
        }
      }
      return false;
    };
    if (diff(a.ents_[e], b.ents_[e]) || diff(b.ents_[e], a.ents_[e])) return false;
  }
  return true;
}

std::string PolyhomSymbol::str() const {
  std::ostringstream os;
  os << "order " << order_.str() << ", depth " << (exact_depth() ? std::string("exact") : std::to_string(depth_));
  for (int r = 0; r < k_; ++r)
    for (int c = 0; c < k_; ++c)
      for (const auto& [j, comp] : entry_comps(r, c))
        for (const auto& [key, coef] : comp) {
          os << "\n  [" << r << "," << c << "] j=" << j << " (" << coef.str() << ") xi^(";
          for (int i = 0; i < n_; ++i) os << (i ? "," : "") << key.first[i];
          os << ") |xi|^(" << mu_of(j, key.first).str() << ")";
          if (key.second) os << " log^" << key.second;
        }
  return os.str();
}

PolyhomSymbol star_product(const PolyhomSymbol& a, const PolyhomSymbol& b, int depth) {
  if (depth < 1) throw std::invalid_argument("star_product truncation depth must be >= 1");
  if (a.dim() != b.dim() || a.omega() != b.omega()) throw std::invalid_argument("star_product geometry mismatch");
  if (a.size() != b.size()) throw std::invalid_argument("star_product matrix size mismatch");
  int n = a.dim(), k = a.size();
  int N = std::min({depth, a.depth(), b.depth()});
  PolyhomSymbol out(n, a.omega(), a.order() + b.order(), N, k);
  if (a.grading()) out.set_grading(*a.grading());

  auto by_size = multis_by_size(n, N - 1);
  Num mi = -Num::i();
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c)
      for (int s = 0; s < k; ++s) {
        const auto& A = a.entry_comps(r, s);
        const auto& B = b.entry_comps(s, c);
        if (A.empty() || B.empty()) continue;
        int jb_min = B.begin()->first;
        for (const auto& [j1, ca] : A) {
          int reach = N - 1 - j1 - jb_min;
          if (reach < 0) break;
          // xi-derivatives of this component, indexed like by_size
          std::map<Multi, Comp> dxi;
          dxi[Multi(n, 0)] = ca;
          for (int g = 1; g <= reach; ++g)
            for (const auto& gam : by_size[g]) {
              int axis = 0;
              while (gam[axis] == 0) ++axis;
              Multi prev = gam;
              prev[axis] -= 1;
              ZPoly deg = a.order() - ZPoly(Num(j1 + g - 1));
              dxi[gam] = comp_dxi(dxi[prev], deg, axis);
            }
          for (const auto& [j2, cb] : B) {
            int m = N - 1 - j1 - j2;
            if (m < 0) break;
            for (int g = 0; g <= m; ++g)
              for (const auto& gam : by_size[g]) {
                const Comp& da = dxi[gam];
                if (da.empty()) continue;
                Comp db = comp_dx(cb, gam);
                if (db.empty()) continue;
                Num f = pow_int(mi, g) / multi_factorial(gam);
                ZPoly fz(f);
                for (const auto& [ka, va] : da)
                  for (const auto& [kb, vb] : db) {
                    Multi al = ka.first;
                    for (int i = 0; i < n; ++i) al[i] += kb.first[i];
                    out.add_key(r, c, j1 + j2 + g, al, ka.second + kb.second, (va * vb) * fz);
                  }
              }
          }
        }
      }
  return out;
}

std::string ExcisionConvention::name() const {
  switch (mode) {
    case Mode::Sharp:
      return inner_override ? "sharp-at-1+inner" : "sharp-at-1";
    case Mode::SharpPure:
      return "sharp-at-1-pure";
    case Mode::Smooth:
      return "smooth";
  }
  return "?";
}

}  // namespace zl
