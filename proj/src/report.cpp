#include "zetalift/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <toml.hpp>

namespace zl::report {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

const std::set<std::string> kTaskKinds = {"res",      "tr",      "zeta",  "kv-check", "ps-check", "lift-check",
                                          "compare", "index",  "eta",   "oracle-crosscheck"};

// ---------------------------------------------------------------- parsing

json toml_to_json(const toml::table& t) {
  std::stringstream ss;
  ss << toml::json_formatter{t};
  return json::parse(ss.str());
}

template <class V>
double real_of(const V& v, double def, const std::string& what) {
  if (!v) return def;
  if (auto d = v.template value<double>()) return *d;
  throw ConfigError(what + " must be a number");
}

template <class V>
int int_of(const V& v, int def, const std::string& what) {
  if (!v) return def;
  if (auto i = v.template value<int64_t>()) return static_cast<int>(*i);
  throw ConfigError(what + " must be an integer");
}

template <class V>
std::string str_of(const V& v, const std::string& def, const std::string& what) {
  if (!v) return def;
  if (auto s = v.template value<std::string>()) return *s;
  throw ConfigError(what + " must be a string");
}

// 0.1 reads as 1/10, not as its binary expansion
Num decimal(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", d);
  return Num::parse(buf);
}

Num num_of_json(const json& v, const std::string& what) {
  try {
    if (v.is_string()) return Num::parse(v.get<std::string>());
    if (v.is_number_integer()) return Num(v.get<long>());
    if (v.is_number()) return decimal(v.get<double>());
  } catch (const std::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
  throw ConfigError(what + " must be a number or a numeric string");
}

template <class V>
Num num_of(const V& v, const std::string& what) {
  if (auto s = v.template value<std::string>()) return num_of_json(json(*s), what);
  if (auto i = v.template value<int64_t>()) return Num(static_cast<long>(*i));
  if (auto d = v.template value<double>()) return decimal(*d);
  throw ConfigError(what + " must be a number or a numeric string");
}

// 2 pi / L, exact when L / (2 pi) is a small rational
Num omega_for_period(double L) {
  double w = 2 * kPi / L;
  for (long q = 1; q <= 64; ++q) {
    double p = std::round(w * q);
    if (p > 0 && std::abs(w * q - p) < 1e-12 * q) return Num(Rat(static_cast<long>(p), q));
  }
  return Num::inexact(w);
}

oracle::SpectralPatch patch_of(const std::string& s, double band, const std::string& what) {
  if (s == "none") return oracle::SpectralPatch::none();
  if (s == "base") return oracle::SpectralPatch::base();
  if (s == "covering") return oracle::SpectralPatch::covering(band);
  throw ConfigError(what + ": unknown patch '" + s + "'");
}

ModelSpec parse_model(const toml::table& t, const RunConfig& c, const std::string& name) {
  std::string what = "models." + name;
  std::string kind = str_of(t["kind"], "torus", what + ".kind");
  ModelSpec m;
  if (kind == "torus") {
    m.model = oracle::ModelSpectrum::torus(int_of(t["n"], c.n, what + ".n"), real_of(t["L"], c.L, what + ".L"),
                                           real_of(t["shift"], 0, what + ".shift"));
    if (auto w = t["weight"].as_array()) {
      m.model.weight.clear();
      for (const auto& e : *w) {
        auto d = e.value<double>();
        if (!d) throw ConfigError(what + ".weight must hold numbers");
        m.model.weight.push_back(*d);
      }
    }
  } else if (kind == "shifted") {
    m.model = oracle::ModelSpectrum::shifted(real_of(t["a"], 0.5, what + ".a"));
  } else if (kind == "fourier") {
    std::vector<std::pair<int, cplx>> V;
    if (auto p = t["potential"].as_array())
      for (const auto& e : *p) {
        auto a = e.as_array();
        if (!a || a->size() != 3) throw ConfigError(what + ".potential entries are [k, re, im]");
        auto k = (*a)[0].value<int64_t>();
        auto re = (*a)[1].value<double>();
        auto im = (*a)[2].value<double>();
        if (!k || !re || !im) throw ConfigError(what + ".potential entries are [k, re, im]");
        V.emplace_back(static_cast<int>(*k), cplx(*re, *im));
      }
    m.model = oracle::ModelSpectrum::fourier(V, int_of(t["cutoff"], 512, what + ".cutoff"));
  } else {
    throw ConfigError(what + ": unknown model kind '" + kind + "'");
  }
  double band = real_of(t["band"], 0.25, what + ".band");
  m.patch = patch_of(str_of(t["patch"], "none", what + ".patch"), band, what);
  m.cover_patch = patch_of(str_of(t["cover_patch"], "none", what + ".cover_patch"), band, what);
  return m;
}

void require_key(const json& args, const std::string& key, const TaskSpec& t) {
  if (!args.contains(key)) throw ConfigError("task '" + t.id + "' needs '" + key + "'");
}

void require_ref(const json& args, const std::string& key, const TaskSpec& t, const std::set<std::string>& names,
                 bool required) {
  if (!args.contains(key)) {
    if (required) throw ConfigError("task '" + t.id + "' needs '" + key + "'");
    return;
  }
  if (!args[key].is_string() || !names.count(args[key].get<std::string>()))
    throw ConfigError("task '" + t.id + "': '" + key + "' does not name a known entry");
}

template <class M>
std::set<std::string> keys(const M& m) {
  std::set<std::string> s;
  for (const auto& [k, v] : m) s.insert(k);
  return s;
}

void validate_task(const RunConfig& c, const TaskSpec& t) {
  const json& a = t.args;
  auto fams = keys(c.families), ws = keys(c.weights), ms = keys(c.models);
  if (t.kind == "res" || t.kind == "tr") require_key(a, "symbol", t);
  if (t.kind == "zeta" || t.kind == "kv-check" || t.kind == "ps-check" || t.kind == "lift-check" ||
      t.kind == "compare" || t.kind == "oracle-crosscheck")
    require_ref(a, "family", t, fams, true);
  if (t.kind == "compare") require_ref(a, "cover_family", t, fams, false);
  if (t.kind == "lift-check" || t.kind == "compare") require_ref(a, "model", t, ms, false);
  if (t.kind == "oracle-crosscheck") require_ref(a, "model", t, ms, true);
  if (t.kind == "index") {
    require_ref(a, "weight", t, ws, true);
    require_ref(a, "plus", t, ms, false);
    require_ref(a, "minus", t, ms, false);
    if (a.contains("plus") != a.contains("minus")) throw ConfigError("task '" + t.id + "' needs both plus and minus");
  }
  if (t.kind == "eta") require_key(a, "a", t);
  for (const char* k : {"at", "expect", "expect_principal", "a"})
    if (a.contains(k)) num_of_json(a[k], "task '" + t.id + "'." + k);
  if (a.contains("z")) {
    if (!a["z"].is_array() || a["z"].size() != 2) throw ConfigError("task '" + t.id + "'.z must be [lo, hi]");
    int steps = a.value("steps", 9);
    if (steps < 2) throw ConfigError("task '" + t.id + "'.steps must be at least 2");
  }
}

PolyhomSymbol symbol_of(const RunConfig& c, const std::string& text) {
  auto it = c.operators.find(text);
  return parse_symbol(it == c.operators.end() ? text : it->second, c.n, c.omega);
}

Weight weight_of(const RunConfig& c, const std::string& name) {
  const WeightSpec& w = c.weights.at(name);
  std::vector<PolyhomSymbol> blocks;
  for (const auto& b : w.blocks) blocks.push_back(symbol_of(c, b));
  PolyhomSymbol s = blocks.size() == 1 ? blocks[0] : PolyhomSymbol::block_diag(blocks);
  if (w.grading) s.set_grading(*w.grading);
  return Weight(s);
}

HoloFamily family_of(const RunConfig& c, const std::string& name, int depth) {
  const FamilySpec& f = c.families.at(name);
  Weight Q = weight_of(c, f.weight);
  PolyhomSymbol P = symbol_of(c, f.P);
  if (P.size() != Q.size()) {
    if (P.size() != 1) throw std::invalid_argument("P and Q shapes differ");
    P = PolyhomSymbol::block_diag(std::vector<PolyhomSymbol>(Q.size(), P));
  }
  return HoloFamily(P, f.h, Q, depth);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& name) {
  toml::table t;
  try {
    t = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ConfigError("parse error at line " + std::to_string(e.source().begin.line) + ": " +
                      std::string(e.description()));
  }
  RunConfig c;
  c.name = name;
  if (auto g = t["geometry"].as_table()) {
    c.n = int_of((*g)["n"], 1, "geometry.n");
    c.L = real_of((*g)["L"], 2 * kPi, "geometry.L");
    if ((*g)["eps"]) c.eps = real_of((*g)["eps"], 0, "geometry.eps");
  }
  if (c.n < 1) throw ConfigError("geometry.n must be positive");
  try {
    c.covering();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("geometry: ") + e.what());
  }
  c.omega = omega_for_period(c.L);
  if (auto s = t["settings"].as_table()) {
    c.depth = int_of((*s)["depth"], c.depth, "settings.depth");
    c.tol = real_of((*s)["tol"], c.tol, "settings.tol");
    c.oracle_tol = real_of((*s)["oracle_tol"], c.oracle_tol, "settings.oracle_tol");
  }
  if (c.depth < 1) throw ConfigError("settings.depth must be positive");

  try {
    if (auto ops = t["operators"].as_table())
      for (const auto& [k, v] : *ops) {
        auto s = v.value<std::string>();
        if (!s) throw ConfigError("operators." + std::string(k.str()) + " must be a string");
        parse_symbol(*s, c.n, c.omega);
        c.operators[std::string(k.str())] = *s;
      }
    if (auto ws = t["weights"].as_table())
      for (const auto& [k, v] : *ws) {
        std::string nm(k.str());
        auto wt = v.as_table();
        if (!wt) throw ConfigError("weights." + nm + " must be a table");
        WeightSpec w;
        if (auto s = (*wt)["symbol"].value<std::string>()) w.blocks.push_back(*s);
        if (auto b = (*wt)["blocks"].as_array())
          for (const auto& e : *b) {
            auto s = e.value<std::string>();
            if (!s) throw ConfigError("weights." + nm + ".blocks must hold strings");
            w.blocks.push_back(*s);
          }
        if (w.blocks.empty()) throw ConfigError("weights." + nm + " needs symbol or blocks");
        if (auto g = (*wt)["grading"].as_array()) {
          std::vector<int> signs;
          for (const auto& e : *g) {
            auto i = e.value<int64_t>();
            if (!i) throw ConfigError("weights." + nm + ".grading must hold integers");
            signs.push_back(static_cast<int>(*i));
          }
          w.grading = signs;
        }
        c.weights[nm] = w;
        weight_of(c, nm);
      }
    if (auto fs = t["families"].as_table())
      for (const auto& [k, v] : *fs) {
        std::string nm(k.str());
        auto ft = v.as_table();
        if (!ft) throw ConfigError("families." + nm + " must be a table");
        FamilySpec f;
        f.P = str_of((*ft)["P"], "1", "families." + nm + ".P");
        f.weight = str_of((*ft)["Q"], "", "families." + nm + ".Q");
        if (!c.weights.count(f.weight)) throw ConfigError("families." + nm + ".Q does not name a weight");
        if ((*ft)["h_power"]) f.h = HFunctionSpec::power(num_of((*ft)["h_power"], "families." + nm + ".h_power"));
        if (auto hp = (*ft)["h_poly"].as_array()) {
          std::vector<Num> co;
          for (const auto& e : *hp) co.push_back(num_of(toml::node_view<const toml::node>(&e), "families." + nm + ".h_poly"));
          f.h = HFunctionSpec::polynomial(co);
        }
        c.families[nm] = f;
        symbol_of(c, f.P);
      }
    if (auto ms = t["models"].as_table())
      for (const auto& [k, v] : *ms) {
        auto mt = v.as_table();
        if (!mt) throw ConfigError("models." + std::string(k.str()) + " must be a table");
        c.models[std::string(k.str())] = parse_model(*mt, c, std::string(k.str()));
      }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  if (auto tasks = t["tasks"].as_array()) {
    int idx = 0;
    std::set<std::string> ids;
    for (const auto& e : *tasks) {
      ++idx;
      auto tt = e.as_table();
      if (!tt) throw ConfigError("tasks entries must be tables");
      TaskSpec ts;
      ts.kind = str_of((*tt)["kind"], "", "tasks.kind");
      if (!kTaskKinds.count(ts.kind)) throw ConfigError("unknown task kind '" + ts.kind + "'");
      ts.id = str_of((*tt)["id"], ts.kind + "-" + std::to_string(idx), "tasks.id");
      if (!ids.insert(ts.id).second) throw ConfigError("duplicate task id '" + ts.id + "'");
      ts.args = toml_to_json(*tt);
      validate_task(c, ts);
      c.tasks.push_back(std::move(ts));
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.stem().string());
}

// ---------------------------------------------------------------- tasks

namespace {

Row make_row(std::string label, cplx lhs, cplx rhs, double tol) {
  Row r{std::move(label), lhs, rhs, std::abs(lhs - rhs), tol, false};
  r.pass = r.diff <= tol;
  return r;
}

struct Ctx {
  const RunConfig& c;
  int depth;
  double tol, otol;
};

Num arg_num(const json& a, const char* key, const Num& def) {
  return a.contains(key) ? num_of_json(a[key], key) : def;
}

void set_value(Record& r, const Num& v) {
  r.value = v.value();
  if (v.exact()) r.exact = v.str();
}

void expect_rows(Record& r, const json& a, const Num& v, double tol, const char* key = "expect",
                 const char* label = "expected") {
  if (a.contains(key)) r.rows.push_back(make_row(label, v.value(), num_of_json(a[key], key).value(), tol));
}

// sum over N points of rho e^{i theta} f(p + rho e^{i theta}) / N
oracle::Estimate contour_residue(const std::function<oracle::Estimate(cplx)>& f, cplx p, double rho = 0.05, int N = 32) {
  oracle::Estimate out{0, 0};
  for (int k = 0; k < N; ++k) {
    cplx u = std::polar(rho, 2 * kPi * (k + 0.5) / N);
    oracle::Estimate e = f(p + u);
    out.value += u * e.value / double(N);
    out.error += rho * e.error / N;
  }
  return out;
}

double h_shift(const HoloFamily& F) {
  const HFunctionSpec& h = F.h();
  if (h.is_one()) return 0;
  if (h.kind == HFunctionSpec::Kind::Power) return h.s.real();
  throw std::invalid_argument("oracle comparison needs h = 1 or a power");
}

std::optional<OracleModel> oracle_model(const Ctx& x, const json& a) {
  if (!a.contains("model")) return std::nullopt;
  const ModelSpec& m = x.c.models.at(a["model"].get<std::string>());
  return OracleModel{m.model, m.patch, m.cover_patch};
}

void run_task(const Ctx& x, const TaskSpec& t, Record& r) {
  const RunConfig& c = x.c;
  const json& a = t.args;
  double tol = a.value("tol", x.tol);
  double otol = a.value("tol", x.otol);
  r.tol = tol;
  r.provenance = "symbolic";
  auto family = [&](const char* key) { return family_of(c, a[key].get<std::string>(), a.value("depth", x.depth)); };

  if (t.kind == "res" || t.kind == "tr") {
    PolyhomSymbol s = symbol_of(c, a["symbol"].get<std::string>());
    Num v = t.kind == "res" ? wres(s) : canonical_trace(s);
    set_value(r, v);
    expect_rows(r, a, v, tol);
    return;
  }
  if (t.kind == "zeta") {
    HoloFamily F = family("family");
    if (a.contains("z")) {
      Rat lo(num_of_json(a["z"][0], "z").re()), hi(num_of_json(a["z"][1], "z").re());
      int steps = a.value("steps", 9);
      Rat step = (hi - lo) / (steps - 1);
      for (int k = 0; k < steps; ++k) {
        Num z(Rat(lo + step * k));
        MeromorphicGerm g = zeta_germ(F, z);
        r.series.push_back({z.real(), g.finite.value(), !g.principal.is_zero()});
      }
    }
    if (a.contains("at") || !a.contains("z")) {
      MeromorphicGerm g = zeta_germ(F, arg_num(a, "at", Num(0)));
      set_value(r, g.finite);
      r.values["principal"] = g.principal.value();
      expect_rows(r, a, g.finite, tol);
      expect_rows(r, a, g.principal, tol, "expect_principal", "expected principal");
    }
    return;
  }
  if (t.kind == "kv-check") {
    HoloFamily F = family("family");
    std::vector<int> js;
    if (a.contains("j")) js.push_back(a["j"].get<int>());
    else
      for (int j = 0; j < F.depth(); ++j) js.push_back(j);
    for (int j : js) {
      KVCheck k = kv_residue_check(F, j, tol);
      r.rows.push_back(make_row("z = " + k.point.str(), k.lhs.value(), k.rhs.value(), tol));
      if (js.size() == 1) {
        set_value(r, k.lhs);
        expect_rows(r, a, k.lhs, tol);
      }
    }
    return;
  }
  if (t.kind == "ps-check") {
    HoloFamily F = family("family");
    std::vector<Num> pts;
    if (a.value("poles", false)) {
      for (int j = 0; j < F.depth(); ++j)
        if (F.at(F.pole(j)).is_differential()) pts.push_back(F.pole(j));
    } else {
      pts.push_back(arg_num(a, "at", Num(0)));
    }
    for (const Num& p : pts) {
      PSCheck k = ps_fp_check(F, p, tol);
      r.rows.push_back(make_row("z = " + p.str(), k.fp.value(), (k.tr_term + k.res_term).value(), tol));
      if (pts.size() == 1) {
        set_value(r, k.fp);
        r.values["tr_term"] = k.tr_term.value();
        r.values["res_term"] = k.res_term.value();
        expect_rows(r, a, k.fp, tol);
      }
    }
    return;
  }
  CoveringSpec cov = c.covering();
  if (t.kind == "lift-check") {
    HoloFamily F = family("family");
    PoleReport rep = lifted_defect_check(F, cov, tol);
    for (const auto& e : rep.poles) {
      r.rows.push_back(make_row("kv z = " + e.kv.point.str(), e.kv.lhs.value(), e.kv.rhs.value(), tol));
      if (e.ps)
        r.rows.push_back(
            make_row("ps z = " + e.ps->point.str(), e.ps->fp.value(), (e.ps->tr_term + e.ps->res_term).value(), tol));
    }
    std::optional<OracleModel> om = oracle_model(x, a);
    LiftedZetaResult z = lifted_zeta_equality(F, cov, om, otol);
    set_value(r, z.cover_fp);
    r.values["base_fp"] = z.base_fp.value();
    if (z.asserted) {
      r.rows.push_back(make_row("zeta(0) base vs Gamma", z.base_fp.value(), z.cover_fp.value(), otol));
    } else {
      r.values["gamma_discrepancy"] = z.discrepancy;
    }
    if (z.base_oracle) {
      r.provenance = "symbolic+oracle";
      r.oracle = *z.cover_oracle;
      r.rows.push_back(make_row("zeta(0) base vs oracle", z.base_fp.value(), *z.base_oracle, otol));
      r.rows.push_back(make_row("zeta(0) Gamma vs oracle", z.cover_fp.value(), *z.cover_oracle, otol));
    }
    return;
  }
  if (t.kind == "compare") {
    HoloFamily F = family("family");
    HoloFamily G = a.contains("cover_family") ? family("cover_family") : F;
    std::optional<GaussianPerturbation> pert;
    if (a.contains("perturbation")) {
      const json& p = a["perturbation"];
      pert = GaussianPerturbation{p.value("amplitude", 1.0), p.value("t", 1.0)};
    }
    std::optional<OracleModel> om = oracle_model(x, a);
    ComparisonResult k = comparison_trace(F, CoverFamily{G, pert}, cov, om, otol);
    r.tol = otol;
    r.value = k.difference;
    r.values["base_fp"] = k.base_fp.value();
    r.values["cover_fp"] = k.cover_fp.value();
    r.rows.push_back(make_row("fp difference vs smoothing trace", k.difference, k.smoothing_trace, otol));
    r.rows.push_back(make_row("principal difference", k.principal_difference.value(), 0.0, 1e-10));
    if (k.base_oracle) {
      r.provenance = "symbolic+oracle";
      r.rows.push_back(make_row("base fp vs oracle", k.base_fp.value(), *k.base_oracle, otol));
      r.rows.push_back(make_row("cover fp vs oracle", k.cover_fp.value() + (k.difference - (k.cover_fp - k.base_fp).value()),
                                *k.cover_oracle, otol));
    }
    return;
  }
  if (t.kind == "index") {
    Weight Q = weight_of(c, a["weight"].get<std::string>());
    std::optional<std::pair<oracle::ModelSpectrum, oracle::ModelSpectrum>> graded;
    if (a.contains("plus"))
      graded = std::make_pair(c.models.at(a["plus"].get<std::string>()).model,
                              c.models.at(a["minus"].get<std::string>()).model);
    L2IndexResult k = l2_index(Q, cov, a.value("depth", x.depth), graded, otol);
    set_value(r, k.base);
    r.values["gamma"] = k.gamma.value();
    r.rows.push_back(make_row("Gamma vs base", k.gamma.value(), k.base.value(), tol));
    if (k.oracle) {
      r.provenance = "symbolic+oracle";
      r.oracle = *k.oracle;
      r.rows.push_back(make_row("heat supertrace vs base", *k.oracle, k.base.value(), otol));
    }
    expect_rows(r, a, k.base, tol);
    return;
  }
  if (t.kind == "eta") {
    Num av = num_of_json(a["a"], "a");
    EtaGammaResult k = eta_gamma(av, cov, a.value("depth", x.depth), otol);
    r.tol = otol;
    r.provenance = "symbolic+oracle";
    set_value(r, k.eta);
    r.oracle = k.oracle;
    r.values["eta_gamma"] = k.eta_gamma.value();
    r.values["difference"] = k.difference.value();
    r.values["smoothing_trace"] = k.smoothing_trace;
    r.rows.push_back(make_row("eta vs Hurwitz", k.eta.value(), k.oracle, otol));
    r.rows.push_back(make_row("eta - eta_Gamma vs smoothing trace", k.difference.value(), k.smoothing_trace, otol));
    Row z = make_row("eta_Gamma exact zero", k.eta_gamma.value(), 0.0, 0.0);
    z.pass = k.eta_gamma.is_zero() && k.eta_gamma.exact();
    r.rows.push_back(z);
    expect_rows(r, a, k.eta, otol);
    return;
  }
  if (t.kind == "oracle-crosscheck") {
    HoloFamily F = family("family");
    const ModelSpec& m = c.models.at(a["model"].get<std::string>());
    double s = h_shift(F);
    auto zeta = [&](cplx z) { return oracle::spectral_zeta(m.model, m.patch, z + s); };
    Num at = arg_num(a, "at", Num(0));
    r.tol = otol;
    r.provenance = "symbolic+oracle";
    MeromorphicGerm g = zeta_germ(F, at);
    // at a pole the circle mean of the oracle is its finite part
    oracle::Estimate o = g.principal.is_zero() ? zeta(at.value())
                                               : contour_residue([&](cplx z) {
                                                   oracle::Estimate e = zeta(z);
                                                   return oracle::Estimate{e.value / (z - at.value()), e.error / 0.05};
                                                 }, at.value());
    set_value(r, g.finite);
    r.oracle = o.value;
    r.error_bound = o.error;
    r.rows.push_back(make_row("fp at z = " + at.str(), g.finite.value(), o.value, otol + o.error));
    if (a.contains("poles"))
      for (const auto& jv : a["poles"]) {
        int j = jv.get<int>();
        Num p = F.pole(j);
        MeromorphicGerm g = zeta_germ(F, p);
        oracle::Estimate o = contour_residue(zeta, p.value());
        r.rows.push_back(make_row("residue at z = " + p.str(), g.principal.value(), o.value, otol + o.error));
      }
    return;
  }
  throw std::logic_error("unhandled task kind " + t.kind);
}

}  // namespace

int RunReport::passed() const {
  int k = 0;
  for (const auto& r : records) k += r.checked && r.pass;
  return k;
}

int RunReport::failed() const {
  int k = 0;
  for (const auto& r : records) k += r.checked && !r.pass;
  return k;
}

RunReport run(const RunConfig& config, const RunOptions& options) {
  Ctx x{config, options.depth.value_or(config.depth), options.tol.value_or(config.tol),
        options.tol ? std::max(*options.tol, config.oracle_tol) : config.oracle_tol};
  RunReport rep;
  rep.config = config.name;
  rep.records.resize(config.tasks.size());
  auto one = [&](size_t i) {
    const TaskSpec& t = config.tasks[i];
    Record& r = rep.records[i];
    r.id = t.id;
    r.kind = t.kind;
    r.inputs = t.args;
    auto t0 = std::chrono::steady_clock::now();
    try {
      run_task(x, t, r);
      if (!r.rows.empty()) {
        r.checked = true;
        r.pass = std::all_of(r.rows.begin(), r.rows.end(), [](const Row& w) { return w.pass; });
        double d = 0;
        for (const auto& w : r.rows) d = std::max(d, w.diff);
        r.discrepancy = d;
      }
    } catch (const std::exception& e) {
      r.error = e.what();
      r.checked = true;
      r.pass = false;
    }
    r.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  size_t T = std::min<size_t>(std::max(1, options.threads), config.tasks.size());
  if (T <= 1) {
    for (size_t i = 0; i < config.tasks.size(); ++i) one(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < T; ++w)
      pool.emplace_back([&] {
        for (size_t i; (i = next++) < config.tasks.size();) one(i);
      });
    for (auto& th : pool) th.join();
  }
  return rep;
}

int threads_from_env() {
  if (const char* v = std::getenv("ZETALIFT_THREADS")) {
    try {
      return std::max(1, std::stoi(v));
    } catch (const std::exception&) {
      return 1;
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------- output

namespace {

json cjson(cplx v) {
  auto f = [](double d) { return std::isfinite(d) ? json(d) : json(nullptr); };
  return json::array({f(v.real()), f(v.imag())});
}

cplx cfrom(const json& j) {
  auto f = [](const json& d) { return d.is_null() ? std::numeric_limits<double>::quiet_NaN() : d.get<double>(); };
  return {f(j.at(0)), f(j.at(1))};
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt(cplx v) {
  if (std::isnan(v.real())) return "nan";
  if (v.imag() == 0) return fmt(v.real());
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.10g%+.10gi", v.real(), v.imag());
  return buf;
}

std::string pad(const std::string& s, size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json to_json(const RunReport& r, bool timing) {
  json tasks = json::array();
  for (const auto& t : r.records) {
    json j;
    j["id"] = t.id;
    j["kind"] = t.kind;
    j["inputs"] = t.inputs;
    j["value"] = t.value ? cjson(*t.value) : json(nullptr);
    j["exact"] = opt(t.exact);
    j["oracle"] = t.oracle ? cjson(*t.oracle) : json(nullptr);
    j["discrepancy"] = opt(t.discrepancy);
    j["error_bound"] = opt(t.error_bound);
    j["tol"] = t.tol;
    j["checked"] = t.checked;
    j["pass"] = t.pass;
    j["provenance"] = t.provenance;
    json vals = json::object();
    for (const auto& [k, v] : t.values) vals[k] = cjson(v);
    j["values"] = vals;
    json rows = json::array();
    for (const auto& w : t.rows)
      rows.push_back({{"label", w.label}, {"lhs", cjson(w.lhs)}, {"rhs", cjson(w.rhs)}, {"diff", w.diff},
                      {"tol", w.tol}, {"pass", w.pass}});
    j["rows"] = rows;
    json series = json::array();
    for (const auto& p : t.series) series.push_back({{"z", p.z}, {"value", cjson(p.value)}, {"pole", p.pole}});
    j["series"] = series;
    j["error"] = t.error;
    if (timing) j["time_ms"] = t.time_ms;
    tasks.push_back(j);
  }
  return {{"config", r.config}, {"summary", {{"passed", r.passed()}, {"failed", r.failed()}}}, {"tasks", tasks}};
}

RunReport report_from_json(const json& j) {
  RunReport r;
  r.config = j.at("config").get<std::string>();
  for (const auto& t : j.at("tasks")) {
    Record x;
    x.id = t.at("id").get<std::string>();
    x.kind = t.at("kind").get<std::string>();
    x.inputs = t.at("inputs");
    if (!t.at("value").is_null()) x.value = cfrom(t["value"]);
    if (!t.at("exact").is_null()) x.exact = t["exact"].get<std::string>();
    if (!t.at("oracle").is_null()) x.oracle = cfrom(t["oracle"]);
    if (!t.at("discrepancy").is_null()) x.discrepancy = t["discrepancy"].get<double>();
    if (!t.at("error_bound").is_null()) x.error_bound = t["error_bound"].get<double>();
    x.tol = t.at("tol").get<double>();
    x.checked = t.at("checked").get<bool>();
    x.pass = t.at("pass").get<bool>();
    x.provenance = t.at("provenance").get<std::string>();
    for (const auto& [k, v] : t.at("values").items()) x.values[k] = cfrom(v);
    for (const auto& w : t.at("rows"))
      x.rows.push_back({w.at("label").get<std::string>(), cfrom(w.at("lhs")), cfrom(w.at("rhs")),
                        w.at("diff").get<double>(), w.at("tol").get<double>(), w.at("pass").get<bool>()});
    for (const auto& p : t.at("series"))
      x.series.push_back({p.at("z").get<double>(), cfrom(p.at("value")), p.at("pole").get<bool>()});
    x.error = t.at("error").get<std::string>();
    x.time_ms = t.value("time_ms", 0.0);
    r.records.push_back(std::move(x));
  }
  return r;
}

std::string to_text(const RunReport& r) {
  std::ostringstream o;
  o << "zetalift report: " << r.config << "\n";
  o << pad("task", 22) << pad("kind", 18) << pad("value", 24) << pad("oracle", 24) << pad("|diff|", 12)
    << pad("tol", 10) << "status\n";
  for (const auto& t : r.records) {
    std::string status = !t.checked ? "-" : t.pass ? "pass" : "FAIL";
    o << pad(t.id, 22) << pad(t.kind, 18) << pad(t.value ? fmt(*t.value) : "-", 24)
      << pad(t.oracle ? fmt(*t.oracle) : "-", 24) << pad(t.discrepancy ? fmt(*t.discrepancy) : "-", 12)
      << pad(fmt(t.tol), 10) << status << "\n";
    for (const auto& w : t.rows)
      o << "    " << pad(w.label, 36) << pad(fmt(w.lhs), 24) << pad(fmt(w.rhs), 24) << pad(fmt(w.diff), 12)
        << pad(fmt(w.tol), 10) << (w.pass ? "pass" : "FAIL") << "\n";
    if (!t.series.empty()) o << "    series: " << t.series.size() << " points\n";
    if (!t.error.empty()) o << "    error: " << t.error << "\n";
  }
  o << r.passed() << " passed / " << r.failed() << " failed\n";
  return o.str();
}

std::string series_csv(const Record& r) {
  std::ostringstream o;
  o << "z,re,im,pole\r\n";
  for (const auto& p : r.series)
    o << csv_field(csv_num(p.z)) << "," << csv_field(csv_num(p.value.real())) << ","
      << csv_field(csv_num(p.value.imag())) << "," << (p.pole ? 1 : 0) << "\r\n";
  return o.str();
}

void emit(const RunReport& r, const std::vector<std::string>& formats, const std::filesystem::path& dir,
          std::ostream& out) {
  auto has = [&](const char* f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };
  for (const auto& f : formats)
    if (f != "json" && f != "csv" && f != "text") throw std::invalid_argument("unknown format '" + f + "'");
  if (has("text")) out << to_text(r);
  if (!has("json") && !has("csv")) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  auto write = [&](const std::filesystem::path& p, const std::string& s) {
    std::ofstream f(p, std::ios::binary);
    if (!f || !(f << s)) throw std::runtime_error("cannot write " + p.string());
  };
  if (has("json")) write(dir / "report.json", to_json(r).dump(2) + "\n");
  if (has("csv"))
    for (const auto& t : r.records)
      if (!t.series.empty()) write(dir / (t.id + ".csv"), series_csv(t));
}

}  // namespace zl::report
