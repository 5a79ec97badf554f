#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "zetalift/report.hpp"

using namespace zl;
using namespace zl::report;
namespace fs = std::filesystem;

namespace {

const std::string kBundled = std::string(ZETALIFT_CONFIGS) + "/s1-laplacian.toml";

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("zetalift-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  std::string cmd = std::string(ZETALIFT_BIN) + " " + args + " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

const Record& find(const RunReport& r, const std::string& id) {
  for (const auto& x : r.records)
    if (x.id == id) return x;
  throw std::out_of_range(id);
}

const char* kLap = R"(
[weights.lap]
symbol = "xi^2"
[families.z]
Q = "lap"
)";

}  // namespace

TEST_CASE("config parsing") {
  RunConfig c = load_config(kBundled);
  CHECK(c.name == "s1-laplacian");
  CHECK(c.n == 1);
  CHECK(c.omega == Num(1));
  CHECK(c.depth == 4);
  CHECK(c.tasks.size() == 10);
  CHECK(c.tasks[0].id == "zeta-0");
  CHECK(c.models.at("vplus").model.potential.size() == 5);

  RunConfig d = parse_config("[geometry]\nL = 12.566370614359172\n");
  CHECK(d.omega == Num::rational(1, 2));
  CHECK(d.covering().eps() == doctest::Approx(3.14159265358979));

  RunConfig e = parse_config(std::string(kLap) + "[[tasks]]\nkind = \"zeta\"\nfamily = \"z\"\n[[tasks]]\nkind = \"zeta\"\nfamily = \"z\"\n");
  CHECK(e.tasks[0].id == "zeta-1");
  CHECK(e.tasks[1].id == "zeta-2");

  RunConfig h = parse_config(std::string(kLap) + "[families.w]\nQ = \"lap\"\nh_power = \"3/4\"\n");
  CHECK(h.families.at("w").h.kind == HFunctionSpec::Kind::Power);
  CHECK(h.families.at("w").h.s == Num::rational(3, 4));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("[geometry]\neps = 3.2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[geometry]\neps = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[geometry\n"), ConfigError);
  try {
    parse_config("a = 1\nb = \n");
    FAIL("no throw");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[operators]\nbad = \"foo\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[families.z]\nQ = \"missing\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[[tasks]]\nkind = \"nope\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kLap) + "[[tasks]]\nkind = \"zeta\"\nfamily = \"other\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kLap) + "[[tasks]]\nkind = \"zeta\"\nfamily = \"z\"\nat = \"x\"\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kLap) + "[[tasks]]\nid = \"a\"\nkind = \"tr\"\nsymbol = \"xi\"\n"
                                                   "[[tasks]]\nid = \"a\"\nkind = \"tr\"\nsymbol = \"xi\"\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[models.m]\nkind = \"sphere\"\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), ConfigError);
}

TEST_CASE("bundled config") {
  RunReport r = run(load_config(kBundled));
  CHECK(r.ok());
  CHECK(r.failed() == 0);
  CHECK(r.passed() == 9);

  const Record& z0 = find(r, "zeta-0");
  CHECK(z0.exact == std::optional<std::string>("0"));
  CHECK(z0.provenance == "symbolic");
  CHECK(z0.tol == 1e-10);

  const Record& kv = find(r, "kv-half");
  REQUIRE(kv.value);
  CHECK(*kv.value == cplx(1));
  CHECK(kv.rows.at(0).label == "z = 1/2");

  // 2 zeta_R(2z) has residue 1 at 1/2
  const Record& oc = find(r, "oracle-zeta");
  CHECK(oc.provenance == "symbolic+oracle");
  CHECK(std::abs(oc.rows.at(1).rhs - 1.0) < 1e-10);

  const Record& eta = find(r, "eta-quarter");
  REQUIRE(eta.oracle);
  CHECK(std::abs(*eta.oracle - 0.5) < 1e-12);

  const Record& grid = find(r, "zeta-grid");
  CHECK_FALSE(grid.checked);
  REQUIRE(grid.series.size() == 9);
  CHECK(grid.series[0].z == -0.5);
  CHECK(grid.series[8].z == 1.5);
  for (const auto& p : grid.series) CHECK(p.pole == (p.z == 0.5));

  for (const auto& x : r.records) {
    CHECK(x.tol > 0);
    CHECK_FALSE(x.provenance.empty());
    CHECK(x.time_ms >= 0);
  }
}

TEST_CASE("task failures are recorded") {
  RunConfig c = parse_config(std::string(kLap) +
                             "[[tasks]]\nid = \"wrong\"\nkind = \"zeta\"\nfamily = \"z\"\nexpect = 1\n"
                             "[[tasks]]\nid = \"deep\"\nkind = \"kv-check\"\nfamily = \"z\"\nj = 9\n"
                             "[[tasks]]\nid = \"ok\"\nkind = \"tr\"\nsymbol = \"|xi|^-0.5\"\nexpect = -4\n");
  RunReport r = run(c);
  CHECK(r.failed() == 2);
  CHECK(r.passed() == 1);
  CHECK_FALSE(r.ok());
  CHECK(find(r, "wrong").discrepancy == std::optional<double>(1.0));
  CHECK_FALSE(find(r, "deep").error.empty());
  CHECK(find(r, "ok").pass);
}

TEST_CASE("run options") {
  RunConfig c = parse_config(std::string(kLap) + "[[tasks]]\nkind = \"kv-check\"\nfamily = \"z\"\n");
  CHECK(run(c).records[0].rows.size() == 4);
  CHECK(run(c, RunOptions{2, {}, 1}).records[0].rows.size() == 2);
  CHECK(run(c, RunOptions{{}, 1e-6, 1}).records[0].tol == 1e-6);
}

TEST_CASE("empty task list") {
  RunReport r = run(parse_config(""));
  CHECK(r.records.empty());
  CHECK(r.ok());
  CHECK(to_text(r).find("0 passed / 0 failed") != std::string::npos);
}

TEST_CASE("output formats") {
  RunReport r = run(load_config(kBundled));
  std::string text = to_text(r);
  CHECK(text.find("9 passed / 0 failed") != std::string::npos);
  CHECK(text.find("z = 1/2") != std::string::npos);

  std::string csv = series_csv(find(r, "zeta-grid"));
  CHECK(csv.rfind("z,re,im,pole\r\n", 0) == 0);
  CHECK(csv.find("\r\n0.5,0,0,1\r\n") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);

  // round trip
  nlohmann::json j = to_json(r);
  CHECK(to_json(report_from_json(j)) == j);
  CHECK(to_json(report_from_json(nlohmann::json::parse(j.dump()))) == j);
  CHECK(j["summary"]["passed"] == 9);
  CHECK(j["tasks"][0]["value"].is_array());

  Record nan;
  nan.id = "nan";
  nan.value = cplx(std::nan(""), 1);
  RunReport rn;
  rn.records.push_back(nan);
  nlohmann::json jn = to_json(rn);
  CHECK(jn["tasks"][0]["value"][0].is_null());
  CHECK(std::isnan(report_from_json(jn).records[0].value->real()));

  fs::path dir = scratch("emit");
  std::ostringstream out;
  emit(r, {"json", "csv"}, dir, out);
  CHECK(out.str().empty());
  CHECK(fs::exists(dir / "report.json"));
  CHECK(read_file(dir / "zeta-grid.csv") == csv);
  CHECK_FALSE(fs::exists(dir / "kv-half.csv"));
  CHECK_THROWS_AS(emit(r, {"xml"}, dir, out), std::invalid_argument);
  fs::path file = write_file(dir / "plain", "x");
  CHECK_THROWS_AS(emit(r, {"json"}, file / "sub", out), std::runtime_error);
}

TEST_CASE("determinism") {
  RunConfig c = load_config(kBundled);
  RunReport a = run(c, RunOptions{{}, {}, 1});
  RunReport b = run(c, RunOptions{{}, {}, 4});
  CHECK(to_json(a, false).dump(2) == to_json(b, false).dump(2));
  CHECK(series_csv(find(a, "zeta-grid")) == series_csv(find(b, "zeta-grid")));

  fs::path d1 = scratch("det1"), d2 = scratch("det2");
  REQUIRE(cli("run " + kBundled + " --format json,csv --out " + d1.string()) == 0);
  REQUIRE(cli("run " + kBundled + " --format json,csv --out " + d2.string()) == 0);
  auto strip = [](const fs::path& p) {
    nlohmann::json j = nlohmann::json::parse(read_file(p));
    for (auto& t : j["tasks"]) t.erase("time_ms");
    return j.dump(2);
  };
  CHECK(strip(d1 / "report.json") == strip(d2 / "report.json"));
  CHECK(read_file(d1 / "zeta-grid.csv") == read_file(d2 / "zeta-grid.csv"));
}

TEST_CASE("exit codes") {
  fs::path dir = scratch("exit");
  std::string out = " --out " + (dir / "out").string();
  CHECK(cli("run " + kBundled + out) == 0);
  CHECK(cli("run " + write_file(dir / "empty.toml", "").string() + out) == 0);
  CHECK(cli("run " + write_file(dir / "eps.toml", "[geometry]\nL = 6.283185307179586\neps = 3.2\n").string() + out) ==
        2);
  CHECK(cli("run " + write_file(dir / "bad.toml", "[geometry\n").string() + out) == 2);
  CHECK(cli("run " + write_file(dir / "fail.toml", std::string(kLap) +
                                                        "[[tasks]]\nkind = \"zeta\"\nfamily = \"z\"\nexpect = 1\n")
                         .string() +
            out) == 1);
  CHECK(cli("run " + (dir / "missing.toml").string() + out) == 2);
  CHECK(cli("run " + kBundled + " --format xml" + out) == 2);
  CHECK(cli("run " + kBundled + " --depth 0" + out) == 2);
  CHECK(cli("run " + kBundled + " --out " + write_file(dir / "plain", "x").string() + "/sub") == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("--help") == 0);
}
