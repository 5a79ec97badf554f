#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "zetalift/report.hpp"

namespace {

std::vector<std::string> split_formats(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string f; std::getline(ss, f, ',');)
    if (!f.empty()) out.push_back(f);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zetalift: zeta-regularised traces on a torus and its lattice cover"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run every task of a TOML config");
  std::string config, out = "out", formats = "json,csv,text";
  std::optional<int> depth;
  std::optional<double> tol;
  run->add_option("config", config, "Config file")->required();
  run->add_option("--out", out, "Output directory")->capture_default_str();
  run->add_option("--format", formats, "Comma-separated subset of json,csv,text")->capture_default_str();
  run->add_option("--depth", depth, "Symbol expansion depth")->check(CLI::PositiveNumber);
  run->add_option("--tol", tol, "Comparison tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    zl::report::RunConfig cfg = zl::report::load_config(config);
    zl::report::RunOptions opt{depth, tol, zl::report::threads_from_env()};
    zl::report::RunReport rep = zl::report::run(cfg, opt);
    zl::report::emit(rep, split_formats(formats), out, std::cout);
    return rep.ok() ? 0 : 1;
  } catch (const zl::report::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
