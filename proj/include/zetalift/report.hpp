#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zetalift/covering.hpp"

namespace zl::report {

// Unparseable or inconsistent configuration (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WeightSpec {
  std::vector<std::string> blocks;  // symbol texts or operator names
  std::optional<std::vector<int>> grading;
};

struct FamilySpec {
  std::string P = "1";
  HFunctionSpec h;
  std::string weight;
};

struct ModelSpec {
  oracle::ModelSpectrum model;
  oracle::SpectralPatch patch;        // base side
  oracle::SpectralPatch cover_patch;  // Gamma side
};

struct TaskSpec {
  std::string id;
  std::string kind;
  nlohmann::json args;  // every key of the task table
};

struct RunConfig {
  std::string name;
  int n = 1;
  double L = 2 * std::numbers::pi;
  std::optional<double> eps;
  Num omega{1};
  int depth = 4;
  double tol = 1e-10;         // symbolic comparisons
  double oracle_tol = 1e-8;   // symbol against oracle
  std::map<std::string, std::string> operators;
  std::map<std::string, WeightSpec> weights;
  std::map<std::string, FamilySpec> families;
  std::map<std::string, ModelSpec> models;
  std::vector<TaskSpec> tasks;

  CoveringSpec covering() const { return CoveringSpec(n, L, eps); }
};

// Throws ConfigError.
RunConfig parse_config(const std::string& text, const std::string& name = "config");
RunConfig load_config(const std::filesystem::path& path);

struct Row {
  std::string label;
  cplx lhs, rhs;
  double diff = 0;
  double tol = 0;
  bool pass = false;
};

struct SeriesPoint {
  double z = 0;
  cplx value;
  bool pole = false;
};

struct Record {
  std::string id, kind;
  nlohmann::json inputs;
  std::optional<cplx> value;   // symbol side
  std::optional<std::string> exact;
  std::optional<cplx> oracle;
  std::optional<double> discrepancy;
  std::optional<double> error_bound;
  double tol = 0;
  bool checked = false;
  bool pass = true;
  std::string provenance;  // symbolic, oracle or symbolic+oracle
  std::map<std::string, cplx> values;
  std::vector<Row> rows;
  std::vector<SeriesPoint> series;
  std::string error;
  double time_ms = 0;
};

struct RunReport {
  std::string config;
  std::vector<Record> records;
  int passed() const;
  int failed() const;
  bool ok() const { return failed() == 0; }
};

struct RunOptions {
  std::optional<int> depth;
  std::optional<double> tol;
  int threads = 1;
};

// Tasks run concurrently up to options.threads; records keep declaration order.
RunReport run(const RunConfig& config, const RunOptions& options = {});

nlohmann::json to_json(const RunReport& r, bool timing = true);
RunReport report_from_json(const nlohmann::json& j);
std::string to_text(const RunReport& r);
// Columns z, re, im, pole.
std::string series_csv(const Record& r);

// Writes report.json and <task>.csv files into dir, text to out. Throws
// std::runtime_error on an unwritable path.
void emit(const RunReport& r, const std::vector<std::string>& formats, const std::filesystem::path& dir,
          std::ostream& out);

// ZETALIFT_THREADS, at least 1; hardware concurrency when unset.
int threads_from_env();

}  // namespace zl::report
