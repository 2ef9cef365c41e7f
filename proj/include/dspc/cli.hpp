#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dspc/evidence.hpp"
#include "dspc/propagate.hpp"

namespace dspc::cli {

// Invalid problem description; `field` is a JSON path such as
// "variables[1].sources[0][2].mass".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Aggregation { mixing, dempster };

struct VariableSpec {
  std::string name;
  std::vector<DSStructure> sources;
  Aggregation rule = Aggregation::mixing;
  std::vector<double> weights;  // mixing only; equal when empty

  DSStructure aggregate() const;
};

struct CurveQuery {
  double from;
  double to;
  double step;
};

struct ProblemConfig {
  std::string function;
  std::vector<VariableSpec> variables;
  PropagationConfig propagation;
  std::vector<Method> methods{Method::chaos_bernstein};
  std::vector<double> exceedance;
  std::vector<CurveQuery> curves;
};

ProblemConfig parse_config(std::string_view json_text);
ProblemConfig load_config(const std::filesystem::path& path);

// Parses "0.25", "1/3" or "2 / 3"; returns nullopt when malformed.
std::optional<double> parse_mass(std::string_view text);

// Closed grid from..to by step, plus every focal endpoint inside the range.
std::vector<double> curve_abscissae(const CurveQuery& query, const DSStructure& ds);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::string> method;  // a method name or "all"
  std::optional<unsigned> order;
  std::optional<std::size_t> quad_points;
  std::optional<unsigned> subdivisions;
};

struct RunOutput {
  std::string ds_table;  // ds_table.csv
  std::string curves;    // curves.csv
  std::string summary;   // summary.json
};

// Pure part of `run`: propagates with every requested method and renders
// the three output files.
RunOutput render(const ProblemConfig& config);

// Applies option overrides to a parsed config; throws ConfigError.
void apply_overrides(ProblemConfig& config, const RunOptions& options);

/// Exit codes: 0 success, 1 configuration (or output) error, 2 numerical
/// failure. Diagnostics go to `diag`.
int run(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& diag);

}  // namespace dspc::cli
