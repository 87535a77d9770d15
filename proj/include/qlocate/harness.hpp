#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlocate/encoders.hpp"
#include "qlocate/optimizers.hpp"

namespace qlocate {

/// Flat key-value settings; keys inside a `[section]` are stored as `section.key`.
class Config {
 public:
  static Config from_text(const std::string& text);
  static Config from_file(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
  std::uint64_t seed() const;

 private:
  std::map<std::string, std::string> values_;
};

/// RFC-4180 table.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
  static CsvTable parse(const std::string& text);
  /// Column index; throws ConfigError when absent.
  size_t column(const std::string& name) const;
};

/// Shortest text that reads back to the same double.
std::string format_number(double v);

/// Every algorithm the harness runs, with its CSV header.
const std::vector<std::pair<std::string, std::vector<std::string>>>& csv_schemas();
const std::vector<std::string>& csv_schema(const std::string& algorithm);

/// `[problem]` block: either `preset = A`..`J` or geometry keys plus `encoding`.
EncodedProblem encoded_problem_from_config(const Config& config);
FacilityProblem facility_problem_from_config(const Config& config, std::optional<double> default_ratio = std::nullopt);
/// `[optimizer]` block; `name` is nelder-mead, spsa or bfgs.
OptimizerConfig optimizer_from_config(const Config& config);

struct ExperimentOutput {
  CsvTable table;
  std::string manifest;  ///< JSON
};

/// Runs encode, oracle, qaoa, vqe, sa, tabu, anneal-sweep, anneal-sim or tts.
ExperimentOutput run_experiment(const std::string& algorithm, const Config& config);

/// Mean, 2 SD-of-mean error bars, range and best run for every numeric column.
CsvTable summarize(const CsvTable& table);

std::string version_string();

}  // namespace qlocate
