#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lambdap/orthosys.hpp"

namespace lambdap::lab {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

enum class Experiment { k_omega, kest_scan, entropy_scan, verify_all, reduce_demo, decouple, selectors };

std::string_view to_string(Experiment e);
/// Accepts the CLI spelling ("k-omega") or the enum spelling ("k_omega").
Experiment parse_experiment(std::string_view name);

/// Invalid configuration; the CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::verify_all;
  std::vector<std::size_t> n;  // empty: experiment default
  std::optional<double> p;     // empty: experiment default
  std::optional<std::size_t> trials;
  std::uint64_t seed = 0;
  SystemKind system = SystemKind::trig;
  std::filesystem::path out = "lab_out";
  std::size_t oversample = 16;  // trig only; < 2 builds an aliased grid
  unsigned threads = 0;
  std::map<std::string, double> knobs;

  double knob(const std::string& key, double fallback) const;
};

/// One table cell.  Doubles print with 17 significant digits.
using Cell = std::variant<std::string, double, long long>;

std::string format_double(double v);

struct Table {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  std::string to_csv() const;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string anchor;
  double value = 0.0;      // the measured quantity
  double threshold = 0.0;  // what it was compared against
};

struct RunRecord {
  ExperimentConfig config;
  std::string artifact_version{kArtifactVersion};
  std::vector<Table> tables;
  std::map<std::string, double> summary;
  std::vector<Check> checks;
  std::vector<std::string> files;  // filled by write_outputs
  std::string started, finished;   // wall-clock, kept out of the record file

  bool passed() const;
  void check(std::string name, bool ok, std::string anchor, double value, double threshold);
  /// Deterministic JSON (no timestamps).
  std::string to_json() const;
};

/// Validates the config for its experiment (throws ConfigError).
void validate(const ExperimentConfig& cfg);

RunRecord run_k_omega(const ExperimentConfig& cfg);
RunRecord run_kest_scan(const ExperimentConfig& cfg);
RunRecord run_entropy_scan(const ExperimentConfig& cfg);
RunRecord run_reduce_demo(const ExperimentConfig& cfg);
RunRecord run_decouple(const ExperimentConfig& cfg);
RunRecord run_selectors(const ExperimentConfig& cfg);
RunRecord run_verify_all(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment, stamping start and end times.
RunRecord run(const ExperimentConfig& cfg);

/// Writes <table>.csv files, run_record.json and run_times.json into
/// cfg.out; fills rec.files.
void write_outputs(RunRecord& rec);

}  // namespace lambdap::lab
