#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace unimaj::experiment {

inline constexpr int kSchemaVersion = 1;

struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator
  double variance = 0.0;
  double min = 0.0;
  double max = 0.0;
  double p01 = 0.0, p05 = 0.0, p50 = 0.0, p95 = 0.0, p99 = 0.0;
  double ci95_low = 0.0, ci95_high = 0.0;  // normal-theory CI of the mean
};

/// Quantiles use linear interpolation between order statistics.
SampleStats summarize(std::span<const double> values);
double quantile(std::vector<double> values, double q);

struct GridStat {
  double x;               // b or T
  std::string statistic;  // e.g. "L", "L_over_m", "limsup_stat"
  SampleStats stats;
};

struct Assertion {
  std::string name;
  double x = 0.0;  // grid point the assertion refers to
  bool hard = true;
  bool passed = true;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Long-format observation: (b_or_T, replica, statistic, value).
struct Row {
  double x;
  std::size_t replica;
  std::string statistic;
  double value;
};

struct ExperimentReport {
  std::string experiment;
  std::map<std::string, std::string> config;
  std::vector<GridStat> grid;
  std::vector<Assertion> assertions;
  std::map<std::string, double> scalars;  // experiment-level summary numbers
  std::vector<Row> rows;
  bool report_only = false;
  double wall_time_s = 0.0;
  std::string seed_provenance;

  bool hard_failure() const;
  const Assertion* find(const std::string& name, double x) const;
  const GridStat* find_stat(const std::string& statistic, double x) const;
};

void write_rows_csv(const ExperimentReport& report, const std::string& file);
/// JSON summary. `include_timing = false` omits wall time so the text is a
/// pure function of the configuration.
std::string summary_json(const ExperimentReport& report, bool include_timing = true);

/// Write to a sibling temporary file, then rename over the target.
void write_file_atomic(const std::string& file, const std::string& contents);

}  // namespace unimaj::experiment
