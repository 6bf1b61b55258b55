#include "unimaj/report.hpp"

#include "unimaj/path_engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace unimaj::experiment {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

SampleStats summarize(std::span<const double> values) {
  SampleStats s;
  s.n = values.size();
  if (s.n == 0) return s;
  // two-pass for stability
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.variance = s.n > 1 ? ss / static_cast<double>(s.n - 1) : 0.0;
  s.sd = std::sqrt(s.variance);

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto q = [&](double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  s.min = sorted.front();
  s.max = sorted.back();
  s.p01 = q(0.01);
  s.p05 = q(0.05);
  s.p50 = q(0.50);
  s.p95 = q(0.95);
  s.p99 = q(0.99);
  const double half = 1.959963984540054 * s.sd / std::sqrt(static_cast<double>(s.n));
  s.ci95_low = s.mean - half;
  s.ci95_high = s.mean + half;
  return s;
}

bool ExperimentReport::hard_failure() const {
  return std::any_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.hard && !a.passed; });
}

const Assertion* ExperimentReport::find(const std::string& name, double x) const {
  for (const Assertion& a : assertions) {
    if (a.name == name && a.x == x) return &a;
  }
  return nullptr;
}

const GridStat* ExperimentReport::find_stat(const std::string& statistic, double x) const {
  for (const GridStat& g : grid) {
    if (g.statistic == statistic && g.x == x) return &g;
  }
  return nullptr;
}

void write_file_atomic(const std::string& file, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(file);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

void write_rows_csv(const ExperimentReport& report, const std::string& file) {
  std::ostringstream out;
  out << "b_or_T,replica,statistic,value\n";
  for (const Row& r : report.rows) {
    out << path::format_double(r.x) << ',' << r.replica << ',' << r.statistic << ','
        << path::format_double(r.value) << '\n';
  }
  write_file_atomic(file, out.str());
}

namespace {

// JSON has no representation for inf/nan; emit them as strings.
nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

nlohmann::json stats_json(const SampleStats& s) {
  return {{"n", s.n},          {"mean", num(s.mean)}, {"sd", num(s.sd)},
          {"variance", num(s.variance)}, {"min", num(s.min)},   {"max", num(s.max)},
          {"p01", num(s.p01)}, {"p05", num(s.p05)},   {"p50", num(s.p50)},
          {"p95", num(s.p95)}, {"p99", num(s.p99)},
          {"ci95", {num(s.ci95_low), num(s.ci95_high)}}};
}

}  // namespace

std::string summary_json(const ExperimentReport& report, bool include_timing) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["experiment"] = report.experiment;
  j["config"] = report.config;
  j["report_only"] = report.report_only;
  j["seed_provenance"] = report.seed_provenance;
  if (include_timing) j["wall_time_s"] = report.wall_time_s;

  j["statistics"] = nlohmann::json::array();
  for (const GridStat& g : report.grid) {
    j["statistics"].push_back({{"b_or_T", num(g.x)}, {"statistic", g.statistic},
                               {"summary", stats_json(g.stats)}});
  }
  j["assertions"] = nlohmann::json::array();
  std::size_t failed = 0;
  for (const Assertion& a : report.assertions) {
    if (a.hard && !a.passed) ++failed;
    j["assertions"].push_back({{"name", a.name},
                               {"b_or_T", num(a.x)},
                               {"hard", a.hard},
                               {"pass", a.passed},
                               {"observed", num(a.observed)},
                               {"expected", num(a.expected)},
                               {"tolerance", num(a.tolerance)},
                               {"detail", a.detail}});
  }
  nlohmann::json scalars = nlohmann::json::object();
  for (const auto& [k, v] : report.scalars) scalars[k] = num(v);
  j["scalars"] = scalars;
  j["hard_failures"] = failed;
  return j.dump(2);
}

}  // namespace unimaj::experiment
