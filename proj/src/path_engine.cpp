#include "unimaj/path_engine.hpp"

#include "unimaj/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace unimaj::path {

SampledPath::SampledPath(std::vector<double> times, std::vector<double> values,
                         std::uint64_t seed)
    : times_(std::move(times)), values_(std::move(values)), seed_(seed) {
  if (times_.size() != values_.size()) {
    throw std::invalid_argument("SampledPath: times and values differ in length");
  }
  if (times_.size() < 2) throw std::invalid_argument("SampledPath: need at least 2 samples");
  if (times_[0] != 0.0 || values_[0] != 0.0) {
    throw std::invalid_argument("SampledPath: must start at (0, 0)");
  }
  const double dt = times_[1] - times_[0];
  if (!(dt > 0.0)) throw std::invalid_argument("SampledPath: times must increase");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    const double step = times_[i] - times_[i - 1];
    if (!(step > 0.0) || std::abs(step - dt) > 1e-12 * std::max(1.0, times_[i]) + 1e-9 * dt) {
      throw std::invalid_argument("SampledPath: grid spacing is not uniform");
    }
    if (!std::isfinite(values_[i])) throw std::invalid_argument("SampledPath: non-finite value");
  }
}

double SampledPath::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

SampledPath SampledPath::prefix(std::size_t count) const {
  count = std::clamp<std::size_t>(count, 2, times_.size());
  return SampledPath({times_.begin(), times_.begin() + count},
                     {values_.begin(), values_.begin() + count}, seed_);
}

namespace {

std::vector<double> uniform_times(std::size_t n_steps, double horizon) {
  std::vector<double> times(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    times[k] = horizon * static_cast<double>(k) / static_cast<double>(n_steps);
  }
  return times;
}

}  // namespace

SampledPath simulate_wiener(std::size_t n_steps, double horizon, std::uint64_t seed,
                            std::uint64_t stream) {
  if (n_steps == 0) throw std::domain_error("simulate_wiener: n_steps must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::domain_error("simulate_wiener: horizon must be finite and > 0");
  }
  RandomStream rng(seed, stream);
  const double scale = std::sqrt(horizon / static_cast<double>(n_steps));
  std::vector<double> values(n_steps + 1, 0.0);
  for (std::size_t k = 1; k <= n_steps; ++k) values[k] = values[k - 1] + scale * rng.normal();
  return SampledPath(uniform_times(n_steps, horizon), std::move(values), seed);
}

SampledPath refine_bridge(const SampledPath& path, std::size_t factor, std::uint64_t seed) {
  if (factor < 2 || (factor & (factor - 1)) != 0) {
    throw std::domain_error("refine_bridge: factor must be a power of two >= 2");
  }
  RandomStream rng(seed, 0);
  std::vector<double> times(path.times().begin(), path.times().end());
  std::vector<double> values(path.values().begin(), path.values().end());
  for (std::size_t f = factor; f > 1; f /= 2) {
    const std::size_t n = times.size();
    std::vector<double> t2(2 * n - 1);
    std::vector<double> v2(2 * n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double dt = times[i + 1] - times[i];
      t2[2 * i] = times[i];
      v2[2 * i] = values[i];
      t2[2 * i + 1] = times[i] + 0.5 * dt;
      v2[2 * i + 1] = 0.5 * (values[i] + values[i + 1]) + 0.5 * std::sqrt(dt) * rng.normal();
    }
    t2.back() = times.back();
    v2.back() = values.back();
    times = std::move(t2);
    values = std::move(v2);
  }
  return SampledPath(std::move(times), std::move(values), path.seed());
}

std::string format_double(double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("cannot parse number '" + text + "'");
  }
  return v;
}

void write_csv(const SampledPath& path, std::ostream& out) {
  out << "t,w\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << format_double(path.times()[i]) << ',' << format_double(path.values()[i]) << '\n';
  }
}

SampledPath read_csv(std::istream& in, std::uint64_t seed) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("path csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,w") throw std::invalid_argument("path csv: expected header 't,w'");
  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("path csv: malformed row");
    times.push_back(parse_double(line.substr(0, comma)));
    values.push_back(parse_double(line.substr(comma + 1)));
  }
  return SampledPath(std::move(times), std::move(values), seed);
}

}  // namespace unimaj::path
