#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace unimaj::path {

/// Wiener trajectory sampled on a uniform grid starting at (0, 0).
/// Immutable once built; the constructor enforces the grid invariants.
class SampledPath {
 public:
  SampledPath(std::vector<double> times, std::vector<double> values, std::uint64_t seed = 0);

  std::span<const double> times() const { return times_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return times_.size(); }
  double horizon() const { return times_.back(); }
  double dt() const { return times_[1] - times_[0]; }
  std::uint64_t seed() const { return seed_; }

  double max_value() const;
  /// The first `count` samples (clamped to [2, size()]).
  SampledPath prefix(std::size_t count) const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  std::uint64_t seed_;
};

/// values[k] = values[k-1] + sqrt(dt) Z_k, Z_k drawn from the counter stream (seed, stream).
SampledPath simulate_wiener(std::size_t n_steps, double horizon, std::uint64_t seed,
                            std::uint64_t stream = 0);

/// Brownian-bridge refinement by a power-of-two factor. Original samples are
/// kept bit for bit; each halving inserts midpoints ~ N(mean of ends, dt/4).
SampledPath refine_bridge(const SampledPath& path, std::size_t factor, std::uint64_t seed);

/// CSV with header `t,w`, 17 significant digits per value.
void write_csv(const SampledPath& path, std::ostream& out);
SampledPath read_csv(std::istream& in, std::uint64_t seed = 0);

std::string format_double(double v);
double parse_double(const std::string& text);

}  // namespace unimaj::path
