#pragma once

#include "unimaj/energy_model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace unimaj::experiment {

/// Malformed configuration; `key()` names the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument("config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class ExperimentKind { Moment, Ratio, Finite, Identity, Envelope };

std::string to_string(ExperimentKind kind);

/// Replica seeding: either one base seed with per-replica streams 0..count-1,
/// or an explicit list of seeds (stream 0 each).
struct SeedPlan {
  std::uint64_t base = 1;
  std::size_t count = 1;
  std::vector<std::uint64_t> explicit_seeds;

  std::size_t size() const { return explicit_seeds.empty() ? count : explicit_seeds.size(); }
  std::uint64_t seed(std::size_t replica) const;
  std::uint64_t stream(std::size_t replica, std::uint64_t offset = 0) const;
};

struct EnvelopeFamily {
  double xi = 0.5;  // g(b) = (ln b)^-xi
};

struct RhoFamily {
  double xi = 3.0;  // rho(b) = (ln b)^-xi
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Moment;
  energy::PsiSpec psi;
  double r = 1.0;
  SeedPlan seeds;
  std::vector<double> b_grid;
  std::vector<double> T_grid;
  unsigned threads = 0;  // 0 = hardware concurrency

  // identity suite
  std::size_t identity_steps = 1000;
  double identity_horizon = 50.0;
  double identity_b0 = 1.0;
  double identity_b = 4.0;
  double hirsch_r = 1.0;
  std::size_t optimality_paths = 50;
  std::size_t optimality_points = 200;
  std::size_t optimality_competitors = 500;
  std::size_t dp_levels = 1024;
  double optimality_horizon = 1.0;
  double optimality_r = 0.5;

  // envelope study
  std::optional<EnvelopeFamily> envelope;
  std::optional<RhoFamily> rho;
  double steps_per_unit = 1.0;
  std::vector<double> tau_a_grid;
  double tau_delta = 1.0;
  double tau_truncation = 1e-6;

  /// Resolved key/value echo, including defaults.
  std::map<std::string, std::string> echo() const;
};

/// Parses `key = value` lines; `#` starts a comment. Grid values accept `e^x`.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& file);

/// Parses a real with optional `e^x` form.
double parse_real(const std::string& key, const std::string& text);

}  // namespace unimaj::experiment
