#include "unimaj/config.hpp"

#include "unimaj/path_engine.hpp"

#include <cmath>
#include <numbers>
#include <fstream>
#include <functional>
#include <sstream>

namespace unimaj::experiment {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Moment: return "moment";
    case ExperimentKind::Ratio: return "ratio";
    case ExperimentKind::Finite: return "finite";
    case ExperimentKind::Identity: return "identity";
    case ExperimentKind::Envelope: return "envelope";
  }
  return "unknown";
}

std::uint64_t SeedPlan::seed(std::size_t replica) const {
  return explicit_seeds.empty() ? base : explicit_seeds.at(replica);
}

std::uint64_t SeedPlan::stream(std::size_t replica, std::uint64_t offset) const {
  return (explicit_seeds.empty() ? replica : 0) + offset;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
    const unsigned long long v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a nonnegative integer, got '" + text + "'");
  }
}

std::vector<double> parse_grid(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split_list(text)) out.push_back(parse_real(key, item));
  if (out.empty()) throw ConfigError(key, "empty grid");
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i] > out[i - 1])) throw ConfigError(key, "grid must be strictly increasing");
  }
  return out;
}

}  // namespace

double parse_real(const std::string& key, const std::string& text) {
  try {
    if (text == "e") return std::numbers::e;
    if (text.rfind("e^", 0) == 0) return std::exp(path::parse_double(text.substr(2)));
    return path::parse_double(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError(key, "expected a real number, got '" + text + "'");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::optional<double> kappa;
  bool n_rep_set = false;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto real_into = [](double& slot) {
    return Setter([&slot](const std::string& k, const std::string& v) { slot = parse_real(k, v); });
  };
  auto size_into = [](std::size_t& slot) {
    return Setter([&slot](const std::string& k, const std::string& v) {
      slot = static_cast<std::size_t>(parse_uint(k, v));
    });
  };

  const std::map<std::string, Setter> setters = {
      {"experiment",
       [&](const std::string& k, const std::string& v) {
         if (v == "moment") cfg.kind = ExperimentKind::Moment;
         else if (v == "ratio") cfg.kind = ExperimentKind::Ratio;
         else if (v == "finite") cfg.kind = ExperimentKind::Finite;
         else if (v == "identity") cfg.kind = ExperimentKind::Identity;
         else if (v == "envelope") cfg.kind = ExperimentKind::Envelope;
         else throw ConfigError(k, "unknown experiment '" + v + "'");
       }},
      {"psi.kind",
       [&](const std::string& k, const std::string& v) {
         try {
           cfg.psi.kind = energy::parse_psi_kind(v);
         } catch (const std::invalid_argument& ex) {
           throw ConfigError(k, ex.what());
         }
       }},
      {"psi.kappa", [&](const std::string& k, const std::string& v) { kappa = parse_real(k, v); }},
      {"psi.alpha", real_into(cfg.psi.alpha)},
      {"r", real_into(cfg.r)},
      {"seed",
       [&](const std::string& k, const std::string& v) { cfg.seeds.base = parse_uint(k, v); }},
      {"seeds",
       [&](const std::string& k, const std::string& v) {
         cfg.seeds.explicit_seeds.clear();
         for (const std::string& item : split_list(v)) {
           cfg.seeds.explicit_seeds.push_back(parse_uint(k, item));
         }
         if (cfg.seeds.explicit_seeds.empty()) throw ConfigError(k, "empty seed list");
       }},
      {"n_rep",
       [&](const std::string& k, const std::string& v) {
         cfg.seeds.count = static_cast<std::size_t>(parse_uint(k, v));
         n_rep_set = true;
       }},
      {"b_grid", [&](const std::string& k, const std::string& v) { cfg.b_grid = parse_grid(k, v); }},
      {"T_grid", [&](const std::string& k, const std::string& v) { cfg.T_grid = parse_grid(k, v); }},
      {"threads",
       [&](const std::string& k, const std::string& v) {
         cfg.threads = static_cast<unsigned>(parse_uint(k, v));
       }},
      {"identity.n_steps", size_into(cfg.identity_steps)},
      {"identity.horizon", real_into(cfg.identity_horizon)},
      {"identity.b0", real_into(cfg.identity_b0)},
      {"identity.b", real_into(cfg.identity_b)},
      {"hirsch.r", real_into(cfg.hirsch_r)},
      {"optimality.paths", size_into(cfg.optimality_paths)},
      {"optimality.points", size_into(cfg.optimality_points)},
      {"optimality.competitors", size_into(cfg.optimality_competitors)},
      {"optimality.dp_levels", size_into(cfg.dp_levels)},
      {"optimality.horizon", real_into(cfg.optimality_horizon)},
      {"optimality.r", real_into(cfg.optimality_r)},
      {"envelope.g_family",
       [&](const std::string& k, const std::string& v) {
         if (v != "power_of_log" && v != "PowerOfLog") {
           throw ConfigError(k, "only power_of_log is supported");
         }
         if (!cfg.envelope) cfg.envelope = EnvelopeFamily{};
       }},
      {"envelope.xi",
       [&](const std::string& k, const std::string& v) {
         if (!cfg.envelope) cfg.envelope = EnvelopeFamily{};
         cfg.envelope->xi = parse_real(k, v);
       }},
      {"rho.xi",
       [&](const std::string& k, const std::string& v) {
         cfg.rho = RhoFamily{parse_real(k, v)};
       }},
      {"envelope.steps_per_unit", real_into(cfg.steps_per_unit)},
      {"tau.a_grid",
       [&](const std::string& k, const std::string& v) { cfg.tau_a_grid = parse_grid(k, v); }},
      {"tau.delta", real_into(cfg.tau_delta)},
      {"tau.truncation", real_into(cfg.tau_truncation)},
  };

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(key, "unknown key");
    if (value.empty()) throw ConfigError(key, "missing value");
    it->second(key, value);
  }

  if (kappa) cfg.psi.kappa = *kappa;
  if (cfg.psi.kind == energy::PsiKind::PowerLog) {
    if (kappa && *kappa != 2.0) throw ConfigError("psi.kappa", "powerlog requires kappa = 2");
    cfg.psi.kappa = 2.0;
  }
  try {
    cfg.psi.check();
  } catch (const std::domain_error& ex) {
    throw ConfigError("psi.kappa", ex.what());
  }
  if (!cfg.seeds.explicit_seeds.empty() && n_rep_set &&
      cfg.seeds.count != cfg.seeds.explicit_seeds.size()) {
    throw ConfigError("n_rep", "disagrees with the length of the seeds list");
  }
  if (cfg.seeds.size() == 0) throw ConfigError("n_rep", "must be >= 1");
  if (!(cfg.r > 0.0)) throw ConfigError("r", "must be > 0");

  switch (cfg.kind) {
    case ExperimentKind::Moment:
    case ExperimentKind::Ratio:
    case ExperimentKind::Finite:
      if (cfg.b_grid.empty()) throw ConfigError("b_grid", "required for this experiment");
      if (cfg.b_grid.front() < 1.0) throw ConfigError("b_grid", "values must be >= 1");
      break;
    case ExperimentKind::Identity:
      if (cfg.identity_steps < 1) throw ConfigError("identity.n_steps", "must be >= 1");
      if (!(cfg.identity_b >= cfg.identity_b0) || cfg.identity_b0 < 1.0) {
        throw ConfigError("identity.b", "need identity.b >= identity.b0 >= 1");
      }
      if (cfg.optimality_points < 2 || cfg.optimality_points > 300) {
        throw ConfigError("optimality.points", "must be in [2, 300]");
      }
      if (cfg.dp_levels < 16) throw ConfigError("optimality.dp_levels", "must be >= 16");
      break;
    case ExperimentKind::Envelope:
      if (!cfg.envelope) throw ConfigError("envelope.xi", "envelope family required");
      if (cfg.T_grid.empty()) throw ConfigError("T_grid", "required for the envelope study");
      if (cfg.T_grid.front() <= std::exp(1.0)) {
        throw ConfigError("T_grid", "values must exceed e so that log log T > 0");
      }
      if (!(cfg.steps_per_unit > 0.0)) {
        throw ConfigError("envelope.steps_per_unit", "must be > 0");
      }
      if (!cfg.tau_a_grid.empty() && cfg.tau_a_grid.front() <= std::exp(1.0)) {
        throw ConfigError("tau.a_grid", "values must exceed e");
      }
      break;
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("--config", "cannot open '" + file + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  using path::format_double;
  auto grid = [](const std::vector<double>& g) {
    std::string out;
    for (std::size_t i = 0; i < g.size(); ++i) out += (i ? "," : "") + format_double(g[i]);
    return out;
  };
  std::map<std::string, std::string> e = {
      {"experiment", to_string(kind)},
      {"psi.kind", energy::to_string(psi.kind)},
      {"psi.kappa", format_double(psi.kappa)},
      {"psi.alpha", format_double(psi.alpha)},
      {"r", format_double(r)},
      {"n_rep", std::to_string(seeds.size())},
      {"threads", std::to_string(threads)},
  };
  if (seeds.explicit_seeds.empty()) {
    e["seed"] = std::to_string(seeds.base);
  } else {
    std::string list;
    for (std::size_t i = 0; i < seeds.explicit_seeds.size(); ++i) {
      list += (i ? "," : "") + std::to_string(seeds.explicit_seeds[i]);
    }
    e["seeds"] = list;
  }
  if (!b_grid.empty()) e["b_grid"] = grid(b_grid);
  if (!T_grid.empty()) e["T_grid"] = grid(T_grid);
  if (kind == ExperimentKind::Identity) {
    e["identity.n_steps"] = std::to_string(identity_steps);
    e["identity.horizon"] = format_double(identity_horizon);
    e["identity.b0"] = format_double(identity_b0);
    e["identity.b"] = format_double(identity_b);
    e["hirsch.r"] = format_double(hirsch_r);
    e["optimality.paths"] = std::to_string(optimality_paths);
    e["optimality.points"] = std::to_string(optimality_points);
    e["optimality.competitors"] = std::to_string(optimality_competitors);
    e["optimality.dp_levels"] = std::to_string(dp_levels);
    e["optimality.horizon"] = format_double(optimality_horizon);
    e["optimality.r"] = format_double(optimality_r);
  }
  if (kind == ExperimentKind::Envelope) {
    if (envelope) {
      e["envelope.g_family"] = "power_of_log";
      e["envelope.xi"] = format_double(envelope->xi);
    }
    if (rho) e["rho.xi"] = format_double(rho->xi);
    e["envelope.steps_per_unit"] = format_double(steps_per_unit);
    if (!tau_a_grid.empty()) e["tau.a_grid"] = grid(tau_a_grid);
    e["tau.delta"] = format_double(tau_delta);
    e["tau.truncation"] = format_double(tau_truncation);
  }
  return e;
}

}  // namespace unimaj::experiment
