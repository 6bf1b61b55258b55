// unimaj: command-line front end for the unilateral majorant library.
//
// Exit status: 0 success (including report-only experiments), 1 usage or
// domain error, 2 when an experiment records a failed hard assertion.

#include "unimaj/config.hpp"
#include "unimaj/energy_model.hpp"
#include "unimaj/experiment.hpp"
#include "unimaj/groeneboom.hpp"
#include "unimaj/majorant.hpp"
#include "unimaj/numerics.hpp"
#include "unimaj/parallel.hpp"
#include "unimaj/path_engine.hpp"
#include "unimaj/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using unimaj::experiment::write_file_atomic;
using unimaj::path::format_double;

constexpr int kExitUsage = 1;
constexpr int kExitAssertion = 2;

struct PsiFlags {
  std::string kind = "power";
  double kappa = 2.0;
  double alpha = 0.0;

  void add(CLI::App* cmd) {
    cmd->add_option("--psi-kind", kind, "power | powerlog")->capture_default_str();
    cmd->add_option("--kappa", kappa, "regular-variation index (power family)")->capture_default_str();
    cmd->add_option("--alpha", alpha, "log exponent (powerlog family)")->capture_default_str();
  }

  unimaj::energy::PsiSpec resolve() const {
    unimaj::energy::PsiSpec spec;
    spec.kind = unimaj::energy::parse_psi_kind(kind);
    spec.kappa = kappa;  // powerlog rejects anything but 2 in check()
    spec.alpha = alpha;
    spec.check();
    return spec;
  }
};

json psi_json(const unimaj::energy::PsiSpec& spec) {
  return {{"kind", unimaj::energy::to_string(spec.kind)},
          {"kappa", spec.kappa},
          {"alpha", spec.alpha}};
}

json knots_json(const unimaj::majorant::PiecewiseLinearFn& fn) {
  json out = json::array();
  for (const auto& k : fn.knots()) out.push_back({k.t, k.y});
  return out;
}

unimaj::path::SampledPath load_path(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open path file '" + file + "'");
  return unimaj::path::read_csv(in);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_meta(const std::string& out, const json& config) {
  json meta = {{"schema_version", unimaj::experiment::kSchemaVersion}, {"config", config}};
  write_file_atomic(out + ".meta.json", meta.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-minimal unilateral majorants of Brownian paths"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  std::string out;
  unsigned threads = 0;
  auto* seed_opt = app.add_option("--seed", seed, "base seed for counter-based streams");
  app.add_option("--out", out, "output file (or file prefix for `experiment`)");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads (0 = all cores)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "simulate a Wiener path and write t,w CSV");
  std::size_t n_steps = 0;
  double horizon = 1.0;
  std::uint64_t stream = 0;
  std::size_t refine = 0;
  simulate->add_option("--n", n_steps, "number of increments")->required();
  simulate->add_option("--horizon", horizon, "time horizon T")->capture_default_str();
  simulate->add_option("--stream", stream, "stream id under the seed")->capture_default_str();
  simulate->add_option("--refine", refine, "optional Brownian-bridge refinement factor (power of 2)");

  // mcm
  auto* mcm = app.add_subcommand("mcm", "minimal concave majorant of a path CSV");
  std::string path_file;
  mcm->add_option("--path", path_file, "input path CSV (t,w)")->required();

  // minimize
  auto* minimize = app.add_subcommand("minimize", "energy-minimal majorant from height r");
  double r = 1.0;
  PsiFlags psi_flags;
  minimize->add_option("--path", path_file, "input path CSV (t,w)")->required();
  minimize->add_option("--r", r, "starting height r > 0")->required();
  psi_flags.add(minimize);

  // tau-sim
  auto* tau_sim = app.add_subcommand("tau-sim", "simulate tau and L_psi from the Poisson jump measure");
  std::size_t n_rep = 1000;
  double a_max = 1.0;
  double a_min = 0.0;
  double b0 = 1.0;
  double b = 0.0;
  tau_sim->add_option("--n-rep", n_rep, "replicas")->capture_default_str();
  tau_sim->add_option("--a-max", a_max, "upper end of the a range")->capture_default_str();
  tau_sim->add_option("--a-min", a_min, "lower end (default 1e-6 * a-max)");
  tau_sim->add_option("--b0", b0, "L_psi window start (>= 1)")->capture_default_str();
  tau_sim->add_option("--b", b, "L_psi window end (default a-max)");
  psi_flags.add(tau_sim);

  // mu-tail
  auto* mu_tail = app.add_subcommand("mu-tail", "tail mass of the normalized jump measure");
  double level = 1.0;
  mu_tail->add_option("--b0", b0, "window start (>= 1)")->capture_default_str();
  mu_tail->add_option("--b", b, "window end (>= b0)")->required();
  mu_tail->add_option("--level", level, "tail level > 0")->required();
  psi_flags.add(mu_tail);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run a configured Monte Carlo experiment");
  std::string config_file;
  experiment->add_option("--config", config_file, "key = value experiment file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) {
      if (out.empty()) throw std::invalid_argument("--out is required");
      auto path = unimaj::path::simulate_wiener(n_steps, horizon, seed, stream);
      if (refine > 0) path = unimaj::path::refine_bridge(path, refine, seed);
      std::ostringstream csv;
      unimaj::path::write_csv(path, csv);
      write_file_atomic(out, csv.str());
      write_meta(out, {{"subcommand", "simulate"}, {"n", n_steps}, {"horizon", horizon},
                       {"seed", seed}, {"stream", stream}, {"refine", refine}});
      std::cout << "wrote " << path.size() << " samples to " << out << "\n";
      return 0;
    }

    if (*mcm) {
      if (out.empty()) throw std::invalid_argument("--out is required");
      const auto path = load_path(path_file);
      const auto hull = unimaj::majorant::concave_majorant(path);
      json config = {{"subcommand", "mcm"}, {"path", path_file}};
      if (ends_with(out, ".json")) {
        json j = {{"schema_version", unimaj::experiment::kSchemaVersion},
                  {"config", config},
                  {"knots", knots_json(hull)}};
        write_file_atomic(out, j.dump(2) + "\n");
      } else {
        std::ostringstream csv;
        unimaj::majorant::write_csv(hull, csv);
        write_file_atomic(out, csv.str());
        write_meta(out, config);
      }
      std::cout << "wrote " << hull.size() << " hull knots to " << out << "\n";
      return 0;
    }

    if (*minimize) {
      if (out.empty()) throw std::invalid_argument("--out is required");
      const auto spec = psi_flags.resolve();
      const auto path = load_path(path_file);
      const auto chi = unimaj::majorant::unilateral_minimizer(path, r);
      const double e = unimaj::majorant::energy(chi, spec);
      json j = {{"schema_version", unimaj::experiment::kSchemaVersion},
                {"config", {{"subcommand", "minimize"}, {"path", path_file}, {"r", r},
                            {"psi", psi_json(spec)}}},
                {"case", r >= path.max_value() ? "constant" : "tangent"},
                {"path_max", path.max_value()},
                {"knots", knots_json(chi)},
                {"energy", e}};
      write_file_atomic(out, j.dump(2) + "\n");
      std::cout << "energy " << format_double(e) << "\n";
      return 0;
    }

    if (*tau_sim) {
      if (out.empty()) throw std::invalid_argument("--out is required");
      const auto spec = psi_flags.resolve();
      const double lo = a_min > 0.0 ? a_min : 1e-6 * a_max;
      const double hi_b = b > 0.0 ? b : a_max;
      const bool has_window = hi_b > 1.0;
      if (has_window && (b0 < 1.0 || b0 < lo || hi_b < b0 || hi_b > a_max)) {
        throw std::domain_error("tau-sim: need max(1, a-min) <= b0 <= b <= a-max");
      }
      struct Replica {
        std::size_t count;
        double tau;
        double L;
      };
      std::vector<Replica> rows(n_rep);
      unimaj::parallel_for(n_rep, threads, [&](std::size_t i) {
        const auto jumps = unimaj::groeneboom::sample_jumps(lo, a_max, seed, i);
        const double L = has_window ? unimaj::groeneboom::L_psi_jumps(jumps, spec, b0, hi_b) : 0.0;
        rows[i] = {jumps.atoms.size(), unimaj::groeneboom::tau_value(jumps), L};
      });
      std::ostringstream csv;
      csv << "seed,replica,count,tau_value,L_psi\n";
      for (std::size_t i = 0; i < n_rep; ++i) {
        csv << seed << ',' << i << ',' << rows[i].count << ',' << format_double(rows[i].tau) << ','
            << format_double(rows[i].L) << '\n';
      }
      write_file_atomic(out, csv.str());
      write_meta(out, {{"subcommand", "tau-sim"}, {"seed", seed}, {"n_rep", n_rep},
                       {"a_min", lo}, {"a_max", a_max}, {"b0", b0}, {"b", hi_b},
                       {"psi", psi_json(spec)}});
      std::cout << "wrote " << n_rep << " replicas to " << out << "\n";
      return 0;
    }

    if (*mu_tail) {
      const auto spec = psi_flags.resolve();
      const auto tail = unimaj::groeneboom::mu_tail(spec, b0, b, level);
      json j = {{"schema_version", unimaj::experiment::kSchemaVersion},
                {"config", {{"subcommand", "mu-tail"}, {"b0", b0}, {"b", b}, {"level", level},
                            {"psi", psi_json(spec)}}},
                {"mu_tail", tail.value},
                {"achieved_rel_tol", tail.achieved_rel_tol}};
      if (!out.empty()) write_file_atomic(out, j.dump(2) + "\n");
      std::cout << format_double(tail.value) << " (achieved relative tolerance "
                << tail.achieved_rel_tol << ")\n";
      return 0;
    }

    if (*experiment) {
      auto cfg = unimaj::experiment::load_config(config_file);
      if (seed_opt->count() > 0) cfg.seeds.base = seed;
      if (threads_opt->count() > 0) cfg.threads = threads;
      std::string prefix = out;
      if (prefix.empty()) prefix = std::filesystem::path(config_file).stem().string();
      const auto report = unimaj::experiment::run_experiment(cfg);
      unimaj::experiment::write_rows_csv(report, prefix + ".csv");
      write_file_atomic(prefix + ".json", unimaj::experiment::summary_json(report) + "\n");
      for (const auto& a : report.assertions) {
        std::cout << (a.passed ? "PASS " : (a.hard ? "FAIL " : "INFO ")) << a.name
                  << " @ " << format_double(a.x) << ": observed " << format_double(a.observed)
                  << ", expected " << format_double(a.expected) << ", tolerance "
                  << format_double(a.tolerance) << "\n";
      }
      std::cout << "wrote " << prefix << ".csv and " << prefix << ".json\n";
      return report.hard_failure() ? kExitAssertion : 0;
    }
  } catch (const unimaj::experiment::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
