#include <doctest.h>

#include "unimaj/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace unimaj;
using namespace unimaj::experiment;

namespace {

std::string slurp(const std::string& file) {
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Assertion& must_find(const ExperimentReport& rep, const std::string& name, double x) {
  const Assertion* a = rep.find(name, x);
  REQUIRE_MESSAGE(a != nullptr, name);
  return *a;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse_config(R"(
# comment line
experiment = ratio
psi.kind = powerlog
psi.alpha = 1   # trailing comment
seed = 7
n_rep = 20
b_grid = e^10, e^20, 1e10
threads = 2
)");
  CHECK(cfg.kind == ExperimentKind::Ratio);
  CHECK(cfg.psi.kind == energy::PsiKind::PowerLog);
  CHECK(cfg.psi.kappa == 2.0);
  CHECK(cfg.psi.alpha == 1.0);
  CHECK(cfg.seeds.base == 7);
  CHECK(cfg.seeds.size() == 20);
  REQUIRE(cfg.b_grid.size() == 3);
  CHECK(cfg.b_grid[0] == std::exp(10.0));
  CHECK(cfg.b_grid[2] == 1e10);
  CHECK(cfg.threads == 2);
  CHECK(cfg.echo().at("psi.kind") == energy::to_string(energy::PsiKind::PowerLog));
  CHECK(parse_real("r", "e") == std::exp(1.0));

  const ExperimentConfig listed = parse_config("experiment = moment\nseeds = 3, 9, 27\nb_grid = 2\n");
  CHECK(listed.seeds.size() == 3);
  CHECK(listed.seeds.seed(1) == 9);
  CHECK(listed.seeds.stream(1) == 0);
  CHECK(parse_config("experiment = moment\nseed = 5\nn_rep = 4\nb_grid = 2\n").seeds.stream(3, 10) == 13);
}

TEST_CASE("config errors name the key") {
  auto key_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of("experiment = moment\nb_grid = 2\nbogus = 1\n") == "bogus");
  CHECK(key_of("experiment = moment\n") == "b_grid");
  CHECK(key_of("experiment = moment\nb_grid = 3, 2\n") == "b_grid");
  CHECK(key_of("experiment = moment\nb_grid = 2\npsi.kind = powerlog\npsi.kappa = 3\n") == "psi.kappa");
  CHECK(key_of("experiment = moment\nb_grid = 2\npsi.kappa = -1\n") == "psi.kappa");
  CHECK(key_of("experiment = moment\nb_grid = 2\nn_rep = x\n") == "n_rep");
  CHECK(key_of("experiment = moment\nb_grid = 2\nr = 0\n") == "r");
  CHECK(key_of("experiment = sideways\nb_grid = 2\n") == "experiment");
  CHECK(key_of("experiment = envelope\nT_grid = 100\n") == "envelope.xi");
  CHECK(key_of("experiment = moment\nb_grid = e^abc\n") == "b_grid");
  CHECK(key_of("experiment = moment\nb_grid = 2\n") == "<none>");
}

TEST_CASE("moment check on a small run") {
  ExperimentConfig cfg = parse_config("experiment = moment\nseed = 3\nn_rep = 2000\nb_grid = 1, e, e^5\n");
  const ExperimentReport rep = run_experiment(cfg);
  CHECK_FALSE(rep.hard_failure());
  CHECK(must_find(rep, "mean_L", std::exp(5.0)).passed);
  CHECK(must_find(rep, "variance_L", 1.0).hard);  // degenerate window is always checked
  CHECK(must_find(rep, "variance_L", 1.0).passed);
  CHECK_FALSE(must_find(rep, "variance_L", std::exp(5.0)).hard);
  CHECK(rep.rows.size() == 3 * 2000);
  CHECK(rep.wall_time_s >= 0.0);
}

TEST_CASE("ratio and finite runners refuse the wrong regime") {
  ExperimentConfig r = parse_config("experiment = ratio\nn_rep = 10\nb_grid = e^5\npsi.kappa = 3\n");
  CHECK_THROWS_AS(run_experiment(r), ConfigError);
  ExperimentConfig f = parse_config("experiment = finite\nn_rep = 10\nb_grid = e^5\npsi.kappa = 2\n");
  CHECK_THROWS_AS(run_experiment(f), ConfigError);
}

TEST_CASE("ratio convergence and finite energy on small runs") {
  const ExperimentReport ratio =
      run_experiment(parse_config("experiment = ratio\nseed = 4\nn_rep = 500\nb_grid = e^10, e^40, e^160\n"));
  CHECK_FALSE(ratio.hard_failure());
  CHECK(must_find(ratio, "sd_ratio_decreasing", std::exp(160.0)).passed);

  const ExperimentReport fin = run_experiment(
      parse_config("experiment = finite\nseed = 4\nn_rep = 4000\npsi.kappa = 3\nb_grid = e^5, e^20, e^40\n"));
  CHECK_FALSE(fin.hard_failure());
  CHECK(fin.scalars.at("m_psi_inf") == doctest::Approx(1.0));
  CHECK(must_find(fin, "pathwise_monotone", std::exp(40.0)).observed == 0.0);
}

TEST_CASE("identity suite on a small run") {
  const ExperimentReport rep = run_experiment(parse_config(R"(
experiment = identity
seed = 8
n_rep = 200
identity.n_steps = 2000
identity.horizon = 100
optimality.paths = 3
optimality.competitors = 50
optimality.dp_levels = 512
optimality.points = 100
)"));
  CHECK_FALSE(rep.hard_failure());
  for (const char* name : {"two_route_L", "hirsch_identity", "minimizer_never_beaten", "dp_oracle_agreement"}) {
    bool seen = false;
    for (const Assertion& a : rep.assertions) seen = seen || a.name == name;
    CHECK_MESSAGE(seen, name);
  }
  CHECK(rep.scalars.count("censored_paths") == 1);
}

TEST_CASE("envelope study is report-only and carries band fractions") {
  const ExperimentReport rep = run_experiment(parse_config(R"(
experiment = envelope
seed = 2
n_rep = 20
psi.kappa = 1.5
T_grid = 100, 1000
envelope.xi = 0.5
rho.xi = 3
tau.a_grid = 10, 100
)"));
  CHECK(rep.report_only);
  CHECK_FALSE(rep.hard_failure());
  CHECK(rep.scalars.count("limsup_band_fraction_at_T_max") == 1);
  CHECK(rep.scalars.count("g_integral_converges") == 1);
  CHECK(rep.find_stat("limsup_stat", 1000.0) != nullptr);
}

TEST_CASE("outputs are identical across thread counts") {
  const std::string base = "experiment = identity\nseed = 13\nn_rep = 40\nidentity.n_steps = 500\n"
                           "optimality.paths = 4\noptimality.competitors = 20\noptimality.dp_levels = 128\n";
  const auto dir = std::filesystem::temp_directory_path() / "unimaj_determinism";
  std::filesystem::create_directories(dir);
  std::string csv[2], json[2];
  for (int k = 0; k < 2; ++k) {
    ExperimentConfig cfg = parse_config(base);
    cfg.threads = k == 0 ? 1 : 4;
    ExperimentReport rep = run_experiment(cfg);
    rep.config.erase("threads");
    const std::string file = (dir / ("rows" + std::to_string(k) + ".csv")).string();
    write_rows_csv(rep, file);
    csv[k] = slurp(file);
    json[k] = summary_json(rep, false);
  }
  CHECK(csv[0] == csv[1]);
  CHECK(json[0] == json[1]);
  CHECK(csv[0].rfind("b_or_T,replica,statistic,value\n", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("summary statistics") {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const SampleStats s = summarize(v);
  CHECK(s.n == 5);
  CHECK(s.mean == 3.0);
  CHECK(s.variance == doctest::Approx(2.5));
  CHECK(s.p50 == 3.0);
  CHECK(quantile(v, 0.25) == 2.0);
  CHECK(s.min == 1.0);
  CHECK(s.max == 5.0);
}
