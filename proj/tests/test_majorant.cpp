#include <doctest.h>

#include "oracles.hpp"
#include "unimaj/majorant.hpp"

#include <cmath>
#include <sstream>

using namespace unimaj;
using majorant::Knot;
using majorant::PiecewiseLinearFn;
using energy::PsiSpec;

namespace {

path::SampledPath make_path(std::vector<double> values, double dt = 1.0) {
  std::vector<double> t(values.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = dt * static_cast<double>(i);
  return path::SampledPath(std::move(t), std::move(values));
}

std::vector<Knot> knots_of(const PiecewiseLinearFn& f) { return {f.knots().begin(), f.knots().end()}; }

}  // namespace

TEST_CASE("concave_majorant examples") {
  CHECK(knots_of(majorant::concave_majorant(make_path({0, 1, 0}))) ==
        std::vector<Knot>{{0, 0}, {1, 1}, {2, 0}});
  CHECK(knots_of(majorant::concave_majorant(make_path({0, -1, 0.5}))) ==
        std::vector<Knot>{{0, 0}, {2, 0.5}});
  const double t[] = {0.0};
  const double y[] = {0.0};
  CHECK_THROWS_AS(majorant::concave_majorant(t, y), std::domain_error);
}

TEST_CASE("monotone chain matches the brute-force chord oracle on 200 random paths") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const path::SampledPath p = path::simulate_wiener(99, 1.0, 500 + s);
    const PiecewiseLinearFn hull = majorant::concave_majorant(p);
    const std::vector<double> t(p.times().begin(), p.times().end());
    const std::vector<double> y(p.values().begin(), p.values().end());
    const auto idx = oracle::brute_force_hull(t, y);
    REQUIRE(idx.size() == hull.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      CHECK(hull.knots()[k].t == t[idx[k]]);
      CHECK(hull.knots()[k].y == y[idx[k]]);
    }
  }
}

TEST_CASE("hull majorizes, touches at knots, is concave, and is minimal") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const path::SampledPath p = path::simulate_wiener(300, 2.0, 77, s);
    const PiecewiseLinearFn hull = majorant::concave_majorant(p);
    CHECK(hull.is_concave());
    const auto t = p.times();
    const auto w = p.values();
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(hull(t[i]) >= w[i] - 1e-12);
    for (const Knot& k : hull.knots()) {
      const auto i = static_cast<std::size_t>(std::llround(k.t / p.dt()));
      CHECK(k.y == w[i]);
    }
    // lowering any knot exposes a sample above the hull
    for (std::size_t j = 0; j < hull.size(); ++j) {
      std::vector<Knot> lowered = knots_of(hull);
      lowered[j].y -= 1e-9;
      const PiecewiseLinearFn low(lowered);
      bool violated = false;
      for (std::size_t i = 0; i < p.size() && !violated; ++i) violated = low(t[i]) < w[i];
      CHECK(violated);
    }
  }
}

TEST_CASE("restricted_majorant examples") {
  const PiecewiseLinearFn mcm({{0, 0}, {1, 2}, {2, 1}});
  CHECK(knots_of(majorant::restricted_majorant(mcm, 1.0)) ==
        std::vector<Knot>{{0, 1}, {1, 2}, {2, 1}});
  CHECK(knots_of(majorant::restricted_majorant(PiecewiseLinearFn({{0, 0}, {1, 1}}), 0.5)) ==
        std::vector<Knot>{{0, 0.5}, {1, 1}});
  // above the maximum: one affine piece to the last knot
  const PiecewiseLinearFn high = majorant::restricted_majorant(mcm, 5.0);
  CHECK(knots_of(high) == std::vector<Knot>{{0, 5}, {2, 1}});
  CHECK_THROWS_AS(majorant::restricted_majorant(mcm, 0.0), std::domain_error);
  CHECK_THROWS_AS(majorant::restricted_majorant(mcm, -1.0), std::domain_error);
}

TEST_CASE("restricted_majorant tangent choice agrees with chord enumeration") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const path::SampledPath p = path::simulate_wiener(200, 1.0, 8, s);
    const PiecewiseLinearFn mcm = majorant::concave_majorant(p);
    const double r = 0.05 + 0.5 * static_cast<double>(s % 7) / 7.0;
    const PiecewiseLinearFn lifted = majorant::restricted_majorant(mcm, r);
    CHECK(lifted.is_concave());
    // enumerate: the touching knot is the one whose chord dominates every knot
    const auto k = mcm.knots();
    std::size_t touch = 0;
    for (std::size_t j = 1; j < k.size(); ++j) {
      bool dominates = true;
      for (std::size_t i = 1; i < k.size() && dominates; ++i) {
        dominates = r + (k[j].y - r) / k[j].t * k[i].t >= k[i].y - 1e-12;
      }
      if (dominates) touch = j;  // latest dominating knot
    }
    REQUIRE(touch > 0);
    CHECK(lifted.knots()[1] == k[touch]);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(lifted(p.times()[i]) >= mcm(p.times()[i]) - 1e-12);
  }
}

TEST_CASE("unilateral_minimizer examples") {
  const path::SampledPath p = make_path({0, 2, 1});
  CHECK(knots_of(majorant::unilateral_minimizer(p, 1.0)) ==
        std::vector<Knot>{{0, 1}, {1, 2}, {2, 2}});
  CHECK(majorant::energy(majorant::unilateral_minimizer(p, 1.0), PsiSpec::pure_power(2.0)) ==
        doctest::Approx(1.0));
  CHECK(knots_of(majorant::unilateral_minimizer(p, 2.0)) == std::vector<Knot>{{0, 2}, {2, 2}});
  CHECK(knots_of(majorant::unilateral_minimizer(make_path({0, 3, 1, 2}), 5.0)) ==
        std::vector<Knot>{{0, 5}, {3, 5}});
  CHECK_THROWS_AS(majorant::unilateral_minimizer(p, 0.0), std::domain_error);
  CHECK_THROWS_AS(majorant::unilateral_minimizer(p, -2.0), std::domain_error);
}

TEST_CASE("minimizer shape: nonincreasing nonnegative slopes, feasible, flat after first max") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const path::SampledPath p = path::simulate_wiener(400, 1.0, 31, s);
    const double r = 0.1 + 0.01 * static_cast<double>(s);
    const PiecewiseLinearFn chi = majorant::unilateral_minimizer(p, r);
    CHECK(chi.knots().front() == Knot{0.0, r});
    CHECK(chi.t_last() == p.horizon());
    const auto slopes = chi.slopes();
    for (std::size_t i = 0; i < slopes.size(); ++i) {
      CHECK(slopes[i] >= 0.0);
      if (i > 0) CHECK(slopes[i] <= slopes[i - 1]);
    }
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(chi(p.times()[i]) >= p.values()[i] - 1e-12);
    CHECK(chi.knots().back().y == std::max(r, p.max_value()));
  }
}

TEST_CASE("energy examples") {
  const PiecewiseLinearFn flat({{0, 3}, {5, 3}});
  CHECK(majorant::energy(flat, PsiSpec::pure_power(2.0)) == 0.0);
  CHECK(majorant::energy(flat, PsiSpec::power_log(1.0)) == 0.0);
  CHECK(majorant::energy(PiecewiseLinearFn({{0, 0}, {1, 1}}), PsiSpec::pure_power(2.0)) == 1.0);
  CHECK(majorant::energy(PiecewiseLinearFn({{0, 0}, {1, 1}, {2, 1}}), PsiSpec::pure_power(1.5)) ==
        doctest::Approx(1.0));
}

TEST_CASE("psi = |u|: minimal energy equals max W - r") {
  const PsiSpec abs_psi = PsiSpec::pure_power(1.0);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const path::SampledPath p = path::simulate_wiener(1000, 1.0, 4, s);
    const double r = 0.3;
    const double e = majorant::min_energy(p, r, abs_psi);
    worst = std::max(worst, std::abs(e - std::max(0.0, p.max_value() - r)));
  }
  CHECK(worst < 1e-12);
  CHECK(majorant::min_energy(make_path({0, 2, 1}), 7.0, PsiSpec::pure_power(2.0)) == 0.0);
}

TEST_CASE("minimal energy is nondecreasing in the horizon") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const path::SampledPath p = path::simulate_wiener(2000, 20.0, 64, s);
    for (const PsiSpec& spec : {PsiSpec::pure_power(1.5), PsiSpec::pure_power(2.0)}) {
      double prev = 0.0;
      for (std::size_t len = 2; len <= p.size(); len += 37) {
        const double e = majorant::min_energy(p.prefix(len), 0.5, spec);
        CHECK(e >= prev - 1e-12 * std::max(1.0, prev));
        prev = e;
      }
    }
  }
}

TEST_CASE("Brownian scaling maps minimizer knots and energies") {
  const double c = 3.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const path::SampledPath p = path::simulate_wiener(500, 1.0, 90, s);
    std::vector<double> t2, w2;
    for (std::size_t i = 0; i < p.size(); ++i) {
      t2.push_back(c * c * p.times()[i]);
      w2.push_back(c * p.values()[i]);
    }
    const path::SampledPath q(t2, w2);
    const double r = 0.4;
    const PiecewiseLinearFn a = majorant::unilateral_minimizer(p, r);
    const PiecewiseLinearFn b = majorant::unilateral_minimizer(q, c * r);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(b.knots()[k].t == doctest::Approx(c * c * a.knots()[k].t).epsilon(1e-12));
      CHECK(b.knots()[k].y == doctest::Approx(c * a.knots()[k].y).epsilon(1e-12));
    }
    // psi = u^2: slopes scale by 1/c, lengths by c^2, so energy is invariant
    const PsiSpec sq = PsiSpec::pure_power(2.0);
    CHECK(majorant::energy(b, sq) == doctest::Approx(majorant::energy(a, sq)).epsilon(1e-10));
  }
}

TEST_CASE("slope_crossing_tau examples and monotonicity") {
  const PiecewiseLinearFn mcm({{0, 0}, {1, 2}, {2, 1}});
  CHECK(majorant::slope_crossing_tau(mcm, 1.0) == 1.0);
  CHECK(majorant::slope_crossing_tau(mcm, 0.25) == 0.0);
  CHECK(majorant::slope_crossing_tau(mcm, 0.5) == 1.0);  // slope exactly 2 counts
  CHECK(majorant::slope_crossing_tau(mcm, 1e9) == 1.0);
  CHECK_THROWS_AS(majorant::slope_crossing_tau(mcm, 0.0), std::domain_error);

  for (std::uint64_t s = 0; s < 50; ++s) {
    const PiecewiseLinearFn hull = majorant::concave_majorant(path::simulate_wiener(500, 10.0, 12, s));
    double prev = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double a = std::exp(-3.0 + 0.08 * i);
      const double tau = majorant::slope_crossing_tau(hull, a);
      // direct scan: last knot time reached by a segment of slope >= 1/a
      double scan = 0.0;
      for (std::size_t j = 0; j < hull.segments(); ++j) {
        if (hull.slope(j) >= 1.0 / a) scan = hull.knots()[j + 1].t;
      }
      CHECK(tau == scan);
      CHECK(tau >= prev);
      prev = tau;
    }
  }
}

TEST_CASE("dynamic-program oracle") {
  const path::SampledPath p = make_path({0, 2, 1});
  const PsiSpec sq = PsiSpec::pure_power(2.0);
  CHECK(majorant::dp_oracle_min_energy(p, 1.0, sq, 512) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(majorant::dp_oracle_min_energy(p, 2.0, sq, 16) == 0.0);
  CHECK(majorant::dp_oracle_min_energy(p, 3.5, sq, 64) == 0.0);
  CHECK_THROWS_AS(majorant::dp_oracle_min_energy(p, 1.0, sq, 8), std::domain_error);
  CHECK_THROWS_AS(
      majorant::dp_oracle_min_energy(path::simulate_wiener(2000, 1.0, 1), 0.5, sq, 4096),
      std::length_error);

  // never below the exact minimum (up to level rounding) and converging in levels
  const path::SampledPath q = path::simulate_wiener(60, 1.0, 3);
  const double exact = majorant::min_energy(q, 0.2, sq);
  double prev_gap = INFINITY;
  for (std::size_t levels : {64u, 256u, 1024u}) {
    const double dp = majorant::dp_oracle_min_energy(q, 0.2, sq, levels);
    const double gap = std::abs(dp - exact) / exact;
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.02);
}

TEST_CASE("dp oracle agrees with the minimizer on random 200-point paths") {
  const PsiSpec sq = PsiSpec::pure_power(2.0);
  for (std::uint64_t s = 0; s < 4; ++s) {
    const path::SampledPath p = path::simulate_wiener(199, 1.0, 2718, s);
    const double exact = majorant::min_energy(p, 0.5, sq);
    const double dp = majorant::dp_oracle_min_energy(p, 0.5, sq, 1024);
    if (exact == 0.0) {
      CHECK(dp == 0.0);
    } else {
      CHECK(std::abs(dp - exact) / exact < 0.02);
    }
  }
}

TEST_CASE("random feasible competitors never beat the minimizer") {
  const PsiSpec specs[] = {PsiSpec::pure_power(2.0), PsiSpec::pure_power(1.5), PsiSpec::power_log(1.0)};
  for (std::uint64_t s = 0; s < 20; ++s) {
    const path::SampledPath p = path::simulate_wiener(199, 1.0, 42, s);
    const double r = 0.25;
    const PiecewiseLinearFn chi = majorant::unilateral_minimizer(p, r);
    RandomStream rng(42, 1000 + s);
    for (int c = 0; c < 200; ++c) {
      const std::vector<double> h = majorant::random_feasible_competitor(p, r, chi, rng);
      REQUIRE(h[0] == r);
      for (std::size_t k = 0; k < h.size(); ++k) REQUIRE(h[k] >= p.values()[k]);
      for (const PsiSpec& spec : specs) {
        const double e_star = majorant::energy(chi, spec);
        CHECK(majorant::grid_energy(h, p.dt(), spec) >= e_star * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("knot CSV and JSON round trips") {
  const PiecewiseLinearFn f = majorant::concave_majorant(path::simulate_wiener(100, 1.0, 5));
  std::stringstream csv;
  majorant::write_csv(f, csv);
  CHECK(knots_of(majorant::read_csv(csv)) == knots_of(f));
  CHECK(knots_of(majorant::from_json(majorant::to_json(f))) == knots_of(f));
}

TEST_CASE("PiecewiseLinearFn validation") {
  CHECK_THROWS_AS(PiecewiseLinearFn({{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseLinearFn({{0, 0}, {0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseLinearFn({{1, 0}, {0, 1}}), std::invalid_argument);
  const PiecewiseLinearFn f({{0, 0}, {2, 4}});
  CHECK(f(1.0) == 2.0);
  CHECK(f(-1.0) == 0.0);
  CHECK(f(3.0) == 4.0);
}
