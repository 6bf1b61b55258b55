#include "unimaj/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace unimaj::majorant {

PiecewiseLinearFn concave_majorant(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size() || t.size() < 2) {
    throw std::domain_error("concave_majorant: need at least 2 points");
  }
  std::vector<Knot> hull;
  hull.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Knot p{t[i], y[i]};
    while (hull.size() >= 2) {
      const Knot& o = hull[hull.size() - 2];
      const Knot& a = hull.back();
      // a lies on or below the chord o -> p
      const double cross = (a.t - o.t) * (p.y - o.y) - (a.y - o.y) * (p.t - o.t);
      if (cross < 0.0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  return PiecewiseLinearFn(std::move(hull));
}

PiecewiseLinearFn concave_majorant(const path::SampledPath& path) {
  return concave_majorant(path.times(), path.values());
}

PiecewiseLinearFn restricted_majorant(const PiecewiseLinearFn& mcm, double r) {
  const auto knots = mcm.knots();
  const Knot origin = knots.front();
  if (!(r > origin.y)) {
    throw std::domain_error("restricted_majorant: r must exceed the majorant's initial value");
  }
  // The chord from (t0, r) to knot j dominates the hull iff its slope is maximal.
  std::size_t touch = 1;
  double best = (knots[1].y - r) / (knots[1].t - origin.t);
  for (std::size_t j = 2; j < knots.size(); ++j) {
    const double s = (knots[j].y - r) / (knots[j].t - origin.t);
    if (s >= best) {
      best = s;
      touch = j;
    }
  }
  std::vector<Knot> out;
  out.reserve(knots.size() - touch + 1);
  out.push_back({origin.t, r});
  out.insert(out.end(), knots.begin() + static_cast<std::ptrdiff_t>(touch), knots.end());
  return PiecewiseLinearFn(std::move(out));
}

PiecewiseLinearFn unilateral_minimizer(const path::SampledPath& path, double r) {
  if (!(r > 0.0)) throw std::domain_error("unilateral_minimizer: r must be > 0");
  const double peak = path.max_value();
  const double horizon = path.horizon();
  if (r >= peak) return PiecewiseLinearFn({{0.0, r}, {horizon, r}});

  const PiecewiseLinearFn lifted = restricted_majorant(concave_majorant(path), r);
  std::vector<Knot> out;
  for (const Knot& k : lifted.knots()) {
    out.push_back(k);
    if (k.y == peak) break;  // hull knots are sample points, so the first maximum is hit exactly
  }
  if (out.back().t < horizon) out.push_back({horizon, peak});
  return PiecewiseLinearFn(std::move(out));
}

double energy(const PiecewiseLinearFn& h, const energy::PsiSpec& spec) {
  double total = 0.0;
  const auto knots = h.knots();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double len = knots[i + 1].t - knots[i].t;
    total += energy::psi_eval(spec, (knots[i + 1].y - knots[i].y) / len) * len;
  }
  return total;
}

double grid_energy(std::span<const double> heights, double dt, const energy::PsiSpec& spec) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < heights.size(); ++k) {
    total += energy::psi_eval(spec, (heights[k + 1] - heights[k]) / dt) * dt;
  }
  return total;
}

double min_energy(const path::SampledPath& path, double r, const energy::PsiSpec& spec) {
  return energy(unilateral_minimizer(path, r), spec);
}

double slope_crossing_tau(const PiecewiseLinearFn& mcm, double a) {
  if (!(a > 0.0)) throw std::domain_error("slope_crossing_tau: a must be > 0");
  const double threshold = 1.0 / a;
  const auto knots = mcm.knots();
  double tau = knots.front().t;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (mcm.slope(i) >= threshold) tau = knots[i + 1].t;
    else break;
  }
  return tau;
}

double dp_oracle_min_energy(const path::SampledPath& path, double r, const energy::PsiSpec& spec,
                            std::size_t height_levels) {
  if (!(r > 0.0)) throw std::domain_error("dp_oracle_min_energy: r must be > 0");
  if (height_levels < 16) throw std::domain_error("dp_oracle_min_energy: need >= 16 levels");
  constexpr double kWorkBudget = 6e8;
  const auto w = path.values();
  const std::size_t n = w.size();
  const double levels = static_cast<double>(height_levels);
  if (static_cast<double>(n) * levels * levels > kWorkBudget) {
    throw std::length_error("dp_oracle_min_energy: points * levels^2 exceeds the work budget");
  }
  // Heights below r are never needed: h -> max(r, running max of h) stays
  // feasible and shrinks every |increment|, so it cannot raise the energy.
  const double top = path.max_value();
  if (top <= r) return 0.0;
  // level 0 is r; the grid overhangs top by one step.
  const double step = (top - r) / (levels - 2.0);
  const std::ptrdiff_t r_index = 0;
  const double base = r;
  const auto L = static_cast<std::ptrdiff_t>(height_levels);
  auto level = [&](std::ptrdiff_t j) { return base + static_cast<double>(j) * step; };

  const double dt = path.dt();
  std::vector<double> kernel(static_cast<std::size_t>(2 * L - 1));
  for (std::ptrdiff_t d = -(L - 1); d <= L - 1; ++d) {
    kernel[static_cast<std::size_t>(d + L - 1)] =
        energy::psi_eval(spec, static_cast<double>(d) * step / dt) * dt;
  }
  const double* cost = kernel.data() + (L - 1);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(static_cast<std::size_t>(L), kInf);
  std::vector<double> next(static_cast<std::size_t>(L), kInf);
  prev[static_cast<std::size_t>(r_index)] = 0.0;
  std::ptrdiff_t prev_lo = r_index;
  std::ptrdiff_t prev_hi = r_index;

  for (std::size_t k = 1; k < n; ++k) {
    std::ptrdiff_t lo = 0;
    while (lo < L && level(lo) < w[k]) ++lo;
    if (lo == L) throw std::logic_error("dp_oracle_min_energy: level grid below the path");
    std::fill(next.begin(), next.end(), kInf);
    for (std::ptrdiff_t j = lo; j < L; ++j) {
      double best = kInf;
      const double* row = cost + j;
      for (std::ptrdiff_t i = prev_lo; i <= prev_hi; ++i) {
        const double v = prev[static_cast<std::size_t>(i)] + row[-i];
        best = v < best ? v : best;
      }
      next[static_cast<std::size_t>(j)] = best;
    }
    prev.swap(next);
    prev_lo = lo;
    prev_hi = L - 1;
  }
  return *std::min_element(prev.begin(), prev.end());
}

namespace {

std::vector<double> sample_on_grid(const PiecewiseLinearFn& fn, std::span<const double> t) {
  std::vector<double> out(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) out[k] = fn(t[k]);
  return out;
}

// Smooth field vanishing at t = 0: sum_m c_m sin(pi m t / (2T)) with c_m ~ N(0, 1).
std::vector<double> smooth_field(std::span<const double> t, RandomStream& rng) {
  constexpr int kModes = 6;
  double coeff[kModes];
  for (double& c : coeff) c = rng.normal();
  const double horizon = t.back();
  std::vector<double> out(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    double v = 0.0;
    for (int m = 0; m < kModes; ++m) {
      v += coeff[m] * std::sin(std::numbers::pi * (m + 1) * t[k] / (2.0 * horizon)) / (m + 1);
    }
    out[k] = v;
  }
  return out;
}

}  // namespace

std::vector<double> random_feasible_competitor(const path::SampledPath& path, double r,
                                               const PiecewiseLinearFn& chi_star,
                                               RandomStream& rng) {
  const auto t = path.times();
  const auto w = path.values();
  const std::vector<double> base = sample_on_grid(chi_star, t);
  const double range = std::max(path.max_value() - *std::min_element(w.begin(), w.end()), 1e-12);
  const double amplitude = range * std::pow(10.0, -3.0 + 3.0 * rng.uniform());
  std::vector<double> h(base.size());

  const double family = rng.uniform();
  if (family < 0.25) {
    // nonnegative lift: amplitude * (ramp + squared smooth field)
    const std::vector<double> f = smooth_field(t, rng);
    const double ramp = rng.uniform();
    for (std::size_t k = 0; k < h.size(); ++k) {
      h[k] = base[k] + amplitude * (ramp * t[k] / t.back() + f[k] * f[k]);
    }
  } else if (family < 0.5) {
    // signed perturbation, rejected until feasible
    double amp = amplitude;
    for (int attempt = 0;; ++attempt) {
      const std::vector<double> f = smooth_field(t, rng);
      bool feasible = true;
      for (std::size_t k = 0; k < h.size(); ++k) {
        h[k] = base[k] + amp * f[k];
        if (h[k] < w[k]) feasible = false;
      }
      if (feasible) break;
      if (attempt == 64) {
        for (std::size_t k = 0; k < h.size(); ++k) h[k] = base[k] + amp * f[k] * f[k];
        break;
      }
      amp *= 0.7;
    }
  } else if (family < 0.75) {
    // signed perturbation pushed back onto the constraint where it dips below the path
    const std::vector<double> f = smooth_field(t, rng);
    for (std::size_t k = 0; k < h.size(); ++k) h[k] = std::max(base[k] + amplitude * f[k], w[k]);
  } else {
    // concave nondecreasing majorant of randomly lifted samples
    std::vector<double> lifted(w.begin(), w.end());
    for (std::size_t k = 1; k < lifted.size(); ++k) lifted[k] += amplitude * rng.exponential();
    const path::SampledPath lifted_path(std::vector<double>(t.begin(), t.end()), lifted);
    h = sample_on_grid(unilateral_minimizer(lifted_path, r), t);
  }
  h[0] = r;
  return h;
}

}  // namespace unimaj::majorant
