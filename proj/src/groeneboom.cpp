#include "unimaj/groeneboom.hpp"

#include "unimaj/majorant.hpp"
#include "unimaj/numerics.hpp"
#include "unimaj/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace unimaj::groeneboom {

using numerics::normal_cdf;
using numerics::normal_pdf;
using numerics::normal_sf;

double tau_density(double y) {
  if (!(y > 0.0)) throw std::domain_error("tau_density: y must be > 0");
  const double x = std::sqrt(y);
  return std::max(0.0, 2.0 * (normal_pdf(x) / x - normal_sf(x)));
}

double tau_cdf(double y) {
  if (!(y > 0.0)) return 0.0;
  const double x = std::sqrt(y);
  const double value =
      2.0 * (normal_cdf(x) - 0.5) + 2.0 * x * normal_pdf(x) - 2.0 * y * normal_sf(x);
  return std::clamp(value, 0.0, 1.0);
}

JumpSet sample_jumps(double a_min, double a_max, std::uint64_t seed, std::uint64_t stream) {
  if (!(a_min > 0.0) || !(a_max > a_min) || !std::isfinite(a_max)) {
    throw std::domain_error("sample_jumps: need 0 < a_min < a_max < inf");
  }
  RandomStream rng(seed, stream);
  JumpSet out;
  out.a_min = a_min;
  out.a_max = a_max;
  out.seed = seed;
  out.stream = stream;
  out.atoms.reserve(static_cast<std::size_t>(std::log(a_max / a_min) * 1.5) + 8);
  const double log_max = std::log(a_max);
  double log_a = std::log(a_min);
  for (;;) {
    log_a += rng.exponential();
    if (log_a > log_max) break;
    const double a = std::exp(log_a);
    const double z = rng.half_normal();
    const double root = z * a;
    out.atoms.push_back({a, root * root, z * z});
  }
  return out;
}

double tau_value(const JumpSet& jumps) {
  double total = 0.0;
  for (const Atom& at : jumps.atoms) total += at.l;
  return total;
}

std::vector<double> tau_at(const JumpSet& jumps, const std::vector<double>& a_grid) {
  std::vector<double> out(a_grid.size(), 0.0);
  double running = 0.0;
  std::size_t next = 0;
  for (std::size_t g = 0; g < a_grid.size(); ++g) {
    while (next < jumps.atoms.size() && jumps.atoms[next].a <= a_grid[g]) {
      running += jumps.atoms[next].l;
      ++next;
    }
    out[g] = running;
  }
  return out;
}

double L_psi_jumps(const JumpSet& jumps, const energy::PsiSpec& spec, double b0, double b) {
  if (!(b0 >= 1.0) || !(b >= b0) || b0 < jumps.a_min || b > jumps.a_max) {
    throw std::domain_error("L_psi_jumps: need 1 <= b0 <= b and (b0, b] inside (a_min, a_max]");
  }
  const auto first = std::upper_bound(jumps.atoms.begin(), jumps.atoms.end(), b0,
                                      [](double v, const Atom& at) { return v < at.a; });
  double total = 0.0;
  for (auto it = first; it != jumps.atoms.end() && it->a <= b; ++it) {
    total += it->z2 * energy::scaled_psi(spec, it->a);
  }
  return total;
}

MeanVar L_mean_var(const energy::PsiSpec& spec, double b) {
  return {energy::m_psi(spec, b), energy::var_L(spec, b)};
}

double normalized_atom(const Atom& atom, const energy::PsiSpec& spec, double b) {
  return atom.z2 * energy::scaled_psi(spec, atom.a) / energy::scaled_psi(spec, b);
}

TailMeasure mu_tail(const energy::PsiSpec& spec, double b0, double b, double level) {
  if (!(b0 >= 1.0) || !(b >= b0)) throw std::domain_error("mu_tail: need b >= b0 >= 1");
  if (!(level > 0.0)) throw std::domain_error("mu_tail: level must be > 0");
  spec.check();
  if (b == b0) return {0.0, 0.0};
  const double norm = energy::scaled_psi(spec, b);
  // v = ln s; the z-section {z >= z*(s)} has mass 2 Phibar(z*).
  auto integrand = [&](double v) {
    const double g = energy::scaled_psi(spec, std::exp(v) * b) / norm;
    return 2.0 * normal_sf(std::sqrt(level / g));
  };
  const numerics::Integral res =
      numerics::integrate(integrand, std::log(b0 / b), 0.0, 1e-6, 1e-300);
  const double achieved = res.value > 0.0 ? res.error / res.value : 0.0;
  return {res.value, achieved};
}

PathRoute path_route_L(const majorant::PiecewiseLinearFn& mcm, const energy::PsiSpec& spec,
                       double b0, double b) {
  if (!(b0 >= 1.0) || !(b >= b0)) throw std::domain_error("path_route_L: need b >= b0 >= 1");
  PathRoute out;
  out.tau_b0 = majorant::slope_crossing_tau(mcm, b0);
  out.tau_b = majorant::slope_crossing_tau(mcm, b);
  out.censored = out.tau_b >= mcm.t_last();
  const auto knots = mcm.knots();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = std::max(knots[i].t, out.tau_b0);
    const double hi = std::min(knots[i + 1].t, out.tau_b);
    if (hi > lo) out.value += energy::psi_eval(spec, mcm.slope(i)) * (hi - lo);
  }
  return out;
}

PathRoute path_route_L(const path::SampledPath& path, const energy::PsiSpec& spec, double b0,
                       double b) {
  return path_route_L(majorant::concave_majorant(path), spec, b0, b);
}

double segment_sum_L(const majorant::PiecewiseLinearFn& mcm, const energy::PsiSpec& spec,
                     double b0, double b) {
  const double low = 1.0 / b;
  const double high = 1.0 / b0;
  const auto knots = mcm.knots();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double s = mcm.slope(i);
    if (s >= low && s < high) total += energy::psi_eval(spec, s) * (knots[i + 1].t - knots[i].t);
  }
  return total;
}

}  // namespace unimaj::groeneboom
