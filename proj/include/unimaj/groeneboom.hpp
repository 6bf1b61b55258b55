#pragma once

#include "unimaj/energy_model.hpp"
#include "unimaj/path_engine.hpp"
#include "unimaj/piecewise_linear.hpp"

#include <cstdint>
#include <vector>

namespace unimaj::groeneboom {

/// One atom of the Poisson random measure N(da x dl) behind tau(a).
struct Atom {
  double a;
  double l;   // (z a)^2; may overflow for a beyond ~1e154
  double z2;  // l / a^2, kept so l psi(1/a) = z2 a^2 psi(1/a) stays finite
};

/// Atoms of N restricted to a in (a_min, a_max], sorted by a.
struct JumpSet {
  std::vector<Atom> atoms;
  double a_min = 0.0;
  double a_max = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Density of tau(a)/a^2: p(y) = 2 (phi(sqrt y)/sqrt y - Phibar(sqrt y)).
double tau_density(double y);
/// Distribution function of tau(a)/a^2, in closed form with x = sqrt(y):
/// 2 (Phi(x) - 1/2) + 2 x phi(x) - 2 x^2 Phibar(x).
double tau_cdf(double y);

/// Exact draw of the atoms with a in (a_min, a_max]: ln a forms a unit-rate
/// Poisson process (exponential gaps), and l = (z a)^2 with z half-normal.
JumpSet sample_jumps(double a_min, double a_max, std::uint64_t seed, std::uint64_t stream = 0);

/// Sum of l over the set: tau(a_max) - tau(a_min).
double tau_value(const JumpSet& jumps);
/// Cumulative tau over (a_min, a] evaluated at each of the increasing points `a_grid`.
std::vector<double> tau_at(const JumpSet& jumps, const std::vector<double>& a_grid);

/// L_psi(b0, b) = sum over atoms with a in (b0, b] of l psi(1/a).
double L_psi_jumps(const JumpSet& jumps, const energy::PsiSpec& spec, double b0, double b);

struct MeanVar {
  double mean;
  double variance;
};
/// Exact mean m_psi(b) and variance 3 int_1^b a^3 psi(1/a)^2 da of L_psi(b).
MeanVar L_mean_var(const energy::PsiSpec& spec, double b);

/// Atom of the normalized measure: l psi(1/a) / (b^2 psi(1/b)).
double normalized_atom(const Atom& atom, const energy::PsiSpec& spec, double b);

struct TailMeasure {
  double value;
  double achieved_rel_tol;
};
/// mu_{psi,b0,b}([level, inf)): mass of {(s, z): s in (b0/b, 1], z^2 g(s) >= level}
/// under 2 phi(z) s^-1 ds dz, where g(s) = (sb)^2 psi(1/(sb)) / (b^2 psi(1/b)).
/// Relative tolerance 1e-6; throws numerics::QuadratureError otherwise.
TailMeasure mu_tail(const energy::PsiSpec& spec, double b0, double b, double level);

struct PathRoute {
  double value = 0.0;
  double tau_b0 = 0.0;
  double tau_b = 0.0;
  bool censored = false;  // tau(b) reached the path horizon
};

/// L_psi(b0, b) read off the hull of a sampled path: the psi-energy of the
/// hull between the slope-crossing times tau(b0) and tau(b).
PathRoute path_route_L(const path::SampledPath& path, const energy::PsiSpec& spec, double b0,
                       double b);
PathRoute path_route_L(const majorant::PiecewiseLinearFn& mcm, const energy::PsiSpec& spec,
                       double b0, double b);

/// Same quantity summed directly over hull segments with slope in [1/b, 1/b0).
double segment_sum_L(const majorant::PiecewiseLinearFn& mcm, const energy::PsiSpec& spec,
                     double b0, double b);

}  // namespace unimaj::groeneboom
