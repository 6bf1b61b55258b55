#pragma once

#include "unimaj/energy_model.hpp"
#include "unimaj/path_engine.hpp"
#include "unimaj/piecewise_linear.hpp"
#include "unimaj/rng.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace unimaj::majorant {

/// Upper concave hull of the sample points (monotone chain, one pass).
/// Collinear interior points are dropped, so hull slopes strictly decrease.
PiecewiseLinearFn concave_majorant(std::span<const double> t, std::span<const double> y);
PiecewiseLinearFn concave_majorant(const path::SampledPath& path);

/// Concave majorant forced through (t_first, r): the line from (t_first, r)
/// tangent to `mcm`, then `mcm` itself. Requires r > mcm(t_first).
PiecewiseLinearFn restricted_majorant(const PiecewiseLinearFn& mcm, double r);

/// Energy-minimal h with h(0) = r and h >= path on [0, T]:
///   r >= max path  -> the constant r;
///   otherwise      -> tangent line from (0, r), the hull up to the first
///                     maximum, then constant at the maximum.
PiecewiseLinearFn unilateral_minimizer(const path::SampledPath& path, double r);

/// sum over segments of psi(slope) * length
double energy(const PiecewiseLinearFn& h, const energy::PsiSpec& spec);

/// Energy of the grid interpolant of `heights` sampled at uniform spacing dt.
double grid_energy(std::span<const double> heights, double dt, const energy::PsiSpec& spec);

double min_energy(const path::SampledPath& path, double r, const energy::PsiSpec& spec);

/// Last time whose left-continuous hull slope is >= 1/a; 0 if none.
double slope_crossing_tau(const PiecewiseLinearFn& mcm, double a);

/// Brute-force dynamic program over quantized heights (h_0 = r, h_k >= w_k).
/// Independent of the hull construction; intended for short paths only.
/// Throws std::length_error when points * levels^2 exceeds the work budget.
double dp_oracle_min_energy(const path::SampledPath& path, double r, const energy::PsiSpec& spec,
                            std::size_t height_levels);

/// A random h on the path grid with h(0) = r and h >= path, drawn from one of
/// four families: nonnegative smooth lifts of `chi_star`, signed smooth
/// perturbations kept only when feasible, signed perturbations projected up
/// onto the path, and minimizers of randomly lifted samples.
std::vector<double> random_feasible_competitor(const path::SampledPath& path, double r,
                                               const PiecewiseLinearFn& chi_star,
                                               RandomStream& rng);

}  // namespace unimaj::majorant
