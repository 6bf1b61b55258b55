#pragma once

#include "unimaj/config.hpp"
#include "unimaj/report.hpp"

namespace unimaj::experiment {

/// Sample mean/variance of L_psi(b) against m_psi(b) and its variance formula.
/// Hard: |mean - m| <= 4 sqrt(Var/n); variance ratio in [0.9, 1.1] once n >= 1e4.
ExperimentReport run_moment_check(const ExperimentConfig& cfg);

/// L_psi(b)/m_psi(b) along the b grid (divergent m only).
/// Hard: mean ratio within 4 theoretical standard errors of 1 at every b; sd of
/// the ratio within 20% of sqrt(Var)/m at the largest b; sd decreasing along the grid.
ExperimentReport run_ratio_convergence(const ExperimentConfig& cfg);

/// Nested windows (1, b] for convergent m.
/// Hard: pathwise monotone in b; mean at the largest b within 2 standard errors of
/// m(inf); 99th percentiles of the last two grid points within 5%.
ExperimentReport run_finite_energy(const ExperimentConfig& cfg);

/// Exact identities on simulated paths: two-route L equality, the psi = |u|
/// identity I = max W - r, and optimality of the unilateral minimizer against
/// random competitors and the height-grid dynamic program.
ExperimentReport run_identity_suite(const ExperimentConfig& cfg);

/// Report-only normalized energy statistics along T and tau envelope exceedances.
ExperimentReport run_envelope_study(const ExperimentConfig& cfg);

/// Dispatch on cfg.kind; fills wall time and seed provenance.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace unimaj::experiment
