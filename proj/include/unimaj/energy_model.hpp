#pragma once

#include <string>
#include <vector>

namespace unimaj::energy {

enum class PsiKind { PurePower, PowerLog };

/// Convex energy density psi(u) = |u|^kappa * theta(|u|).
///
/// PurePower:  theta == 1.
/// PowerLog:   kappa is fixed at 2 and theta(u) = (e + |ln u|)^alpha, which is
///             positive everywhere and behaves like |ln u|^alpha as u -> 0.
struct PsiSpec {
  PsiKind kind = PsiKind::PurePower;
  double kappa = 2.0;
  double alpha = 0.0;

  static PsiSpec pure_power(double kappa);
  static PsiSpec power_log(double alpha);

  /// Throws std::domain_error on non-finite parameters, kappa <= 0, or a
  /// PowerLog spec with kappa != 2.
  void check() const;
  std::string describe() const;
};

std::string to_string(PsiKind kind);
/// Accepts "power"/"pure_power" and "powerlog"/"power_log".
PsiKind parse_psi_kind(const std::string& text);

/// Slowly varying factor; 1 for PurePower.
double theta(const PsiSpec& spec, double u);
double psi_eval(const PsiSpec& spec, double u);
/// a^2 psi(1/a) for a > 0, evaluated without forming a^2 (finite for a up to the double range).
double scaled_psi(const PsiSpec& spec, double a);

struct PsiDiagnostics {
  bool passed = true;
  int convexity_violations = 0;
  int sign_violations = 0;
  bool minimum_at_zero = true;
  double worst_convexity_defect = 0.0;  // most negative normalized second difference
  double worst_convexity_at = 0.0;
  std::vector<std::string> messages;
};

/// Grid scan of the hypotheses psi(0) = 0, psi > 0 away from 0, symmetry, and
/// convexity. Never throws; malformed specs are reported as failures.
PsiDiagnostics psi_validate(const PsiSpec& spec);

/// m(b) = int_1^b a psi(1/a) da, closed form. Throws std::domain_error for b < 1.
double m_psi(const PsiSpec& spec, double b);
/// Same integral by adaptive quadrature in log a (relative tolerance 1e-10).
double m_psi_quadrature(const PsiSpec& spec, double b);
/// lim_{b -> inf} m(b) by quadrature; +infinity when the classification is Infinite.
double m_psi_limit(const PsiSpec& spec);

/// Variance of L_psi(b): 3 int_1^b a^3 psi(1/a)^2 da, closed form.
double var_L(const PsiSpec& spec, double b);
double var_L_quadrature(const PsiSpec& spec, double b);
double var_L_limit(const PsiSpec& spec);

enum class Finiteness { Finite, Infinite };
std::string to_string(Finiteness f);

struct Classification {
  Finiteness finiteness = Finiteness::Infinite;
  bool boundary_case = false;  // PowerLog alpha == -1: m grows like log log b
  /// Increment ratio (m(e^80)-m(e^40)) / (m(e^40)-m(e^10)); > 0.5 reads as divergent.
  double growth_ratio = 0.0;
  bool numeric_agrees = true;
};

Classification m_psi_classify(const PsiSpec& spec);

}  // namespace unimaj::energy
