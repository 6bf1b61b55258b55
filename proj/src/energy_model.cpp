#include "unimaj/energy_model.hpp"

#include "unimaj/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace unimaj::energy {

using std::numbers::e;

PsiSpec PsiSpec::pure_power(double kappa) { return {PsiKind::PurePower, kappa, 0.0}; }

PsiSpec PsiSpec::power_log(double alpha) { return {PsiKind::PowerLog, 2.0, alpha}; }

void PsiSpec::check() const {
  if (!std::isfinite(kappa) || kappa <= 0.0) {
    throw std::domain_error("psi: kappa must be finite and > 0");
  }
  if (!std::isfinite(alpha)) throw std::domain_error("psi: alpha must be finite");
  if (kind == PsiKind::PowerLog && kappa != 2.0) {
    throw std::domain_error("psi: the power-log family is defined for kappa = 2 only");
  }
}

std::string PsiSpec::describe() const {
  std::ostringstream out;
  out.precision(17);
  if (kind == PsiKind::PurePower) {
    out << "|u|^" << kappa;
  } else {
    out << "u^2 (e + |ln|u||)^" << alpha;
  }
  return out.str();
}

std::string to_string(PsiKind kind) {
  return kind == PsiKind::PurePower ? "power" : "powerlog";
}

PsiKind parse_psi_kind(const std::string& text) {
  if (text == "power" || text == "pure_power" || text == "PurePower") return PsiKind::PurePower;
  if (text == "powerlog" || text == "power_log" || text == "PowerLog") return PsiKind::PowerLog;
  throw std::invalid_argument("unknown psi kind '" + text + "' (expected power or powerlog)");
}

double theta(const PsiSpec& spec, double u) {
  if (spec.kind == PsiKind::PurePower) return 1.0;
  const double au = std::abs(u);
  if (au == 0.0) return spec.alpha >= 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return std::pow(e + std::abs(std::log(au)), spec.alpha);
}

double psi_eval(const PsiSpec& spec, double u) {
  if (!std::isfinite(u)) throw std::domain_error("psi_eval: argument must be finite");
  const double au = std::abs(u);
  if (au == 0.0) return 0.0;
  if (spec.kind == PsiKind::PurePower) return std::pow(au, spec.kappa);
  return au * au * std::pow(e + std::abs(std::log(au)), spec.alpha);
}

double scaled_psi(const PsiSpec& spec, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("scaled_psi: need 0 < a < inf");
  if (spec.kind == PsiKind::PurePower) return std::pow(a, 2.0 - spec.kappa);
  return std::pow(e + std::abs(std::log(a)), spec.alpha);
}

PsiDiagnostics psi_validate(const PsiSpec& spec) {
  PsiDiagnostics diag;
  try {
    spec.check();
  } catch (const std::exception& ex) {
    diag.passed = false;
    diag.messages.emplace_back(ex.what());
    return diag;
  }

  auto note_convexity = [&](double left, double mid, double right) {
    const double pl = psi_eval(spec, left);
    const double pm = psi_eval(spec, mid);
    const double pr = psi_eval(spec, right);
    const double second = pl + pr - 2.0 * pm;
    const double slack = 1e-12 * std::max(1.0, pm);
    if (second < -slack) {
      ++diag.convexity_violations;
      const double defect = second / std::max(1.0, pm);
      if (defect < diag.worst_convexity_defect) {
        diag.worst_convexity_defect = defect;
        diag.worst_convexity_at = mid;
      }
    }
  };

  if (psi_eval(spec, 0.0) != 0.0) {
    ++diag.sign_violations;
    diag.minimum_at_zero = false;
  }

  // Log-spaced scan on [1e-8, 1e3] with relative half-width 5%.
  constexpr int kLogPoints = 441;
  const double log_lo = std::log(1e-8);
  const double log_hi = std::log(1e3);
  for (int i = 0; i < kLogPoints; ++i) {
    const double u = std::exp(log_lo + (log_hi - log_lo) * i / (kLogPoints - 1));
    const double h = 0.05 * u;
    const double pu = psi_eval(spec, u);
    if (!(pu > 0.0)) ++diag.sign_violations;
    if (pu != psi_eval(spec, -u)) ++diag.sign_violations;
    if (pu < 0.0) diag.minimum_at_zero = false;
    note_convexity(u - h, u, u + h);
    note_convexity(-u - h, -u, -u + h);
  }
  // Linear scan through the origin.
  constexpr int kLinPoints = 401;
  const double h = 4.0 / (kLinPoints - 1);
  for (int i = 1; i + 1 < kLinPoints; ++i) {
    const double u = -2.0 + h * i;
    note_convexity(u - h, u, u + h);
  }

  if (diag.convexity_violations > 0) {
    std::ostringstream msg;
    msg << "convexity violated at " << diag.convexity_violations
        << " grid triples (worst normalized second difference " << diag.worst_convexity_defect
        << " at u = " << diag.worst_convexity_at << ")";
    diag.messages.push_back(msg.str());
  }
  if (diag.sign_violations > 0) {
    diag.messages.push_back("psi(0) != 0, psi <= 0 away from zero, or asymmetric values");
  }
  if (!diag.minimum_at_zero) diag.messages.emplace_back("minimum not attained at zero");
  diag.passed =
      diag.convexity_violations == 0 && diag.sign_violations == 0 && diag.minimum_at_zero;
  return diag;
}

namespace {

void require_b(double b, const char* what) {
  if (!(b >= 1.0) || std::isnan(b)) {
    throw std::domain_error(std::string(what) + ": b must be >= 1");
  }
}

// (exp(p * x) - 1) / p, continuous at p = 0.
double expm1_ratio(double p, double x) { return p == 0.0 ? x : std::expm1(p * x) / p; }

}  // namespace

double m_psi(const PsiSpec& spec, double b) {
  require_b(b, "m_psi");
  spec.check();
  const double log_b = std::log(b);
  if (spec.kind == PsiKind::PurePower) return expm1_ratio(2.0 - spec.kappa, log_b);
  // int_0^{ln b} (e + u)^alpha du
  const double p = 1.0 + spec.alpha;
  return std::pow(e, p) * expm1_ratio(p, std::log1p(log_b / e));
}

double var_L(const PsiSpec& spec, double b) {
  require_b(b, "var_L");
  spec.check();
  const double log_b = std::log(b);
  if (spec.kind == PsiKind::PurePower) return 3.0 * expm1_ratio(4.0 - 2.0 * spec.kappa, log_b);
  const double p = 1.0 + 2.0 * spec.alpha;
  return 3.0 * std::pow(e, p) * expm1_ratio(p, std::log1p(log_b / e));
}

namespace {

// Integrals in the variable u = ln a.
// Integrands in u = ln a, written without e^{2u} psi(e^{-u}) so they do not
// overflow to inf * 0 for large u.
double mean_density(const PsiSpec& spec, double u) {
  if (spec.kind == PsiKind::PurePower) return std::exp((2.0 - spec.kappa) * u);
  return std::pow(std::numbers::e + u, spec.alpha);
}

double var_density(const PsiSpec& spec, double u) {
  if (spec.kind == PsiKind::PurePower) return 3.0 * std::exp((4.0 - 2.0 * spec.kappa) * u);
  return 3.0 * std::pow(std::numbers::e + u, 2.0 * spec.alpha);
}

}  // namespace

double m_psi_quadrature(const PsiSpec& spec, double b) {
  require_b(b, "m_psi_quadrature");
  spec.check();
  return numerics::integrate([&](double u) { return mean_density(spec, u); }, 0.0,
                             std::log(b), 1e-10)
      .value;
}

double var_L_quadrature(const PsiSpec& spec, double b) {
  require_b(b, "var_L_quadrature");
  spec.check();
  return numerics::integrate([&](double u) { return var_density(spec, u); }, 0.0,
                             std::log(b), 1e-10)
      .value;
}

double m_psi_limit(const PsiSpec& spec) {
  if (m_psi_classify(spec).finiteness == Finiteness::Infinite) {
    return std::numeric_limits<double>::infinity();
  }
  return numerics::integrate([&](double u) { return mean_density(spec, u); }, 0.0,
                             std::numeric_limits<double>::infinity(), 1e-10)
      .value;
}

double var_L_limit(const PsiSpec& spec) {
  spec.check();
  const bool finite = spec.kind == PsiKind::PurePower ? spec.kappa > 2.0 : spec.alpha < -0.5;
  if (!finite) return std::numeric_limits<double>::infinity();
  return numerics::integrate([&](double u) { return var_density(spec, u); }, 0.0,
                             std::numeric_limits<double>::infinity(), 1e-10)
      .value;
}

std::string to_string(Finiteness f) { return f == Finiteness::Finite ? "Finite" : "Infinite"; }

Classification m_psi_classify(const PsiSpec& spec) {
  spec.check();
  Classification out;
  if (spec.kind == PsiKind::PurePower) {
    out.finiteness = spec.kappa > 2.0 ? Finiteness::Finite : Finiteness::Infinite;
  } else if (spec.alpha == -1.0) {
    out.finiteness = Finiteness::Infinite;
    out.boundary_case = true;
  } else {
    out.finiteness = spec.alpha < -1.0 ? Finiteness::Finite : Finiteness::Infinite;
  }

  const double m10 = m_psi(spec, std::exp(10.0));
  const double m40 = m_psi(spec, std::exp(40.0));
  const double m80 = m_psi(spec, std::exp(80.0));
  out.growth_ratio = (m80 - m40) / (m40 - m10);
  const Finiteness numeric = out.growth_ratio > 0.5 ? Finiteness::Infinite : Finiteness::Finite;
  out.numeric_agrees = numeric == out.finiteness;
  return out;
}

}  // namespace unimaj::energy
