#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace unimaj::numerics {

double normal_pdf(double x);
/// Upper tail 1 - Phi(x), accurate far into the tail.
double normal_sf(double x);
double normal_cdf(double x);

struct Integral {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

/// Raised when an adaptive rule cannot reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_rel_tol)
      : std::runtime_error(what), achieved_(achieved_rel_tol) {}
  double achieved_rel_tol() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Globally adaptive Gauss-Kronrod (G7/K15) on [lo, hi]; hi may be +infinity.
/// Throws QuadratureError when error > rel_tol * |value| (and > abs_floor).
Integral integrate(const std::function<double(double)>& f, double lo, double hi,
                   double rel_tol, double abs_floor = 0.0);

}  // namespace unimaj::numerics

namespace unimaj::numerics {

/// Bisection for a sign change of f on [lo, hi]; stops when the bracket is below tol.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace unimaj::numerics
