#pragma once
// Test-only reference computations. Nothing here calls into the library's
// quadrature or hull code, so agreement is a genuine cross-check.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

template <class F>
double quad(F f, double lo, double hi) {
  boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, lo, hi);
}

template <class F>
double quad_to_inf(F f, double lo) {
  boost::math::quadrature::exp_sinh<double> rule;
  return rule.integrate(f, lo, std::numeric_limits<double>::infinity());
}

inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

/// Upper-hull knot indices by the definition: point k is a knot iff no chord
/// between an earlier and a later point passes on or above it.
inline std::vector<std::size_t> brute_force_hull(const std::vector<double>& t,
                                                 const std::vector<double>& y) {
  const std::size_t n = t.size();
  std::vector<std::size_t> knots;
  for (std::size_t k = 0; k < n; ++k) {
    bool covered = false;
    for (std::size_t i = 0; i < k && !covered; ++i) {
      for (std::size_t j = k + 1; j < n && !covered; ++j) {
        const double chord = y[i] + (y[j] - y[i]) * (t[k] - t[i]) / (t[j] - t[i]);
        if (chord >= y[k]) covered = true;
      }
    }
    if (!covered) knots.push_back(k);
  }
  return knots;
}

/// One-sample Kolmogorov-Smirnov distance against a continuous CDF.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace oracle
