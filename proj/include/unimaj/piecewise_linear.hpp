#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace unimaj::majorant {

struct Knot {
  double t;
  double y;
  bool operator==(const Knot&) const = default;
};

/// Continuous piecewise-linear function given by its knots; t strictly increasing.
class PiecewiseLinearFn {
 public:
  explicit PiecewiseLinearFn(std::vector<Knot> knots);

  std::span<const Knot> knots() const { return knots_; }
  std::size_t size() const { return knots_.size(); }
  std::size_t segments() const { return knots_.size() - 1; }
  double t_first() const { return knots_.front().t; }
  double t_last() const { return knots_.back().t; }

  double slope(std::size_t segment) const;
  std::vector<double> slopes() const;
  /// Linear interpolation; t outside the domain is clamped to the nearest end.
  double operator()(double t) const;

  bool is_concave() const;  // strictly decreasing slopes

 private:
  std::vector<Knot> knots_;
};

void write_csv(const PiecewiseLinearFn& fn, std::ostream& out);
PiecewiseLinearFn read_csv(std::istream& in);
std::string to_json(const PiecewiseLinearFn& fn);
PiecewiseLinearFn from_json(const std::string& text);

}  // namespace unimaj::majorant
