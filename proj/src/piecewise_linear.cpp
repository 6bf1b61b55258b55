#include "unimaj/piecewise_linear.hpp"

#include "unimaj/path_engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace unimaj::majorant {

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw std::invalid_argument("PiecewiseLinearFn: need at least 2 knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].t) || !std::isfinite(knots_[i].y)) {
      throw std::invalid_argument("PiecewiseLinearFn: non-finite knot");
    }
    if (i > 0 && !(knots_[i].t > knots_[i - 1].t)) {
      throw std::invalid_argument("PiecewiseLinearFn: knot times must be strictly increasing");
    }
  }
}

double PiecewiseLinearFn::slope(std::size_t segment) const {
  const Knot& a = knots_.at(segment);
  const Knot& b = knots_.at(segment + 1);
  return (b.y - a.y) / (b.t - a.t);
}

std::vector<double> PiecewiseLinearFn::slopes() const {
  std::vector<double> out(segments());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = slope(i);
  return out;
}

double PiecewiseLinearFn::operator()(double t) const {
  if (t <= knots_.front().t) return knots_.front().y;
  if (t >= knots_.back().t) return knots_.back().y;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double v, const Knot& k) { return v < k.t; });
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  if (t == a.t) return a.y;
  const double w = (t - a.t) / (b.t - a.t);
  return a.y + w * (b.y - a.y);
}

bool PiecewiseLinearFn::is_concave() const {
  for (std::size_t i = 1; i < segments(); ++i) {
    if (!(slope(i) < slope(i - 1))) return false;
  }
  return true;
}

void write_csv(const PiecewiseLinearFn& fn, std::ostream& out) {
  out << "t,y\n";
  for (const Knot& k : fn.knots()) {
    out << path::format_double(k.t) << ',' << path::format_double(k.y) << '\n';
  }
}

PiecewiseLinearFn read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("knot csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,y") throw std::invalid_argument("knot csv: expected header 't,y'");
  std::vector<Knot> knots;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("knot csv: malformed row");
    knots.push_back({path::parse_double(line.substr(0, comma)),
                     path::parse_double(line.substr(comma + 1))});
  }
  return PiecewiseLinearFn(std::move(knots));
}

std::string to_json(const PiecewiseLinearFn& fn) {
  nlohmann::json j;
  j["knots"] = nlohmann::json::array();
  for (const Knot& k : fn.knots()) j["knots"].push_back({k.t, k.y});
  return j.dump();
}

PiecewiseLinearFn from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<Knot> knots;
  for (const auto& k : j.at("knots")) knots.push_back({k.at(0).get<double>(), k.at(1).get<double>()});
  return PiecewiseLinearFn(std::move(knots));
}

}  // namespace unimaj::majorant
