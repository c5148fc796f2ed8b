#include "bnlab/radial.hpp"

#include "bnlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bnlab {

Dimension::Dimension(int n) : n_(n) {
  if (n < 3 || n > 6) throw DomainError("dimension must be in 3..6, got " + std::to_string(n));
}

double Dimension::bubble_constant() const {
  return std::pow(static_cast<double>(n_ * (n_ - 2)), (n_ - 2) / 4.0);
}

double Dimension::sphere_area() const {
  return 2.0 * std::pow(std::numbers::pi, n_ / 2.0) / std::tgamma(n_ / 2.0);
}

double Dimension::green_constant() const { return 1.0 / ((n_ - 2) * sphere_area()); }

double Dimension::volume_weight(double r) const {
  return sphere_area() * std::pow(r, n_ - 1);
}

std::vector<double> radial_breakpoints(std::vector<double> scales, double outer) {
  std::vector<double> pts{0.0, outer};
  constexpr double step = 3.1622776601683795; // half a decade
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) continue;
    for (double x = s * 1e-2; x < outer; x *= step) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double x : pts) {
    if (x > outer) break;
    if (out.empty() || x > out.back() * (1.0 + 1e-9)) out.push_back(x);
  }
  if (out.back() != outer) out.back() = outer;
  return out;
}

RadialFunction::RadialFunction(Dimension dim, ScalarFn value, ScalarFn derivative,
                               std::vector<double> scales, double outer)
    : dim_(dim), value_(std::move(value)), derivative_(std::move(derivative)),
      scales_(std::move(scales)), outer_(outer) {}

double RadialFunction::integrate_weighted(const ScalarFn& g, const QuadratureSpec& spec) const {
  const double area = dim_.sphere_area();
  const int n = dim_.value();
  const auto pts = breakpoints();
  return area * integrate([&](double r) { return g(r) * std::pow(r, n - 1); }, pts, spec);
}

double RadialFunction::integrate_with_own_weight(const ScalarFn& h, const QuadratureSpec& spec) const {
  const auto pts = breakpoints();
  return dim_.sphere_area() * integrate(h, pts, spec);
}

double weighted_power(double x, double k, double r, int n) {
  if (x == 0.0 || r == 0.0) return 0.0;
  return std::exp(k * std::log(std::abs(x)) + (n - 1) * std::log(r));
}

double RadialFunction::integrate_of(const std::function<double(double, double)>& g,
                                    const QuadratureSpec& spec) const {
  return integrate_weighted([&](double r) { return g(value_(r), r); }, spec);
}

} // namespace bnlab
