#pragma once

#include "bnlab/numerics.hpp"

#include <functional>
#include <vector>

namespace bnlab {

// Space dimension of the radial problem, restricted to 3..6.
class Dimension {
public:
  explicit Dimension(int n);

  int value() const noexcept { return n_; }
  // critical exponent (N+2)/(N-2)
  double exponent() const noexcept { return (n_ + 2.0) / (n_ - 2.0); }
  // [N(N-2)]^{(N-2)/4}, the height of the unit bubble
  double bubble_constant() const;
  // surface area of the unit sphere in R^N
  double sphere_area() const;
  // 1/((N-2) * sphere_area), normalizes the Green function
  double green_constant() const;
  // r^{N-1} times sphere_area
  double volume_weight(double r) const;

  friend bool operator==(Dimension, Dimension) = default;

private:
  int n_;
};

// |x|^k r^{N-1}, formed in log space so that large |x| near small r does not overflow
double weighted_power(double x, double k, double r, int n);

// Log-spaced quadrature breakpoints on [0, outer] resolving each length scale.
std::vector<double> radial_breakpoints(std::vector<double> scales, double outer = 1.0);

// A radial function on [0, outer] that knows its dimension and the length
// scales it varies on.
class RadialFunction {
public:
  RadialFunction(Dimension dim, ScalarFn value, ScalarFn derivative,
                 std::vector<double> scales = {}, double outer = 1.0);

  double operator()(double r) const { return value_(r); }
  double derivative(double r) const { return derivative_(r); }
  Dimension dimension() const noexcept { return dim_; }
  double outer_radius() const noexcept { return outer_; }
  const std::vector<double>& scales() const noexcept { return scales_; }
  std::vector<double> breakpoints() const { return radial_breakpoints(scales_, outer_); }

  // integral over the ball of g(r) with the volume weight
  double integrate_weighted(const ScalarFn& g, const QuadratureSpec& spec = {}) const;
  // sphere_area times the plain integral of h over [0, outer]; h carries its own r^{N-1}
  double integrate_with_own_weight(const ScalarFn& h, const QuadratureSpec& spec = {}) const;
  // integral over the ball of G(u(r), r) with the volume weight
  double integrate_of(const std::function<double(double, double)>& g,
                      const QuadratureSpec& spec = {}) const;

private:
  Dimension dim_;
  ScalarFn value_;
  ScalarFn derivative_;
  std::vector<double> scales_;
  double outer_;
};

} // namespace bnlab
