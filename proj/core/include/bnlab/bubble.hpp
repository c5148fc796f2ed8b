#pragma once

#include "bnlab/radial.hpp"

#include <cmath>

namespace bnlab {

// Radial solution family of -Lap U = U^p on R^N, centered at the origin.
class Bubble {
public:
  Bubble(Dimension dim, double scale);

  Dimension dimension() const noexcept { return dim_; }
  double scale() const noexcept { return scale_; }

  double value(double r) const;
  double radial_derivative(double r) const;
  // d/d(scale) of value(r)
  double scale_derivative(double r) const;
  double scale_derivative_radial(double r) const;

  // value(r) minus its boundary value: vanishes on the unit sphere
  RadialFunction projected() const;
  RadialFunction projected_scale_derivative() const;

  // Generic-precision evaluation, used by finite-difference identity checks.
  template <class T>
  static T value_as(int n, T scale, T r) {
    using std::pow;
    const T alpha = pow(T(n * (n - 2)), T(n - 2) / T(4));
    return alpha * pow(scale, T(n - 2) / T(2)) / pow(scale * scale + r * r, T(n - 2) / T(2));
  }
  template <class T>
  static T scale_derivative_as(int n, T scale, T r) {
    using std::pow;
    const T alpha = pow(T(n * (n - 2)), T(n - 2) / T(4));
    return alpha * T(n - 2) / T(2) * pow(scale, T(n - 4) / T(2)) * (r * r - scale * scale) /
           pow(scale * scale + r * r, T(n) / T(2));
  }

private:
  Dimension dim_;
  double scale_;
};

// Green function of the unit ball with pole at the origin.
struct BallGreen {
  Dimension dim;

  double normalization() const { return dim.green_constant(); }
  double sphere_area() const { return dim.sphere_area(); }
  // G(x, 0) for |x| = r in (0, 1]
  double operator()(double r) const;
  // regular part H(0, x); identically one on the unit ball
  double regular_part(double /*r*/) const { return 1.0; }
  // Robin function at the center
  double robin_at_center() const { return 1.0; }
};

} // namespace bnlab
