#include "bnlab/bubble.hpp"

#include "bnlab/errors.hpp"

#include <string>

namespace bnlab {

Bubble::Bubble(Dimension dim, double scale) : dim_(dim), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw DomainError("bubble scale must be positive and finite");
}

double Bubble::value(double r) const { return value_as<double>(dim_.value(), scale_, r); }

double Bubble::radial_derivative(double r) const {
  const int n = dim_.value();
  const double d = scale_;
  return -(n - 2) * dim_.bubble_constant() * std::pow(d, (n - 2) / 2.0) * r *
         std::pow(d * d + r * r, -n / 2.0);
}

double Bubble::scale_derivative(double r) const {
  return scale_derivative_as<double>(dim_.value(), scale_, r);
}

double Bubble::scale_derivative_radial(double r) const {
  const int n = dim_.value();
  const double d = scale_;
  const double s = d * d + r * r;
  const double c = dim_.bubble_constant() * (n - 2) / 2.0 * std::pow(d, (n - 4) / 2.0);
  return c * r * std::pow(s, -n / 2.0 - 1.0) * (2.0 * s - n * (r * r - d * d));
}

RadialFunction Bubble::projected() const {
  const Bubble b = *this;
  const double boundary = b.value(1.0);
  return RadialFunction(
      dim_, [b, boundary](double r) { return b.value(r) - boundary; },
      [b](double r) { return b.radial_derivative(r); }, {scale_});
}

RadialFunction Bubble::projected_scale_derivative() const {
  const Bubble b = *this;
  const double boundary = b.scale_derivative(1.0);
  return RadialFunction(
      dim_, [b, boundary](double r) { return b.scale_derivative(r) - boundary; },
      [b](double r) { return b.scale_derivative_radial(r); }, {scale_});
}

double BallGreen::operator()(double r) const {
  if (!(r > 0.0) || r > 1.0)
    throw DomainError("ball Green function needs 0 < r <= 1, got " + std::to_string(r));
  const int n = dim.value();
  return dim.green_constant() * (std::pow(r, 2 - n) - 1.0);
}

} // namespace bnlab
