#include "bnlab/constants.hpp"

#include "bnlab/bubble.hpp"
#include "bnlab/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace bnlab {

namespace {

std::vector<double> half_line_points(double truncation) {
  if (std::isinf(truncation)) return {0.0, 1.0, 10.0, kInf};
  std::vector<double> pts{0.0};
  for (double x = 1.0; x < truncation; x *= 10.0) pts.push_back(x);
  pts.push_back(truncation);
  return pts;
}

// sphere_area * integral over [0, truncation) of r^{N-1} g(r)
double radial_space_integral(Dimension dim, const ScalarFn& g, const QuadratureSpec& spec,
                             double truncation = kInf) {
  const int n = dim.value();
  const auto pts = half_line_points(truncation);
  return dim.sphere_area() * integrate([&](double r) { return std::pow(r, n - 1) * g(r); }, pts, spec);
}

} // namespace

double UniversalIntegrals::bubble_sq_or_throw() const {
  if (!bubble_sq)
    throw Divergent("integral of U^2 over R^" + std::to_string(dim.value()) + " diverges");
  return *bubble_sq;
}

double bubble_power_integral(Dimension dim, double k, const QuadratureSpec& spec, double truncation) {
  const int n = dim.value();
  // integrand ~ r^{N-1-k(N-2)} at infinity
  if (std::isinf(truncation) && n - 1 - k * (n - 2) >= -1.0)
    throw Divergent("integral of U^" + std::to_string(k) + " over R^" + std::to_string(n) + " diverges");
  const double alpha = dim.bubble_constant();
  const double expo = -k * (n - 2) / 2.0;
  return std::pow(alpha, k) *
         radial_space_integral(dim, [expo](double r) { return std::pow(1.0 + r * r, expo); }, spec, truncation);
}

double bubble_gradient_sq(Dimension dim, const QuadratureSpec& spec) {
  const Bubble b(dim, 1.0);
  return radial_space_integral(dim, [&b](double r) { const double d = b.radial_derivative(r); return d * d; }, spec);
}

double sobolev_from_rayleigh(Dimension dim, const QuadratureSpec& spec) {
  const int n = dim.value();
  const double grad = bubble_gradient_sq(dim, spec);
  const double crit = bubble_power_integral(dim, dim.exponent() + 1.0, spec);
  return grad / std::pow(crit, (n - 2.0) / n);
}

UniversalIntegrals universal_integrals(Dimension dim, const QuadratureSpec& spec, double truncation) {
  const double p = dim.exponent();
  std::optional<double> sq;
  try {
    sq = bubble_power_integral(dim, 2.0, spec, truncation);
  } catch (const Divergent&) {
    sq.reset();
  }
  const double pw = bubble_power_integral(dim, p, spec, truncation);
  const double crit = bubble_power_integral(dim, p + 1.0, spec, truncation);
  return {dim, sq, pw, crit, std::pow(crit, 2.0 / dim.value())};
}

CoeffsN4 coeffs_n4(const EigenPair& pair, const UniversalIntegrals& uni, const QuadratureSpec& spec) {
  if (pair.dim.value() != 4 || uni.dim.value() != 4)
    throw DimensionMismatch("coeffs_n4 needs N = 4 inputs");
  const auto fun = eigen_functionals(pair, spec);
  const Dimension d = pair.dim;
  const double alpha = d.bubble_constant();
  return {0.5 * fun.integral_sq, fun.center_value * uni.bubble_power,
          0.5 * pair.eigenvalue * d.sphere_area() * alpha * alpha};
}

CoeffsN5 coeffs_n5(const EigenPair& pair, const UniversalIntegrals& uni, const QuadratureSpec& spec) {
  if (pair.dim.value() != 5 || uni.dim.value() != 5)
    throw DimensionMismatch("coeffs_n5 needs N = 5 inputs");
  const auto fun = eigen_functionals(pair, spec);
  const double q = pair.dim.exponent() + 1.0;
  return {0.5 * fun.integral_sq, fun.integral_critical_power / q, fun.center_value * uni.bubble_power,
          0.5 * pair.eigenvalue * uni.bubble_sq_or_throw()};
}

double shifted_profile_integral(Dimension dim, const QuadratureSpec& spec) {
  const double e = -(dim.value() + 4) / 2.0;
  return radial_space_integral(dim, [e](double r) { return (r * r - 1.0) * std::pow(1.0 + r * r, e); }, spec);
}

LinearConstants linear_constants(const EigenPair& pair, std::optional<double> concentration_factor,
                                 const QuadratureSpec& spec) {
  const Dimension dim = pair.dim;
  const int n = dim.value();
  if (n != 4 && n != 5) throw DimensionMismatch("linear_constants needs N = 4 or 5");
  const double p = dim.exponent();
  const double alpha = dim.bubble_constant();
  const BallGreen green{dim};

  const double kernel = std::pow(alpha, p + 1.0) *
      radial_space_integral(dim, [n](double r) {
        const double s = r * r - 1.0;
        return s * s * std::pow(1.0 + r * r, -(n + 2.0));
      }, spec);
  const double correction = std::pow(alpha, p) * (n - 2) / 2.0 * green.robin_at_center() *
                            -shifted_profile_integral(dim, spec);

  const auto& e1 = pair.eigenfunction;
  const double coupling = e1.integrate_weighted([&e1, n](double r) { return e1(r) * std::pow(r, 2 - n); }, spec);
  const double coupling_boundary =
      e1.integrate_weighted([&e1, &green](double r) { return e1(r) * green.regular_part(r); }, spec);

  std::optional<double> interaction;
  if (n == 5 && concentration_factor) {
    const double inv = 1.0 / *concentration_factor;
    interaction = radial_space_integral(dim, [inv](double r) {
      const double s = r * r;
      const double bracket = 35.0 * (s - 1.0) / (1.0 + s) + 0.5 * inv * (7.0 - 3.0 * s);
      return s * std::pow(1.0 + s, -7.0) * bracket * bracket;
    }, spec);
  }

  double pz_leading = 0.0, pz_correction = 0.0;
  if (n == 4) {
    pz_leading = radial_space_integral(dim, [](double r) {
      const double s = 1.0 - r * r;
      return s * s * std::pow(1.0 + r * r, -6.0);
    }, spec);
    pz_correction = -shifted_profile_integral(dim, spec);
  }

  return {dim, kernel, correction, coupling, coupling_boundary, interaction, pair.eigenvalue,
          pz_leading, pz_correction};
}

Matrix2 reduction_matrix(const LinearConstants& c, double eigenvalue, double scale) {
  const double s2 = scale * scale;
  if (c.dim.value() == 4) {
    const double off = eigenvalue * (c.eigen_coupling - c.eigen_coupling_boundary);
    return {{{c.kernel_norm - c.kernel_correction * s2, off * s2}, {off, eigenvalue * c.eigen_norm}}};
  }
  const double off = eigenvalue * c.eigen_coupling;
  return {{{c.kernel_norm, off * std::pow(scale, 2.5)}, {off * std::sqrt(scale), eigenvalue * c.eigen_norm}}};
}

double determinant(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

std::shared_ptr<const ProblemData> ConstantsCache::get(Dimension dim, double quad_rel_tol) {
  std::shared_ptr<Entry> entry;
  {
    std::lock_guard lock(mutex_);
    auto& slot = entries_[{dim.value(), quad_rel_tol}];
    if (!slot) slot = std::make_shared<Entry>();
    entry = slot;
  }
  std::call_once(entry->once, [&] {
    QuadratureSpec qs;
    qs.rel_tol = quad_rel_tol;
    auto pair = compute_eigenpair(dim);
    auto uni = universal_integrals(dim, qs);
    entry->data = std::make_shared<const ProblemData>(ProblemData{std::move(pair), uni});
  });
  return entry->data;
}

ConstantsCache& ConstantsCache::shared() {
  static ConstantsCache cache;
  return cache;
}

} // namespace bnlab
