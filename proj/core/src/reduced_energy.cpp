#include "bnlab/reduced_energy.hpp"

#include "bnlab/bubble.hpp"
#include "bnlab/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bnlab {

double amplitude_exponent(double s) { return (s - 1.0) * (s - 1.0) + 1.0; }

double reduced_energy_n4(double s1, double s2, const CoeffsN4& c) {
  const double g = amplitude_exponent(s2);
  return -c.amplitude_quadratic * g * g + c.cross * g * s1 - c.concentration_quadratic * s1 * s1;
}

std::array<double, 2> reduced_energy_n4_gradient(double s1, double s2, const CoeffsN4& c) {
  const double g = amplitude_exponent(s2);
  const double dg = 2.0 * (s2 - 1.0);
  return {c.cross * g - 2.0 * c.concentration_quadratic * s1,
          (-2.0 * c.amplitude_quadratic * g + c.cross * s1) * dg};
}

double amplitude_energy_n5(double d1, const CoeffsN5& c) {
  return c.amplitude_quadratic * d1 * d1 - c.amplitude_power * std::pow(d1, 10.0 / 3.0);
}

double concentration_energy_n5(double d1, double d2, const CoeffsN5& c) {
  return c.cross * d1 * std::pow(d2, 1.5) - c.concentration_quadratic * d2 * d2;
}

std::string_view to_string(CriticalKind k) {
  switch (k) {
  case CriticalKind::maximum: return "max";
  case CriticalKind::saddle: return "saddle";
  case CriticalKind::degenerate: return "degenerate";
  }
  return "unknown";
}

CriticalPoint critical_point_n4(const CoeffsN4& c) {
  const double s1 = c.cross / (2.0 * c.concentration_quadratic);
  const double disc = c.cross * c.cross - 4.0 * c.amplitude_quadratic * c.concentration_quadratic;
  // Hessian is diagonal at s2 = 1 because g'(1) = 0
  const double h11 = -2.0 * c.concentration_quadratic;
  const double h22 = disc / c.concentration_quadratic;
  CriticalKind kind = CriticalKind::degenerate;
  if (disc < 0.0) kind = CriticalKind::maximum;
  else if (disc > 0.0) kind = CriticalKind::saddle;
  return {{s1, 1.0}, kind, h11 * h22, h11 + h22};
}

CriticalPoint critical_point_n5(const CoeffsN5& c) {
  const double d1 = std::pow(3.0 * c.amplitude_quadratic / (5.0 * c.amplitude_power), 0.75);
  const double root = 0.75 * (c.cross / c.concentration_quadratic) * d1;
  const double d2 = root * root;
  const double h11 = 2.0 * c.amplitude_quadratic - c.amplitude_power * (70.0 / 9.0) * std::pow(d1, 4.0 / 3.0);
  const double h22 = 0.75 * c.cross * d1 / std::sqrt(d2) - 2.0 * c.concentration_quadratic;
  return {{d1, d2}, CriticalKind::maximum, h11 * h22, h11 + h22};
}

// ------------------------------------------------------------------ ansatz

double AnsatzParams::concentration() const { return std::exp(log_concentration); }
double AnsatzParams::amplitude() const { return std::exp(log_amplitude); }

namespace {

void check_window(double x, double margin, const char* name) {
  if (!(x > margin && x < 1.0 / margin))
    throw DomainError(std::string("ansatz coordinate ") + name + " outside the admissible window");
}

} // namespace

AnsatzParams AnsatzParams::n4(double eps, double s1, double s2, double eigenvalue, double margin) {
  if (!(eps > 0.0)) throw DomainError("ansatz: eps must be positive");
  check_window(s1, margin, "s1");
  check_window(s2, margin, "s2");
  const double log_conc = std::log(eps) - 1.0 / eps + std::log(s1);
  const double log_amp = -amplitude_exponent(s2) / eps;
  return {Dimension(4), eps, eigenvalue + eps, {s1, s2}, log_conc, log_amp};
}

AnsatzParams AnsatzParams::n5(double eps, double d1, double d2, double eigenvalue, double margin) {
  if (!(eps > 0.0)) throw DomainError("ansatz: eps must be positive");
  check_window(d1, margin, "d1");
  check_window(d2, margin, "d2");
  const double le = std::log(eps);
  return {Dimension(5), eps, eigenvalue - eps, {d1, d2}, 1.5 * le + std::log(d2), 0.75 * le + std::log(d1)};
}

AnsatzParams AnsatzParams::raw(Dimension dim, double lambda, double eigenvalue, double concentration,
                               double amplitude) {
  if (!(concentration > 0.0)) throw DomainError("ansatz: concentration must be positive");
  if (amplitude < 0.0) throw DomainError("ansatz: amplitude must be non-negative");
  const double la = amplitude > 0.0 ? std::log(amplitude) : -std::numeric_limits<double>::infinity();
  return {dim, std::abs(lambda - eigenvalue), lambda, {0.0, 0.0}, std::log(concentration), la};
}

RadialFunction build_ansatz(const AnsatzParams& a, const EigenPair& pair) {
  if (a.dim != pair.dim) throw DimensionMismatch("build_ansatz: dimension mismatch");
  const Bubble b(a.dim, a.concentration());
  const double boundary = b.value(1.0);
  const double amp = a.amplitude();
  const RadialFunction e1 = pair.eigenfunction;
  return RadialFunction(
      a.dim, [b, boundary, amp, e1](double r) { return b.value(r) - boundary - amp * e1(r); },
      [b, amp, e1](double r) { return b.radial_derivative(r) - amp * e1.derivative(r); },
      {a.concentration()});
}

double energy(const RadialFunction& u, double lambda, const QuadratureSpec& spec) {
  const int n = u.dimension().value();
  const double q = u.dimension().exponent() + 1.0;
  return u.integrate_with_own_weight([&](double r) {
    const double v = u(r);
    return 0.5 * weighted_power(u.derivative(r), 2.0, r, n) - weighted_power(v, q, r, n) / q -
           0.5 * lambda * weighted_power(v, 2.0, r, n);
  }, spec);
}

double ansatz_energy_excess(const AnsatzParams& a, const EigenPair& pair, const UniversalIntegrals& uni,
                            const QuadratureSpec& spec) {
  if (a.dim != pair.dim || a.dim != uni.dim) throw DimensionMismatch("ansatz_energy_excess: dimension mismatch");
  const Dimension dim = a.dim;
  const int n = dim.value();
  const double p = dim.exponent();
  const double delta = a.concentration();
  const double amp = a.amplitude();
  const Bubble b(dim, delta);
  const double boundary = b.value(1.0);
  const auto& e1 = pair.eigenfunction;
  const auto pts = radial_breakpoints({delta}, 1.0);
  const double area = dim.sphere_area();
  // integrands below already carry r^{N-1}
  auto ball = [&](const ScalarFn& g) { return area * integrate(g, pts, spec); };

  // outside the ball the bubble still carries critical-power mass
  const double outside = area * integrate([&](double r) { return weighted_power(b.value(r), p + 1.0, r, n); },
                                          1.0, kInf, spec);
  const double mass_p = ball([&](double r) { return weighted_power(b.value(r), p, r, n); });
  const double mass_p_e1 = ball([&](double r) { return weighted_power(b.value(r), p, r, n) * e1(r); });
  const double proj_sq = ball([&](double r) { return weighted_power(b.value(r) - boundary, 2.0, r, n); });
  const double proj_e1 = ball([&](double r) { return weighted_power(b.value(r) - boundary, 1.0, r, n) * e1(r); });
  const double e1_sq = pair.l2_norm * pair.l2_norm;
  // |V|^{p+1} - U^{p+1} with V = U - w, w >= 0
  const double power_gap = ball([&](double r) {
    const double u = b.value(r);
    const double w = boundary + amp * e1(r);
    const double up1 = weighted_power(u, p + 1.0, r, n);
    if (w < u) return up1 * std::expm1((p + 1.0) * std::log1p(-w / u));
    return weighted_power(w - u, p + 1.0, r, n) - up1;
  });

  const double lambda = a.lambda;
  return -outside / n - 0.5 * boundary * mass_p - amp * mass_p_e1 +
         0.5 * (pair.eigenvalue - lambda) * amp * amp * e1_sq - 0.5 * lambda * proj_sq +
         lambda * amp * proj_e1 - power_gap / (p + 1.0);
}

double residual_norm(const AnsatzParams& a, const EigenPair& pair, const QuadratureSpec& spec) {
  if (a.dim != pair.dim) throw DimensionMismatch("residual_norm: dimension mismatch");
  const Dimension dim = a.dim;
  const int n = dim.value();
  const double p = dim.exponent();
  const double q = 2.0 * n / (n + 2.0);
  const double amp = a.amplitude();
  const Bubble b(dim, a.concentration());
  const double boundary = b.value(1.0);
  const auto& e1 = pair.eigenfunction;
  const double lambda = a.lambda;
  const double shift = lambda - pair.eigenvalue;
  const auto pts = radial_breakpoints({a.concentration()}, 1.0);

  // defect relative to U^p, so that only its logarithm meets the large scale
  auto relative_defect = [&](double r) {
    const double u = b.value(r);
    const double e = e1(r);
    const double w = boundary + amp * e;
    const double log_up = p * std::log(u);
    // U^p - f(V) without cancelling against the large U^p
    double nonlinear;
    if (w < u) nonlinear = -std::expm1(p * std::log1p(-w / u));
    else nonlinear = 1.0 + std::pow((w - u) / u, p);
    return nonlinear - lambda * std::exp(std::log(u - boundary) - log_up) + shift * amp * e * std::exp(-log_up);
  };
  const double integral = dim.sphere_area() * integrate([&](double r) {
    if (r == 0.0) return 0.0;
    const double rel = relative_defect(r);
    if (rel == 0.0) return 0.0;
    return std::exp(q * (p * std::log(b.value(r)) + std::log(std::abs(rel))) + (n - 1) * std::log(r));
  }, pts, spec);
  return std::pow(integral, 1.0 / q);
}

double expansion_prefactor_n4(double eps) {
  const double lg = std::log(eps) - 2.0 / eps;
  if (lg < std::log(1e-280)) throw PrecisionLoss("eps e^{-2/eps} underflows for eps = " + std::to_string(eps));
  return std::exp(lg);
}

std::array<double, 2> psi_gradient_check(const AnsatzParams& a, const EigenPair& pair,
                                         const UniversalIntegrals& uni, const QuadratureSpec& spec) {
  if (a.dim.value() != 4) throw DimensionMismatch("psi_gradient_check needs N = 4");
  const double scale = expansion_prefactor_n4(a.eps);
  const double eigenvalue = a.lambda - a.eps;
  auto excess = [&](double s1, double s2) {
    return ansatz_energy_excess(AnsatzParams::n4(a.eps, s1, s2, eigenvalue, 1e-12), pair, uni, spec);
  };
  std::array<double, 2> out{};
  for (int k = 0; k < 2; ++k) {
    const double x = a.scaled[k];
    auto partial = [&](double h) {
      auto at = [&](double dx) {
        return k == 0 ? excess(a.scaled[0] + dx, a.scaled[1]) : excess(a.scaled[0], a.scaled[1] + dx);
      };
      return (at(h) - at(-h)) / (2.0 * h);
    };
    const double h = 1e-4 * x;
    out[k] = (4.0 * partial(0.5 * h) - partial(h)) / 3.0 / scale;
  }
  return out;
}

} // namespace bnlab
