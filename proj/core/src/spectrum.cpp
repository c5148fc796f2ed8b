#include "bnlab/spectrum.hpp"

#include "bnlab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>

namespace bnlab {

namespace {

constexpr double kStart = 1e-8;

OdeSpec helmholtz_ode(double rel_tol, double abs_tol) {
  OdeSpec s;
  s.rel_tol = rel_tol;
  s.abs_tol = abs_tol;
  s.h_init = 1e-6;
  s.h_min = 1e-16;
  s.h_max = 0.05;
  s.dense_output = false;
  return s;
}

OdeRhs helmholtz_rhs(int n, double mu) {
  return [n, mu](double r, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -(n - 1) / r * y[1] - mu * y[0];
  };
}

std::array<double, 2> taylor_start(int n, double mu, double r) {
  return {1.0 - mu * r * r / (2.0 * n), -mu * r / n};
}

// Quintic Hermite interpolation of (u, u', u'') on a Chebyshev-spaced grid.
struct HermiteTable {
  int intervals;
  std::vector<double> x, f, d, s;

  std::size_t cell(double r) const {
    const double k = std::acos(std::clamp(1.0 - 2.0 * r, -1.0, 1.0)) * intervals / std::numbers::pi;
    auto i = static_cast<long>(k);
    i = std::clamp<long>(i, 0, intervals - 1);
    // acos rounding can land one cell off
    if (r < x[i] && i > 0) --i;
    if (r > x[i + 1] && i + 1 < intervals) ++i;
    return static_cast<std::size_t>(i);
  }

  double value(double r) const {
    if (r >= 1.0) return 0.0;
    const std::size_t i = cell(r);
    const double h = x[i + 1] - x[i];
    const double t = (r - x[i]) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
    const double h3 = 0.5 * (t3 - 2 * t4 + t5);
    const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
    const double h5 = 10 * t3 - 15 * t4 + 6 * t5;
    return f[i] * h0 + h * d[i] * h1 + h * h * s[i] * h2 + h * h * s[i + 1] * h3 + h * d[i + 1] * h4 +
           f[i + 1] * h5;
  }

  double derivative(double r) const {
    if (r > 1.0) return 0.0;
    const std::size_t i = cell(std::min(r, 1.0));
    const double h = x[i + 1] - x[i];
    const double t = (r - x[i]) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const double g0 = -30 * t2 + 60 * t3 - 30 * t4;
    const double g1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double g2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
    const double g3 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
    const double g4 = -12 * t2 + 28 * t3 - 15 * t4;
    const double g5 = 30 * t2 - 60 * t3 + 30 * t4;
    return (f[i] * g0 + h * d[i] * g1 + h * h * s[i] * g2 + h * h * s[i + 1] * g3 + h * d[i + 1] * g4 +
            f[i + 1] * g5) / h;
  }
};

} // namespace

double helmholtz_boundary_value(Dimension dim, double mu, double ode_rel_tol) {
  const int n = dim.value();
  const auto y0 = taylor_start(n, mu, kStart);
  const auto sol = solve_ivp(helmholtz_rhs(n, mu), y0, kStart, 1.0, helmholtz_ode(ode_rel_tol, 1e-14));
  return sol.final_state()[0];
}

std::vector<double> radial_eigenvalues(Dimension dim, const EigenSolveSpec& spec) {
  const double hi = 2.0 * dim.value() * std::numbers::pi * std::numbers::pi;
  const double lo = 1.0;
  const double width = (hi - lo) / spec.panels;
  RootSpec rs;
  rs.x_tol = spec.root_x_tol;
  auto f = [&](double mu) { return helmholtz_boundary_value(dim, mu, spec.ode_rel_tol); };
  std::vector<double> roots;
  double a = lo, fa = f(a);
  for (int k = 1; k <= spec.panels; ++k) {
    const double b = lo + k * width;
    const double fb = f(b);
    if ((fa > 0) != (fb > 0)) roots.push_back(find_root(f, a, b, rs));
    a = b;
    fa = fb;
  }
  return roots;
}

EigenPair compute_eigenpair(Dimension dim, const EigenSolveSpec& spec) {
  const int n = dim.value();
  const double hi = 2.0 * n * std::numbers::pi * std::numbers::pi;
  const double width = (hi - 1.0) / spec.panels;
  RootSpec rs;
  rs.x_tol = spec.root_x_tol;
  auto f = [&](double mu) { return helmholtz_boundary_value(dim, mu, spec.ode_rel_tol); };

  double mu = 0.0;
  double a = 1.0, fa = f(a);
  bool found = false;
  for (int k = 1; k <= spec.panels && !found; ++k) {
    const double b = 1.0 + k * width;
    const double fb = f(b);
    if ((fa > 0) != (fb > 0)) {
      mu = find_root(f, a, b, rs);
      found = true;
    }
    a = b;
    fa = fb;
  }
  if (!found) throw NonConvergence("compute_eigenpair: no sign change in the eigenvalue sweep");

  auto table = std::make_shared<HermiteTable>();
  const int m = spec.grid_intervals;
  table->intervals = m;
  table->x.resize(m + 1);
  for (int k = 0; k <= m; ++k) table->x[k] = 0.5 * (1.0 - std::cos(std::numbers::pi * k / m));
  table->x[0] = 0.0;
  table->x[m] = 1.0;
  table->f.resize(m + 1);
  table->d.resize(m + 1);
  table->s.resize(m + 1);

  const auto rhs = helmholtz_rhs(n, mu);
  const auto ode = helmholtz_ode(spec.ode_rel_tol, spec.ode_abs_tol);
  std::array<double, 2> y = taylor_start(n, mu, kStart);
  double r = kStart;
  table->f[0] = 1.0;
  table->d[0] = 0.0;
  table->s[0] = -mu / n;
  for (int k = 1; k <= m; ++k) {
    const double target = table->x[k];
    if (target <= kStart) {
      const auto t = taylor_start(n, mu, target);
      table->f[k] = t[0];
      table->d[k] = t[1];
    } else {
      if (target > r) {
        OdeSpec local = ode;
        local.h_init = std::min(1e-6, 0.5 * (target - r));
        local.h_min = std::min(local.h_min, local.h_init);
        const auto sol = solve_ivp(rhs, y, r, target, local);
        const auto last = sol.final_state();
        y = {last[0], last[1]};
        r = target;
      }
      table->f[k] = y[0];
      table->d[k] = y[1];
    }
    table->s[k] = -(n - 1) / target * table->d[k] - mu * table->f[k];
  }
  table->f[m] = 0.0; // boundary condition at the computed root
  table->s[m] = -(n - 1) * table->d[m];

  // normalize in L2 with the volume weight
  auto raw = [table](double x) { return table->value(x); };
  QuadratureSpec qs;
  qs.rel_tol = spec.quad_rel_tol;
  const double area = dim.sphere_area();
  const double norm_sq =
      area * integrate([&](double x) { const double v = raw(x); return v * v * std::pow(x, n - 1); }, 0.0, 1.0, qs);
  const double scale = 1.0 / std::sqrt(norm_sq);
  for (int k = 0; k <= m; ++k) {
    table->f[k] *= scale;
    table->d[k] *= scale;
    table->s[k] *= scale;
  }

  RadialFunction e1(
      dim, [table](double x) { return table->value(x); },
      [table](double x) { return table->derivative(x); });
  const double check = e1.integrate_of([](double u, double) { return u * u; }, qs);
  return EigenPair{dim, mu, std::move(e1), table->f[0], std::sqrt(check)};
}

EigenFunctionals eigen_functionals(const EigenPair& pair, const QuadratureSpec& spec) {
  const double q = pair.dim.exponent() + 1.0;
  const auto& e = pair.eigenfunction;
  return {pair.center_value, e.integrate_of([](double u, double) { return u * u; }, spec),
          e.integrate_of([q](double u, double) { return std::pow(std::abs(u), q); }, spec)};
}

} // namespace bnlab
