#include <doctest.h>

#include <bnlab/bubble.hpp>
#include <bnlab/constants.hpp>
#include <bnlab/errors.hpp>
#include <bnlab/numerics.hpp>
#include <bnlab/reduced_energy.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

using namespace bnlab;

namespace {

std::shared_ptr<const ProblemData> data(int n) { return ConstantsCache::shared().get(Dimension(n)); }

// independent 1D maximizer for oracles
double golden_argmax(const std::function<double(double)>& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-12 * (1.0 + std::abs(a))) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// plain Nelder-Mead, maximizing
std::array<double, 2> nelder_mead_argmax(const std::function<double(double, double)>& f, std::array<double, 2> x0) {
  using P = std::array<double, 2>;
  std::array<P, 3> s{x0, P{x0[0] + 0.2, x0[1]}, P{x0[0], x0[1] + 0.2}};
  auto val = [&](const P& p) { return -f(p[0], p[1]); };
  for (int it = 0; it < 2000; ++it) {
    std::sort(s.begin(), s.end(), [&](const P& a, const P& b) { return val(a) < val(b); });
    const P c{(s[0][0] + s[1][0]) / 2, (s[0][1] + s[1][1]) / 2};
    auto along = [&](double t) { return P{c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])}; };
    const P r = along(-1.0);
    if (val(r) < val(s[0])) {
      const P e = along(-2.0);
      s[2] = val(e) < val(r) ? e : r;
    } else if (val(r) < val(s[1])) {
      s[2] = r;
    } else {
      const P k = along(0.5);
      if (val(k) < val(s[2])) s[2] = k;
      else for (int i = 1; i < 3; ++i) s[i] = {(s[i][0] + s[0][0]) / 2, (s[i][1] + s[0][1]) / 2};
    }
  }
  return s[0];
}

} // namespace

TEST_CASE("reduced energy for N = 4 at its special points") {
  const CoeffsN4 b{1.3, 2.1, 0.7};
  for (double s2 : {0.4, 1.0, 1.7}) {
    const double g = amplitude_exponent(s2);
    CHECK(reduced_energy_n4(0.0, s2, b) == doctest::Approx(-1.3 * g * g).epsilon(1e-15));
  }
  const double s1 = b.cross / (2 * b.concentration_quadratic);
  CHECK(reduced_energy_n4(s1, 1.0, b) ==
        doctest::Approx(-b.amplitude_quadratic + b.cross * b.cross / (4 * b.concentration_quadratic)).epsilon(1e-14));
  const auto grad = reduced_energy_n4_gradient(s1, 1.0, b);
  CHECK(std::abs(grad[0]) <= 1e-12);
  CHECK(std::abs(grad[1]) <= 1e-12);

  const auto& real = data(4);
  const auto c = coeffs_n4(real->pair, real->universal);
  const auto cp = critical_point_n4(c);
  const auto g2 = reduced_energy_n4_gradient(cp.coords[0], cp.coords[1], c);
  CHECK(std::hypot(g2[0], g2[1]) <= 1e-12 * c.cross);
}

TEST_CASE("N = 5 reduced energies against 1D oracles") {
  const CoeffsN5 unit{1.0, 1.0, 1.0, 1.0};
  CHECK(amplitude_energy_n5(1e-9, unit) == doctest::Approx(0.0));
  const double d1 = golden_argmax([&](double x) { return amplitude_energy_n5(x, unit); }, 1e-6, 10.0);
  CHECK(d1 == doctest::Approx(std::pow(0.6, 0.75)).epsilon(1e-8));
  CHECK(d1 == doctest::Approx(0.68173).epsilon(1e-5));
  const double d2 = golden_argmax([&](double x) { return concentration_energy_n5(1.0, x, unit); }, 1e-6, 10.0);
  CHECK(d2 == doctest::Approx(0.5625).epsilon(1e-8));
}

TEST_CASE("critical points and their classification") {
  SUBCASE("unit N = 4 coefficients give a maximum at (1/2, 1)") {
    const CoeffsN4 b{1.0, 1.0, 1.0};
    const auto cp = critical_point_n4(b);
    CHECK(cp.kind == CriticalKind::maximum);
    CHECK(cp.coords[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cp.coords[1] == 1.0);
    const auto nm = nelder_mead_argmax([&](double x, double y) { return reduced_energy_n4(x, y, b); }, {0.2, 0.6});
    CHECK(nm[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(nm[1] == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("unit N = 5 coefficients") {
    const auto cp = critical_point_n5({1.0, 1.0, 1.0, 1.0});
    CHECK(cp.kind == CriticalKind::maximum);
    CHECK(cp.coords[0] == doctest::Approx(0.68173).epsilon(1e-5));
    CHECK(cp.coords[1] == doctest::Approx(0.26142).epsilon(1e-4));
    const double oracle = golden_argmax([&](double x) { return concentration_energy_n5(cp.coords[0], x, {1, 1, 1, 1}); },
                                        1e-6, 10.0);
    CHECK(cp.coords[1] == doctest::Approx(oracle).epsilon(1e-8));
  }
  SUBCASE("zero discriminant is degenerate") {
    CHECK(critical_point_n4({1.0, 2.0, 1.0}).kind == CriticalKind::degenerate);
  }
  SUBCASE("computed N = 4 coefficients give a saddle") {
    const auto& real = data(4);
    const auto cp = critical_point_n4(coeffs_n4(real->pair, real->universal));
    CHECK(cp.kind == CriticalKind::saddle);
    CHECK(cp.coords[0] == doctest::Approx(0.0729235).epsilon(1e-6));
    CHECK(cp.hessian_det < 0.0);
  }
}

TEST_CASE("critical point is invariant under uniform coefficient scaling") {
  const CoeffsN4 b{0.5, 3.2, 9.1};
  const CoeffsN5 a{0.5, 0.8, 2.5, 1.7};
  const auto p4 = critical_point_n4(b);
  const auto p5 = critical_point_n5(a);
  for (double k : {0.01, 3.0, 250.0}) {
    const auto q4 = critical_point_n4({k * b.amplitude_quadratic, k * b.cross, k * b.concentration_quadratic});
    CHECK(q4.coords[0] == doctest::Approx(p4.coords[0]).epsilon(1e-14));
    CHECK(q4.coords[1] == p4.coords[1]);
    CHECK(q4.kind == p4.kind);
    const auto q5 = critical_point_n5({k * a.amplitude_quadratic, k * a.amplitude_power, 2 * k * a.cross,
                                       2 * k * a.concentration_quadratic});
    CHECK(q5.coords[0] == doctest::Approx(p5.coords[0]).epsilon(1e-14));
    CHECK(q5.coords[1] == doctest::Approx(p5.coords[1]).epsilon(1e-14));
  }
  // changing a1/a2 moves the point
  CHECK(critical_point_n5({1.0, 0.8, 2.5, 1.7}).coords[0] != doctest::Approx(p5.coords[0]));
}

TEST_CASE("finite-difference gradient of the N = 4 reduced energy") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> coord(0.05, 3.0), coef(0.1, 5.0);
  for (int i = 0; i < 50; ++i) {
    const CoeffsN4 b{coef(rng), coef(rng), coef(rng)};
    const double s1 = coord(rng), s2 = coord(rng);
    const double h = 1e-5;
    const double d1 = (reduced_energy_n4(s1 + h, s2, b) - reduced_energy_n4(s1 - h, s2, b)) / (2 * h);
    const double d2 = (reduced_energy_n4(s1, s2 + h, b) - reduced_energy_n4(s1, s2 - h, b)) / (2 * h);
    const auto g = reduced_energy_n4_gradient(s1, s2, b);
    CHECK(std::abs(d1 - g[0]) <= 1e-6 * (1.0 + std::abs(g[0])));
    CHECK(std::abs(d2 - g[1]) <= 1e-6 * (1.0 + std::abs(g[1])));
  }
}

TEST_CASE("ansatz shape") {
  const auto& five = data(5);
  const double l1 = five->pair.eigenvalue;
  SUBCASE("zero amplitude is the projected bubble") {
    const auto a = AnsatzParams::raw(Dimension(5), l1 - 0.1, l1, 0.05, 0.0);
    const auto v = build_ansatz(a, five->pair);
    const auto pu = Bubble(Dimension(5), 0.05).projected();
    for (double r : {0.0, 1e-3, 0.05, 0.4, 0.99}) CHECK(v(r) == doctest::Approx(pu(r)).epsilon(1e-15));
  }
  SUBCASE("vanishes on the sphere") {
    const auto v = build_ansatz(AnsatzParams::n5(1e-2, 1.0, 1.0, l1), five->pair);
    CHECK(std::abs(v(1.0)) <= 1e-12 * v(0.0));
  }
  SUBCASE("one sign change, negative on the middle shell") {
    const auto v = build_ansatz(AnsatzParams::n5(1e-3, 1.0, 1.0, l1), five->pair);
    int changes = 0;
    double prev = v(0.0);
    CHECK(prev > 0.0);
    bool negative_middle = true;
    for (int i = 1; i < 10000; ++i) {
      const double r = i / 10000.0;
      const double x = v(r);
      if ((x > 0) != (prev > 0)) ++changes;
      if (r >= 0.3 && r <= 0.9 && !(x < 0)) negative_middle = false;
      prev = x;
    }
    CHECK(changes == 1);
    CHECK(negative_middle);
  }
}

TEST_CASE("energy functional") {
  const auto& five = data(5);
  const Dimension dim(5);
  const RadialFunction zero(dim, [](double) { return 0.0; }, [](double) { return 0.0; });
  CHECK(energy(zero, 3.0) == 0.0);

  // -tau e1: the eigen-equation turns the gradient term into l1 times the L2 term
  const double tau = 0.1;
  const double lambda = five->pair.eigenvalue - 0.5;
  const auto& e1 = five->pair.eigenfunction;
  const RadialFunction u(dim, [&](double r) { return -tau * e1(r); }, [&](double r) { return -tau * e1.derivative(r); });
  const auto fun = eigen_functionals(five->pair);
  const double p = dim.exponent();
  QuadratureSpec fine;
  fine.rel_tol = 1e-12;
  const double closed = 0.5 * tau * tau * (five->pair.eigenvalue - lambda) * fun.integral_sq -
                        std::pow(tau, p + 1) / (p + 1) * fun.integral_critical_power;
  CHECK(energy(u, lambda, fine) == doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("N = 5 energy expansion approaches the amplitude energy") {
  const auto& five = data(5);
  const auto c = coeffs_n5(five->pair, five->universal);
  const auto cp = critical_point_n5(c);
  const double g1 = amplitude_energy_n5(cp.coords[0], c);
  auto scaled = [&](double eps) {
    const auto a = AnsatzParams::n5(eps, cp.coords[0], cp.coords[1], five->pair.eigenvalue);
    return ansatz_energy_excess(a, five->pair, five->universal) / std::pow(eps, 2.5);
  };
  const double at_milli = scaled(1e-3);
  const double at_smallest = scaled(3e-4);
  CHECK(std::abs(at_milli - g1) <= 0.10 * std::abs(g1));
  CHECK(std::abs(at_smallest - g1) <= 0.05 * std::abs(g1));
  CHECK(std::abs(at_smallest - g1) < std::abs(at_milli - g1));

  // the excess matches the plain energy where cancellation is still mild
  const auto a = AnsatzParams::n5(1e-2, cp.coords[0], cp.coords[1], five->pair.eigenvalue);
  const double sob = five->universal.bubble_critical / 5.0;
  QuadratureSpec fine;
  fine.rel_tol = 1e-12;
  const double direct = energy(build_ansatz(a, five->pair), a.lambda, fine) - sob;
  CHECK(ansatz_energy_excess(a, five->pair, five->universal, fine) == doctest::Approx(direct).epsilon(1e-4));
}

TEST_CASE("N = 4 energy expansion at the smallest representable eps") {
  const auto& four = data(4);
  const auto c = coeffs_n4(four->pair, four->universal);
  const double s1 = critical_point_n4(c).coords[0];
  const double psi = reduced_energy_n4(s1, 1.0, c);
  auto ratio = [&](double eps) {
    const auto a = AnsatzParams::n4(eps, s1, 1.0, four->pair.eigenvalue);
    return ansatz_energy_excess(a, four->pair, four->universal) / expansion_prefactor_n4(eps) / psi;
  };
  const double smallest = ratio(0.0035);
  CHECK(smallest > 0.5);
  CHECK(smallest < 2.0);
  CHECK(std::abs(smallest - 1.0) < std::abs(ratio(0.05) - 1.0));
  CHECK_THROWS_AS(expansion_prefactor_n4(0.002), PrecisionLoss);
}

TEST_CASE("residual norm") {
  SUBCASE("projection error only") {
    const auto& five = data(5);
    const Dimension dim(5);
    const double p = dim.exponent(), q = 10.0 / 7.0;
    const Bubble b(dim, 0.1);
    const double ub = b.value(1.0);
    const auto a = AnsatzParams::raw(dim, 0.0, five->pair.eigenvalue, 0.1, 0.0);
    const double oracle = std::pow(dim.sphere_area() * integrate([&](double r) {
      const double u = b.value(r);
      return std::pow(std::pow(u, p) - std::pow(u - ub, p), q) * std::pow(r, 4);
    }, 0.0, 1.0, {1e-12}), 1.0 / q);
    const double got = residual_norm(a, five->pair);
    CHECK(got > 0.0);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-8));
  }
  SUBCASE("N = 5 order") {
    const auto& five = data(5);
    const auto cp = critical_point_n5(coeffs_n5(five->pair, five->universal));
    std::vector<double> ratios;
    for (double eps : {1e-2, 3e-3, 1e-3, 3e-4}) {
      const auto a = AnsatzParams::n5(eps, cp.coords[0], cp.coords[1], five->pair.eigenvalue);
      const double r1 = residual_norm(a, five->pair);
      QuadratureSpec fine;
      fine.rel_tol = 1e-12;
      CHECK(residual_norm(a, five->pair, fine) == doctest::Approx(r1).epsilon(1e-6));
      ratios.push_back(r1 / std::pow(eps, 1.5));
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    CHECK(*hi / *lo <= 3.0);
  }
  SUBCASE("N = 4 order") {
    const auto& four = data(4);
    const double s1 = critical_point_n4(coeffs_n4(four->pair, four->universal)).coords[0];
    std::vector<double> logs;
    for (double eps : {0.3, 0.2, 0.12, 0.08}) {
      const auto a = AnsatzParams::n4(eps, s1, 1.0, four->pair.eigenvalue);
      logs.push_back(std::log(residual_norm(a, four->pair)) + 1.0 / eps - std::log(eps));
    }
    const auto [lo, hi] = std::minmax_element(logs.begin(), logs.end());
    CHECK(*hi - *lo <= std::log(3.0));
  }
}

TEST_CASE("finite-difference energy gradient in the N = 4 scaled variables") {
  const auto& four = data(4);
  const auto c = coeffs_n4(four->pair, four->universal);
  const double s1 = critical_point_n4(c).coords[0];
  const double l1 = four->pair.eigenvalue;
  auto check = [&](double eps, double x, double y) {
    return psi_gradient_check(AnsatzParams::n4(eps, x, y, l1), four->pair, four->universal);
  };
  // at the critical point the s1-ratio shrinks as eps decreases
  double prev = std::abs(check(0.3, s1, 1.0)[0]);
  for (double eps : {0.2, 0.12}) {
    const double now = std::abs(check(eps, s1, 1.0)[0]);
    CHECK(now < prev);
    prev = now;
  }
  // past the critical point the s1-ratio has the sign of -b2
  for (double eps : {0.3, 0.2, 0.12}) CHECK(check(eps, 2 * s1, 1.0)[0] < 0.0);
  // away from s2 = 1 the s2-ratio decays instead of approaching the reduced gradient
  double prev2 = std::abs(check(0.3, s1, 2.0)[1]);
  for (double eps : {0.2, 0.12}) {
    const double now = std::abs(check(eps, s1, 2.0)[1]);
    CHECK(now < prev2);
    prev2 = now;
  }
  CHECK_THROWS_AS(check(0.002, s1, 1.0), PrecisionLoss);
  CHECK_THROWS_AS(psi_gradient_check(AnsatzParams::n5(1e-2, 1.0, 1.0, l1), four->pair, four->universal),
                  DimensionMismatch);
}

TEST_CASE("ansatz window") {
  const double l1 = data(4)->pair.eigenvalue;
  CHECK_THROWS_AS(AnsatzParams::n4(0.1, 1e-4, 1.0, l1), DomainError);
  CHECK_THROWS_AS(AnsatzParams::n4(0.1, 0.5, 2e3, l1), DomainError);
  CHECK_THROWS_AS(AnsatzParams::n5(-0.1, 1.0, 1.0, l1), DomainError);
  CHECK_NOTHROW(AnsatzParams::n4(0.1, 0.5, 1.0, l1));
  // logs keep the N = 4 scales representable where the scales themselves are not
  const auto tiny = AnsatzParams::n4(0.001, 0.5, 1.0, l1);
  CHECK(std::isfinite(tiny.log_concentration));
  CHECK(tiny.concentration() == 0.0);
}
