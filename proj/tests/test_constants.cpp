#include <doctest.h>

#include <bnlab/constants.hpp>
#include <bnlab/errors.hpp>
#include <bnlab/reduced_energy.hpp>

#include <cmath>
#include <numbers>
#include <thread>

using namespace bnlab;

namespace {

constexpr double pi = std::numbers::pi;

// integral over (0, inf) of r^a / (1 + r^2)^b
double beta_moment(double a, double b) { return 0.5 * std::beta((a + 1) / 2, b - (a + 1) / 2); }

double bessel_zero(double order, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((std::cyl_bessel_j(order, mid) > 0) == (std::cyl_bessel_j(order, lo) > 0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::shared_ptr<const ProblemData> data(int n) { return ConstantsCache::shared().get(Dimension(n)); }

} // namespace

TEST_CASE("universal integrals against Beta-function values") {
  const double alpha4 = 2.0 * std::sqrt(2.0);
  const auto u4 = data(4)->universal;
  CHECK(u4.bubble_power == doctest::Approx(std::pow(alpha4, 3) * 2 * pi * pi / 4).epsilon(1e-10));
  CHECK(u4.bubble_power == doctest::Approx(111.662).epsilon(1e-5));
  CHECK_FALSE(u4.bubble_sq.has_value());
  CHECK_THROWS_AS(u4.bubble_sq_or_throw(), Divergent);

  const double alpha5 = std::pow(15.0, 0.75);
  const double omega5 = 8 * pi * pi / 3;
  CHECK(data(5)->universal.bubble_sq_or_throw() ==
        doctest::Approx(alpha5 * alpha5 * omega5 * 3 * pi / 16).epsilon(1e-10));
  CHECK(beta_moment(4, 3) == doctest::Approx(3 * pi / 16).epsilon(1e-14));

  CHECK_THROWS_AS(bubble_power_integral(Dimension(4), 2.0), Divergent);
  CHECK_THROWS_AS(bubble_power_integral(Dimension(3), 2.0), Divergent);
}

TEST_CASE("critical-power integral converges in its tail") {
  for (int n = 3; n <= 6; ++n) {
    const Dimension d(n);
    const double p1 = d.exponent() + 1.0;
    const double a = bubble_power_integral(d, p1, {}, 1e6);
    const double b = bubble_power_integral(d, p1, {}, 2e6);
    CHECK(std::abs(a - b) <= 1e-9 * b);
  }
}

TEST_CASE("Sobolev constant from the Rayleigh quotient") {
  for (int n = 3; n <= 6; ++n) {
    const auto u = data(n)->universal;
    CHECK(u.bubble_critical == doctest::Approx(std::pow(sobolev_from_rayleigh(Dimension(n)), n / 2.0)).epsilon(1e-6));
    CHECK(u.bubble_critical == doctest::Approx(std::pow(u.sobolev, n / 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("four-dimensional coefficients") {
  const auto d = data(4);
  const auto b = coeffs_n4(d->pair, d->universal);
  const double j11 = bessel_zero(1.0, 3.0, 4.5);
  CHECK(b.amplitude_quadratic == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b.concentration_quadratic == doctest::Approx(8 * pi * pi * j11 * j11).epsilon(1e-9));
  CHECK(b.concentration_quadratic == doctest::Approx(1159.2419).epsilon(1e-7));
  CHECK(b.cross == doctest::Approx(d->pair.center_value * 16 * std::sqrt(2.0) * 2 * pi * pi / 4).epsilon(1e-9));
  CHECK_THROWS_AS(coeffs_n4(data(5)->pair, data(5)->universal), DimensionMismatch);
}

TEST_CASE("five-dimensional coefficients") {
  const auto d = data(5);
  const auto a = coeffs_n5(d->pair, d->universal);
  CHECK(a.amplitude_quadratic == doctest::Approx(0.5).epsilon(1e-12));
  // plain quadrature of e1^{10/3} on [0, 1]
  const auto& e = d->pair.eigenfunction;
  const double omega5 = 8 * pi * pi / 3;
  QuadratureSpec qs;
  qs.rel_tol = 1e-12;
  const double direct = omega5 * integrate([&](double r) { return std::pow(e(r), 10.0 / 3.0) * std::pow(r, 4); },
                                           0.0, 1.0, qs);
  CHECK(a.amplitude_power == doctest::Approx(0.3 * direct).epsilon(1e-9));
  const double alpha5 = std::pow(15.0, 0.75);
  CHECK(a.concentration_quadratic ==
        doctest::Approx(d->pair.eigenvalue / 2 * alpha5 * alpha5 * omega5 * 3 * pi / 16).epsilon(1e-9));
  CHECK(a.cross == doctest::Approx(d->pair.center_value * d->universal.bubble_power).epsilon(1e-14));
  CHECK_THROWS_AS(coeffs_n5(data(4)->pair, data(4)->universal), DimensionMismatch);
}

TEST_CASE("linear-theory constants") {
  for (int n : {4, 5}) {
    const auto d = data(n);
    const Dimension dim(n);
    const auto c = linear_constants(d->pair, n == 5 ? std::optional<double>(0.0112) : std::nullopt);
    const double p = dim.exponent();
    const double kernel = std::pow(dim.bubble_constant(), p + 1) * dim.sphere_area() *
                          (beta_moment(n + 3, n + 2) - 2 * beta_moment(n + 1, n + 2) + beta_moment(n - 1, n + 2));
    CHECK(c.kernel_norm > 0.0);
    CHECK(c.kernel_norm == doctest::Approx(kernel).epsilon(1e-9));
    CHECK(c.eigen_norm == doctest::Approx(d->pair.eigenvalue).epsilon(1e-14));
    if (n == 5) {
      REQUIRE(c.interaction.has_value());
      CHECK(*c.interaction > 0.0);
    }
  }
  // closed forms through Bessel functions for N = 4, e1 = e1(0) * 2 J1(j r) / (j r)
  const auto d4 = data(4);
  const auto c4 = linear_constants(d4->pair, std::nullopt);
  const double j = bessel_zero(1.0, 3.0, 4.5);
  const double omega4 = 2 * pi * pi;
  const double e0 = d4->pair.center_value;
  CHECK(c4.eigen_coupling == doctest::Approx(2 * e0 * omega4 / (j * j) * (1 - std::cyl_bessel_j(0.0, j))).epsilon(1e-8));
  CHECK(c4.eigen_coupling_boundary == doctest::Approx(2 * e0 * omega4 * std::cyl_bessel_j(2.0, j) / (j * j)).epsilon(1e-8));
  CHECK(c4.kernel_norm == doctest::Approx(64 * omega4 / 60).epsilon(1e-9));
}

TEST_CASE("shifted profile integral in four dimensions") {
  const Dimension four(4);
  const double omega4 = four.sphere_area();
  CHECK(shifted_profile_integral(four) == doctest::Approx(omega4 * (beta_moment(5, 4) - beta_moment(3, 4))).epsilon(1e-10));
  CHECK(shifted_profile_integral(four) == doctest::Approx(omega4 / 12).epsilon(1e-10));
  // three times the integral, as it enters the boundary correction
  CHECK(3 * shifted_profile_integral(four) == doctest::Approx(omega4 / 4).epsilon(1e-10));
}

TEST_CASE("reduction systems are non-singular") {
  const auto d4 = data(4);
  const auto c4 = linear_constants(d4->pair, std::nullopt);
  const double l1 = d4->pair.eigenvalue;
  CHECK(std::abs(determinant(reduction_matrix(c4, l1, 1e-3))) >= 0.5 * c4.kernel_norm * l1 * c4.eigen_norm);
  for (int n : {4, 5}) {
    const auto d = data(n);
    const auto c = linear_constants(d->pair, std::nullopt);
    for (double delta = 1e-6; delta <= 1e-2; delta *= 1.5)
      CHECK(std::abs(determinant(reduction_matrix(c, d->pair.eigenvalue, delta))) >=
            0.1 * c.kernel_norm * d->pair.eigenvalue * c.eigen_norm);
  }
}

TEST_CASE("coefficients are stable under tolerance halving") {
  QuadratureSpec fine;
  fine.rel_tol = 5e-11;
  for (int n : {4, 5}) {
    const auto d = data(n);
    const auto base = linear_constants(d->pair, std::nullopt);
    const auto half = linear_constants(d->pair, std::nullopt, fine);
    CHECK(half.kernel_norm == doctest::Approx(base.kernel_norm).epsilon(1e-8));
    CHECK(half.kernel_correction == doctest::Approx(base.kernel_correction).epsilon(1e-8));
    CHECK(half.eigen_coupling == doctest::Approx(base.eigen_coupling).epsilon(1e-8));
    CHECK(half.eigen_coupling_boundary == doctest::Approx(base.eigen_coupling_boundary).epsilon(1e-8));
  }
  const auto d4 = data(4);
  const auto b = coeffs_n4(d4->pair, d4->universal);
  const auto bf = coeffs_n4(d4->pair, universal_integrals(Dimension(4), fine), fine);
  CHECK(bf.cross == doctest::Approx(b.cross).epsilon(1e-8));
  const auto d5 = data(5);
  const auto a = coeffs_n5(d5->pair, d5->universal);
  const auto af = coeffs_n5(d5->pair, universal_integrals(Dimension(5), fine), fine);
  CHECK(af.amplitude_power == doctest::Approx(a.amplitude_power).epsilon(1e-8));
  CHECK(af.concentration_quadratic == doctest::Approx(a.concentration_quadratic).epsilon(1e-8));
}

TEST_CASE("constants cache fills once under concurrency") {
  ConstantsCache cache;
  std::vector<std::shared_ptr<const ProblemData>> got(8);
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < got.size(); ++i) pool.emplace_back([&, i] { got[i] = cache.get(Dimension(5), 1e-9); });
  }
  for (const auto& g : got) CHECK(g.get() == got.front().get());
  CHECK(cache.get(Dimension(5), 1e-10).get() != got.front().get());
}
