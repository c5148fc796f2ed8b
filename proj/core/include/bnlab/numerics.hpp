#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace bnlab {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_subdivisions = 2000;
  // maps [a, inf) onto (0, 1] through t = 1/(1 + r - a)
  bool infinite_tail_transform = true;

  void validate() const;
};

struct OdeSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double h_init = 1e-6;
  double h_min = 1e-14;
  double h_max = std::numeric_limits<double>::infinity();
  bool dense_output = true;
  long max_steps = 2'000'000;

  void validate() const;
};

struct RootSpec {
  double x_tol = 1e-12;
  double f_tol = 0.0;
  int max_iter = 200;

  void validate() const;
};

using ScalarFn = std::function<double(double)>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Adaptive Gauss-Kronrod (7/15) quadrature. b may be +infinity.
double integrate(const ScalarFn& f, double a, double b, const QuadratureSpec& spec = {});

// Same, over consecutive breakpoints sharing one global error budget.
// The last breakpoint may be +infinity.
double integrate(const ScalarFn& f, std::span<const double> breakpoints,
                 const QuadratureSpec& spec = {});

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

QuadratureResult integrate_detailed(const ScalarFn& f, std::span<const double> breakpoints,
                                    const QuadratureSpec& spec);

// y' = rhs(t, y); rhs writes dy/dt into its third argument.
using OdeRhs = std::function<void(double, std::span<const double>, std::span<double>)>;

// Trajectory of a Dormand-Prince 5(4) integration. With dense output enabled,
// the continuous extension is available anywhere in the integration range.
class OdeSolution {
public:
  OdeSolution() = default;

  std::size_t dimension() const noexcept { return dim_; }
  double t_begin() const noexcept { return t_.front(); }
  double t_end() const noexcept { return t_.back(); }
  std::span<const double> times() const noexcept { return t_; }
  std::span<const double> state_at_step(std::size_t i) const {
    return {y_.data() + i * dim_, dim_};
  }
  std::span<const double> final_state() const { return state_at_step(t_.size() - 1); }
  std::size_t steps() const noexcept { return t_.size() - 1; }
  long rejected_steps() const noexcept { return rejected_; }
  bool has_dense() const noexcept { return !dense_.empty(); }

  // One state component at time t (requires dense output).
  double eval(double t, std::size_t component) const;
  void eval(double t, std::span<double> out) const;

private:
  friend OdeSolution solve_ivp(const OdeRhs&, std::span<const double>, double, double,
                               const OdeSpec&);
  std::size_t locate(double t) const;

  std::size_t dim_ = 0;
  long rejected_ = 0;
  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> dense_; // 5 * dim_ coefficients per step
};

OdeSolution solve_ivp(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                      const OdeSpec& spec = {});

// Brent's method. Requires f(lo) and f(hi) of opposite sign.
double find_root(const ScalarFn& f, double lo, double hi, const RootSpec& spec = {});

// Golden-section search for a maximum of a unimodal function on [lo, hi].
double golden_section_max(const ScalarFn& f, double lo, double hi, double x_tol = 1e-10);

} // namespace bnlab
