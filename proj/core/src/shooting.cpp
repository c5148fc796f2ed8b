#include "bnlab/shooting.hpp"

#include "bnlab/bubble.hpp"
#include "bnlab/errors.hpp"
#include "bnlab/reduced_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

namespace bnlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// f(U + phi) - f(U) for f(u) = |u|^{p-1} u, U > 0, without cancellation.
double nonlinear_increment(double big, double phi, double p) {
  const double u = big + phi;
  if (u > 0.0) return std::pow(big, p) * std::expm1(p * std::log1p(phi / big));
  return -std::pow(-u, p) - std::pow(big, p);
}

// u = U + phi, with U the bubble of height u0 and phi integrated in log radius.
struct Trajectory {
  Dimension dim;
  double lambda;
  double u0;
  double sign; // +1 or -1, u0 carries the magnitude
  Bubble bubble;
  double start;       // first radius handed to the integrator
  double center_rate; // phi ~ -center_rate r^2 / (2N) near the center
  std::shared_ptr<const OdeSolution> sol;
  bool blew_up = false;

  double value(double r) const {
    if (blew_up) return kNaN;
    const int n = dim.value();
    double phi;
    if (r <= start) phi = -center_rate * r * r / (2.0 * n);
    else phi = sol->eval(std::log(std::min(r, 1.0)), 0);
    return sign * (bubble.value(r) + phi);
  }

  double derivative(double r) const {
    if (blew_up) return kNaN;
    const int n = dim.value();
    double dphi;
    if (r <= start) dphi = -center_rate * r / n;
    else dphi = sol->eval(std::log(std::min(r, 1.0)), 1) / r;
    return sign * (bubble.radial_derivative(r) + dphi);
  }

  double boundary_value() const {
    if (blew_up) return kNaN;
    return sign * (bubble.value(1.0) + sol->final_state()[0]);
  }
};

Trajectory integrate_shot(Dimension dim, double lambda, double u0, const ShootSpec& spec) {
  if (u0 == 0.0 || !std::isfinite(u0)) throw DomainError("shoot: u0 must be finite and non-zero");
  const double height = std::abs(u0);
  const double delta = concentration_from_height(dim, height);
  const Bubble bubble(dim, delta);
  const int n = dim.value();
  const double p = dim.exponent();
  const double start = std::min(1e-8, 1e-4 * delta);
  const double rate = spec.nonlinear ? lambda * height : lambda * height - std::pow(height, p);

  Trajectory t{dim, lambda, height, u0 < 0.0 ? -1.0 : 1.0, bubble, start, rate, nullptr, false};

  const bool nonlinear = spec.nonlinear;
  OdeRhs rhs = [bubble, lambda, p, n, nonlinear](double s, std::span<const double> y, std::span<double> dy) {
    const double r = std::exp(s);
    const double big = bubble.value(r);
    const double phi = y[0];
    const double forcing = lambda * (big + phi) +
                           (nonlinear ? nonlinear_increment(big, phi, p) : -std::pow(big, p));
    dy[0] = y[1];
    dy[1] = -(n - 2) * y[1] - r * r * forcing;
  };
  const std::array<double, 2> y0{-rate * start * start / (2.0 * n), -rate * start * start / n};
  OdeSpec os;
  os.rel_tol = spec.ode_rel_tol;
  os.abs_tol = 1e-14 * bubble.value(1.0);
  os.h_init = 1e-3;
  os.h_min = 1e-12;
  os.h_max = 0.25;
  os.dense_output = true;
  try {
    t.sol = std::make_shared<const OdeSolution>(solve_ivp(rhs, y0, std::log(start), 0.0, os));
  } catch (const StepUnderflow&) {
    t.blew_up = true;
  } catch (const NonFinite&) {
    t.blew_up = true;
  }
  return t;
}

// 2e4 sample radii: geometric below 0.01 to see small scales, uniform above.
const std::vector<double>& node_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    constexpr int half = 10000;
    const double lo = std::log(1e-12), hi = std::log(1e-2);
    for (int k = 0; k < half; ++k) g.push_back(std::exp(lo + (hi - lo) * k / half));
    for (int k = 0; k < half; ++k) g.push_back(1e-2 + (1.0 - 1e-2) * k / half);
    return g;
  }();
  return grid;
}

struct SignScan {
  int nodes = 0;
  double min_value = kInf;
};

// With include_boundary a zero squeezed between the last sample and r = 1
// still counts, so that neighbouring shot classes differ by one node.
SignScan scan_signs(const Trajectory& t, bool include_boundary) {
  SignScan out;
  int last = 0;
  auto radii = node_grid();
  if (include_boundary) radii.push_back(1.0);
  for (double r : radii) {
    if (r < t.start) continue;
    const double v = r == 1.0 ? t.boundary_value() : t.value(r);
    out.min_value = std::min(out.min_value, v);
    const int s = (v > 0) - (v < 0);
    if (s != 0) {
      if (last != 0 && s != last) ++out.nodes;
      last = s;
    }
  }
  return out;
}

ShotClass class_of(const Trajectory& t) {
  if (t.blew_up) return {0, 0, true};
  const double b = t.boundary_value();
  return {scan_signs(t, true).nodes, (b > 0) - (b < 0), false};
}

RadialFunction profile_of(const Trajectory& t) {
  auto shared = std::make_shared<const Trajectory>(t);
  return RadialFunction(
      t.dim, [shared](double r) { return shared->value(r); },
      [shared](double r) { return shared->derivative(r); }, {t.bubble.scale()});
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

} // namespace

double concentration_from_height(Dimension dim, double u0) {
  const int n = dim.value();
  return std::exp(2.0 / (n - 2) * (std::log(dim.bubble_constant()) - std::log(std::abs(u0))));
}

RadialSolution shoot(Dimension dim, double lambda, double u0, const ShootSpec& spec) {
  const Trajectory t = integrate_shot(dim, lambda, u0, spec);
  RadialFunction profile = profile_of(t);
  if (t.blew_up) return {dim, lambda, u0, t.bubble.scale(), profile, kNaN, -1, kNaN, kNaN, true};
  const SignScan signs = scan_signs(t, false);
  QuadratureSpec qs;
  qs.rel_tol = 1e-10;
  const double j = energy(profile, lambda, qs);
  return {dim, lambda, u0, t.bubble.scale(), profile, t.boundary_value(), signs.nodes, signs.min_value, j, false};
}

ShotClass classify_shot(Dimension dim, double lambda, double u0, const ShootSpec& spec) {
  return class_of(integrate_shot(dim, lambda, u0, spec));
}

double scaled_boundary_value(Dimension dim, double lambda, double u0, const ShootSpec& spec) {
  const Trajectory t = integrate_shot(dim, lambda, u0, spec);
  if (t.blew_up) throw NonConvergence("shot blew up while refining a root");
  return t.boundary_value() / t.bubble.value(1.0);
}

double ode_residual(const RadialSolution& s, int samples) {
  if (s.blew_up) return kInf;
  const int n = s.dim.value();
  const double p = s.dim.exponent();
  const double lo = std::max(1e-2 * s.concentration, 1e-300);
  const double llo = std::log(lo);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double r = std::exp(llo + (0.0 - llo) * (k + 0.5) / samples);
    const double h = 1e-5 * r;
    const double u = s.profile(r);
    const double du = s.profile.derivative(r);
    const double ddu = (s.profile.derivative(r + h) - s.profile.derivative(r - h)) / (2.0 * h);
    const double defect = ddu + (n - 1) / r * du + s.lambda * u + std::pow(std::abs(u), p - 1.0) * u;
    worst = std::max(worst, std::abs(defect));
  }
  return worst / std::pow(std::abs(s.u0), p);
}

std::vector<Bracket> scan_transitions(Dimension dim, double lambda, double lo, double hi, double per_decade,
                                      ShotClass a, ShotClass b, const ShootSpec& spec) {
  if (!(lo > 0.0 && hi > lo)) throw DomainError("scan_transitions: need 0 < lo < hi");
  const double step = std::log(10.0) / per_decade;
  const double llo = std::log(lo), lhi = std::log(hi);
  const int count = std::max(2, static_cast<int>(std::ceil((lhi - llo) / step)) + 1);
  std::vector<Bracket> out;
  double prev_x = 0.0;
  ShotClass prev{};
  for (int k = 0; k < count; ++k) {
    const double x = std::exp(llo + (lhi - llo) * k / (count - 1));
    const ShotClass c = classify_shot(dim, lambda, x, spec);
    if (k > 0 && ((prev == a && c == b) || (prev == b && c == a))) out.push_back({prev_x, x});
    prev = c;
    prev_x = x;
  }
  return out;
}

namespace {

RadialSolution refine_boundary_root(Dimension dim, double lambda, Bracket bracket, const ShootSpec& spec) {
  auto f = [&](double x) { return scaled_boundary_value(dim, lambda, std::exp(x), spec); };
  RootSpec rs;
  rs.x_tol = spec.root_x_tol;
  rs.max_iter = 300;
  const double x = find_root(f, std::log(bracket.lo), std::log(bracket.hi), rs);
  return shoot(dim, lambda, std::exp(x), spec);
}

} // namespace

RadialSolution find_nodal(Dimension dim, double lambda, int nodes, Bracket bracket, const ShootSpec& spec) {
  if (nodes < 1) throw DomainError("find_nodal: target node count must be >= 1");
  const ShotClass lo = classify_shot(dim, lambda, bracket.lo, spec);
  const ShotClass hi = classify_shot(dim, lambda, bracket.hi, spec);
  // one side has `nodes` zeros and u(1) of the last region's sign, the other one more zero
  const int tail_sign = nodes % 2 == 1 ? -1 : 1;
  const ShotClass inner{nodes, tail_sign, false}, outer{nodes + 1, -tail_sign, false};
  if (!((lo == inner && hi == outer) || (lo == outer && hi == inner)))
    throw NoBracket("find_nodal: bracket does not straddle the nodal boundary");
  RadialSolution s = refine_boundary_root(dim, lambda, bracket, spec);
  if (s.node_count != nodes)
    throw NonConvergence("find_nodal: refined solution has " + std::to_string(s.node_count) + " interior zeros");
  return s;
}

RadialSolution find_positive(Dimension dim, double lambda, Bracket bracket, const ShootSpec& spec) {
  const ShotClass lo = classify_shot(dim, lambda, bracket.lo, spec);
  const ShotClass hi = classify_shot(dim, lambda, bracket.hi, spec);
  const ShotClass inner{0, 1, false}, outer{1, -1, false};
  if (!((lo == inner && hi == outer) || (lo == outer && hi == inner)))
    throw NoBracket("find_positive: bracket does not straddle the positive boundary");
  RadialSolution s = refine_boundary_root(dim, lambda, bracket, spec);
  if (s.node_count != 0) throw NonConvergence("find_positive: refined solution changes sign");
  return s;
}

NodalBranchPoint extract_branch_point(const RadialSolution& s, double eps, const EigenPair& pair) {
  if (s.dim != pair.dim) throw DimensionMismatch("extract_branch_point: dimension mismatch");
  const int n = s.dim.value();
  const auto& e1 = pair.eigenfunction;
  QuadratureSpec qs;
  qs.rel_tol = 1e-10;
  const double tau = -s.profile.integrate_weighted([&](double r) { return s.profile(r) * e1(r); }, qs);
  const double log_delta = 2.0 / (n - 2) * (std::log(s.dim.bubble_constant()) - std::log(std::abs(s.u0)));
  const double log_tau = tau > 0.0 ? std::log(tau) : kNaN;

  double d1, d2;
  if (n == 4) {
    d1 = eps * -log_tau;
    d2 = log_delta - std::log(eps) + 1.0 / eps;
  } else {
    d1 = tau / std::pow(eps, 0.75);
    d2 = std::exp(log_delta) / std::pow(eps, 1.5);
  }

  double sep = 0.0;
  for (int k = 0; k <= 600; ++k) {
    const double r = 0.3 + 0.6 * k / 600.0;
    sep = std::max(sep, std::abs(s.profile(r) + tau * e1(r)));
  }
  return {eps, s.lambda, s.u0, std::exp(log_delta), tau, log_delta, log_tau, d1, d2,
          s.energy, s.node_count, s.min_value, sep / tau, ode_residual(s)};
}

BranchResult continue_branch(Dimension dim, const std::vector<double>& eps_grid, const EigenPair& pair,
                             const BranchSpec& spec) {
  const int n = dim.value();
  if (n < 4) throw DomainError("continue_branch: dimension must be 4, 5 or 6");
  if (pair.dim != dim) throw DimensionMismatch("continue_branch: eigenpair dimension mismatch");
  for (std::size_t i = 0; i < eps_grid.size(); ++i)
    if (!(eps_grid[i] > 0.0) || (i > 0 && !(eps_grid[i] < eps_grid[i - 1])))
      throw DomainError("continue_branch: eps grid must be positive and strictly decreasing");

  const double side = n == 4 ? 1.0 : -1.0;
  const ShotClass inner{1, -1, false}, outer{2, 1, false};
  const double cold_hi = spec.cold_hi > 0.0 ? spec.cold_hi : (n == 4 ? 1e100 : 1e12);
  BranchResult result;

  for (double eps : eps_grid) {
    const double lambda = pair.eigenvalue + side * eps;
    std::optional<Bracket> chosen;
    const auto& pts = result.points;
    if (pts.empty()) {
      const auto found = scan_transitions(dim, lambda, spec.cold_lo, cold_hi, spec.per_decade, inner, outer, spec.shoot);
      // the blow-up branch is the transition with the largest height
      if (!found.empty()) chosen = found.back();
    } else {
      // predict log u0: affine in 1/eps for N = 4, in log eps otherwise
      const auto& last = pts.back();
      double guess_log_delta;
      if (n == 4) {
        double c = -last.log_delta_hat * last.eps;
        double base = 0.0;
        if (pts.size() >= 2) {
          const auto& prev = pts[pts.size() - 2];
          c = (prev.log_delta_hat - last.log_delta_hat) / (1.0 / last.eps - 1.0 / prev.eps);
          base = last.log_delta_hat + c / last.eps;
        }
        guess_log_delta = base - c / eps;
      } else {
        double slope = 1.5;
        if (pts.size() >= 2) {
          const auto& prev = pts[pts.size() - 2];
          slope = (last.log_delta_hat - prev.log_delta_hat) / (std::log(last.eps) - std::log(prev.eps));
        }
        guess_log_delta = last.log_delta_hat + slope * (std::log(eps) - std::log(last.eps));
      }
      const double log_guess = std::log(dim.bubble_constant()) - (n - 2) / 2.0 * guess_log_delta;
      for (double width = 1.0; width <= 32.0 && !chosen; width *= 2.0) {
        const auto found = scan_transitions(dim, lambda, std::exp(log_guess - width), std::exp(log_guess + width),
                                            2.0 * spec.per_decade, inner, outer, spec.shoot);
        double best = kInf;
        for (const auto& b : found) {
          const double d = std::abs(0.5 * (std::log(b.lo) + std::log(b.hi)) - log_guess);
          if (d < best) { best = d; chosen = b; }
        }
      }
    }
    if (!chosen) {
      result.lost_at = eps;
      result.message = "no two-nodal-region transition found at eps = " + std::to_string(eps) +
                       (pts.empty() ? " (cold scan)" : " (warm-started scan)");
      return result;
    }
    try {
      const RadialSolution s = find_nodal(dim, lambda, 1, *chosen, spec.shoot);
      result.points.push_back(extract_branch_point(s, eps, pair));
    } catch (const Error& e) {
      result.lost_at = eps;
      result.message = std::string("refinement failed at eps = ") + std::to_string(eps) + ": " + e.what();
      return result;
    }
  }
  return result;
}

AsymptoticFit fit_asymptotics(const std::vector<NodalBranchPoint>& branch, int dim) {
  if (branch.size() < 4) throw InsufficientData("fit_asymptotics needs at least 4 branch points");
  AsymptoticFit fit;
  fit.dim = dim;
  std::vector<double> le, lt, ld;
  for (const auto& b : branch) {
    fit.eps.push_back(b.eps);
    le.push_back(std::log(b.eps));
    lt.push_back(b.log_tau_hat);
    ld.push_back(b.log_delta_hat);
    fit.exponent_ratio.push_back(b.eps * -b.log_tau_hat);
    fit.log_scale_factor.push_back(b.log_delta_hat - std::log(b.eps) + 1.0 / b.eps);
  }
  fit.amplitude_slope = least_squares_slope(le, lt);
  fit.concentration_slope = least_squares_slope(le, ld);
  const auto smallest = std::min_element(branch.begin(), branch.end(),
                                         [](const auto& a, const auto& b) { return a.eps < b.eps; });
  fit.amplitude_limit = smallest->tau_hat / std::pow(smallest->eps, 0.75);
  fit.concentration_limit = smallest->delta_hat / std::pow(smallest->eps, 1.5);
  return fit;
}

ProbeN6Result probe_n6(const std::vector<double>& eps_grid, const EigenPair& pair, const BranchSpec& spec) {
  const Dimension dim(6);
  ProbeN6Result out;
  const BranchResult br = continue_branch(dim, eps_grid, pair, spec);
  out.branch = br.points;
  if (out.branch.size() < 2) return out;
  std::size_t turn = 0;
  for (std::size_t i = 1; i < out.branch.size(); ++i) {
    if (-out.branch[i].min_value < -out.branch[turn].min_value) turn = i;
  }
  out.turning_lambda = out.branch[turn].lambda;
  const double lambda = *out.turning_lambda;
  const auto brackets = scan_transitions(dim, lambda, spec.cold_lo, 1e8, spec.per_decade,
                                         ShotClass{0, 1, false}, ShotClass{1, -1, false}, spec.shoot);
  if (!brackets.empty()) {
    try {
      out.doubled_positive_height = 2.0 * find_positive(dim, lambda, brackets.back(), spec.shoot).u0;
    } catch (const Error&) {
      out.doubled_positive_height.reset();
    }
  }
  return out;
}

} // namespace bnlab
