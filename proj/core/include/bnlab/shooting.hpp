#pragma once

#include "bnlab/constants.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bnlab {

struct ShootSpec {
  double ode_rel_tol = 1e-11;
  double root_x_tol = 1e-13; // on log u0 when refining u(1) = 0
  bool nonlinear = true; // false solves the linear equation -Lap u = lambda u
  int grid_points = 20000;
};

// Coarse outcome of one shot: interior sign changes and the sign of u(1).
struct ShotClass {
  int nodes = 0;
  int boundary_sign = 0;
  bool blew_up = false;
  friend bool operator==(const ShotClass&, const ShotClass&) = default;
};

struct RadialSolution {
  Dimension dim;
  double lambda;
  double u0;
  double concentration; // bubble scale whose center height is u0
  RadialFunction profile;
  double boundary_value;
  int node_count;
  double min_value;
  double energy;
  bool blew_up;
};

// Integrates the radial equation from the center with u(0) = u0.
RadialSolution shoot(Dimension dim, double lambda, double u0, const ShootSpec& spec = {});
ShotClass classify_shot(Dimension dim, double lambda, double u0, const ShootSpec& spec = {});
// u(1) divided by the far-field size of a bubble of height u0
double scaled_boundary_value(Dimension dim, double lambda, double u0, const ShootSpec& spec = {});

// max over log-spaced samples of the pointwise ODE defect, relative to max |u|^p
double ode_residual(const RadialSolution& s, int samples = 100);

// bubble scale with center height u0
double concentration_from_height(Dimension dim, double u0);

struct Bracket {
  double lo, hi;
};

// Log-spaced scan of u0 over [lo, hi]; returns the brackets where the shot
// class switches between the two given classes.
std::vector<Bracket> scan_transitions(Dimension dim, double lambda, double lo, double hi, double per_decade,
                                      ShotClass a, ShotClass b, const ShootSpec& spec = {});

// Solution with exactly one interior zero and u(1) = 0, inside the bracket.
RadialSolution find_nodal(Dimension dim, double lambda, int nodes, Bracket bracket, const ShootSpec& spec = {});
// Positive solution with u(1) = 0, inside the bracket.
RadialSolution find_positive(Dimension dim, double lambda, Bracket bracket, const ShootSpec& spec = {});

struct NodalBranchPoint {
  double eps;
  double lambda;
  double u0;
  double delta_hat;
  double tau_hat;
  double log_delta_hat;
  double log_tau_hat;
  // N = 5, 6: tau_hat / eps^{3/4} and delta_hat / eps^{3/2}.
  // N = 4: eps log(1/tau_hat) and log(delta_hat / (eps e^{-1/eps})).
  double d1_hat;
  double d2_hat;
  double energy;
  int node_count;
  double min_value;
  double separation; // max over [0.3, 0.9] of |u + tau_hat e1| / tau_hat
  double ode_residual;
};

NodalBranchPoint extract_branch_point(const RadialSolution& s, double eps, const EigenPair& pair);

struct BranchResult {
  std::vector<NodalBranchPoint> points;
  std::optional<double> lost_at; // eps where the branch could not be followed
  std::string message;
  bool complete() const { return !lost_at; }
};

struct BranchSpec {
  ShootSpec shoot;
  double cold_lo = 1e-2;
  double cold_hi = 0.0; // 0 picks a dimension-dependent default
  double per_decade = 8.0;
};

// Follows the two-nodal-region branch at lambda = eigenvalue + eps (N = 4) or
// eigenvalue - eps (N = 5, 6) for a decreasing eps grid.
BranchResult continue_branch(Dimension dim, const std::vector<double>& eps_grid, const EigenPair& pair,
                             const BranchSpec& spec = {});

struct AsymptoticFit {
  int dim;
  // N = 5: least-squares slopes of log tau_hat and log delta_hat against log eps
  double amplitude_slope = 0.0;
  double concentration_slope = 0.0;
  // N = 5: tau_hat / eps^{3/4} and delta_hat / eps^{3/2} at the smallest eps
  double amplitude_limit = 0.0;
  double concentration_limit = 0.0;
  // N = 4: eps log(1/tau_hat) and log(delta_hat / (eps e^{-1/eps})) per point
  std::vector<double> eps;
  std::vector<double> exponent_ratio;
  std::vector<double> log_scale_factor;
};

AsymptoticFit fit_asymptotics(const std::vector<NodalBranchPoint>& branch, int dim);

struct ProbeN6Result {
  std::vector<NodalBranchPoint> branch;
  std::optional<double> turning_lambda; // where -min u stops decreasing
  std::optional<double> doubled_positive_height;
};

// Exploratory: follows the N = 6 nodal branch and compares with twice the
// center height of the positive solution at the turning point.
ProbeN6Result probe_n6(const std::vector<double>& eps_grid, const EigenPair& pair, const BranchSpec& spec = {});

} // namespace bnlab
