#pragma once

#include "bnlab/radial.hpp"

#include <vector>

namespace bnlab {

// First Dirichlet eigenvalue and L2-normalized positive radial eigenfunction
// of the Laplacian on the unit ball.
struct EigenPair {
  Dimension dim;
  double eigenvalue;
  RadialFunction eigenfunction;
  double center_value;
  double l2_norm; // of the stored eigenfunction, 1 up to quadrature error
};

struct EigenSolveSpec {
  double ode_rel_tol = 1e-12;
  double ode_abs_tol = 1e-14;
  double root_x_tol = 1e-13;
  double quad_rel_tol = 1e-13;
  int panels = 64;
  int grid_intervals = 4096;
};

EigenPair compute_eigenpair(Dimension dim, const EigenSolveSpec& spec = {});

// u(1) for the regular solution of u'' + (N-1)/r u' + mu u = 0, u(0) = 1
double helmholtz_boundary_value(Dimension dim, double mu, double ode_rel_tol = 1e-12);

// Sign changes of the boundary value on (1, 2 N pi^2], in increasing order.
std::vector<double> radial_eigenvalues(Dimension dim, const EigenSolveSpec& spec = {});

struct EigenFunctionals {
  double center_value;
  double integral_sq;
  double integral_critical_power; // integral of e1^{p+1}
};

EigenFunctionals eigen_functionals(const EigenPair& pair, const QuadratureSpec& spec = {});

} // namespace bnlab
