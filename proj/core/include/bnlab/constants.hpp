#pragma once

#include "bnlab/spectrum.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace bnlab {

// Integrals over R^N of powers of the unit-scale bubble.
struct UniversalIntegrals {
  Dimension dim;
  std::optional<double> bubble_sq; // empty when the integral diverges
  double bubble_power;             // integral of U^p
  double bubble_critical;          // integral of U^{p+1}
  double sobolev;                  // S with S^{N/2} = bubble_critical

  // throws Divergent when the square integral is infinite
  double bubble_sq_or_throw() const;
};

// integral over R^N (or the ball of radius `truncation`) of U_1^k
double bubble_power_integral(Dimension dim, double k, const QuadratureSpec& spec = {},
                             double truncation = kInf);
double bubble_gradient_sq(Dimension dim, const QuadratureSpec& spec = {});
// S from the Rayleigh quotient of the unit bubble
double sobolev_from_rayleigh(Dimension dim, const QuadratureSpec& spec = {});

UniversalIntegrals universal_integrals(Dimension dim, const QuadratureSpec& spec = {},
                                       double truncation = kInf);

// Energy-expansion coefficients for N = 4:
// reduced energy = -q g^2 + c g s - k s^2 with q, c, k the fields below.
struct CoeffsN4 {
  double amplitude_quadratic;
  double cross;
  double concentration_quadratic;
};

// Energy-expansion coefficients for N = 5.
struct CoeffsN5 {
  double amplitude_quadratic;
  double amplitude_power;
  double cross;
  double concentration_quadratic;
};

CoeffsN4 coeffs_n4(const EigenPair& pair, const UniversalIntegrals& uni,
                   const QuadratureSpec& spec = {});
CoeffsN5 coeffs_n5(const EigenPair& pair, const UniversalIntegrals& uni,
                   const QuadratureSpec& spec = {});

// Constants of the 2x2 linear reduction systems.
struct LinearConstants {
  Dimension dim;
  double kernel_norm;             // leading coefficient of ||PZ||^2 delta^2
  double kernel_correction;       // next-order boundary correction
  double eigen_coupling;          // integral of e1 / |x|^{N-2} over the ball
  double eigen_coupling_boundary; // integral of e1 * H(0, x) over the ball
  std::optional<double> interaction; // needs the concentration factor, N = 5 only
  double eigen_norm;              // (e1, e1) in H^1_0, equal to the eigenvalue
  // the constants of the same names in the N = 4 (PZ, PZ) expansion
  double pz_norm_leading;
  double pz_norm_correction;
};

LinearConstants linear_constants(const EigenPair& pair, std::optional<double> concentration_factor,
                                 const QuadratureSpec& spec = {});

// integral over R^N of (|y|^2 - 1)/(1 + |y|^2)^{(N+4)/2}
double shifted_profile_integral(Dimension dim, const QuadratureSpec& spec = {});

using Matrix2 = std::array<std::array<double, 2>, 2>;

// the reduction system at concentration scale `scale`
Matrix2 reduction_matrix(const LinearConstants& c, double eigenvalue, double scale);
double determinant(const Matrix2& m);

// Eigenpair and universal integrals for one (dimension, tolerance) pair,
// computed once and shared read-only.
struct ProblemData {
  EigenPair pair;
  UniversalIntegrals universal;
};

class ConstantsCache {
public:
  std::shared_ptr<const ProblemData> get(Dimension dim, double quad_rel_tol = 1e-10);
  static ConstantsCache& shared();

private:
  struct Entry {
    std::once_flag once;
    std::shared_ptr<const ProblemData> data;
  };
  std::mutex mutex_;
  std::map<std::pair<int, double>, std::shared_ptr<Entry>> entries_;
};

} // namespace bnlab
