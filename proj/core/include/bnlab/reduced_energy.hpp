#pragma once

#include "bnlab/constants.hpp"

#include <array>
#include <string_view>

namespace bnlab {

// g(s) = (s - 1)^2 + 1, the exponent profile of the eigenfunction amplitude for N = 4
double amplitude_exponent(double s);

// N = 4 reduced energy and its gradient in (s1, s2)
double reduced_energy_n4(double s1, double s2, const CoeffsN4& c);
std::array<double, 2> reduced_energy_n4_gradient(double s1, double s2, const CoeffsN4& c);

// N = 5 reduced energies: amplitude part and concentration part
double amplitude_energy_n5(double d1, const CoeffsN5& c);
double concentration_energy_n5(double d1, double d2, const CoeffsN5& c);

enum class CriticalKind { maximum, saddle, degenerate };
std::string_view to_string(CriticalKind k);

struct CriticalPoint {
  std::array<double, 2> coords;
  CriticalKind kind;
  double hessian_det;
  double hessian_trace;
};

CriticalPoint critical_point_n4(const CoeffsN4& c);
// Stationary in each slot: d1 for the amplitude part, then d2 given d1.
CriticalPoint critical_point_n5(const CoeffsN5& c);

// Concentration scale and amplitude of the ansatz PU - amplitude * e1, with
// the scaled coordinates they came from. Logs are stored so the N = 4
// exponentials stay representable.
struct AnsatzParams {
  Dimension dim;
  double eps;
  double lambda;
  std::array<double, 2> scaled; // (s1, s2) for N = 4, (d1, d2) for N = 5
  double log_concentration;
  double log_amplitude; // -inf encodes a zero amplitude

  double concentration() const;
  double amplitude() const;

  // lambda = eigenvalue + eps; concentration = eps e^{-1/eps} s1, amplitude = e^{-g(s2)/eps}
  static AnsatzParams n4(double eps, double s1, double s2, double eigenvalue, double margin = 1e-3);
  // lambda = eigenvalue - eps; amplitude = eps^{3/4} d1, concentration = eps^{3/2} d2
  static AnsatzParams n5(double eps, double d1, double d2, double eigenvalue, double margin = 1e-3);
  // raw scales, no scaling law; amplitude may be zero
  static AnsatzParams raw(Dimension dim, double lambda, double eigenvalue, double concentration,
                          double amplitude);
};

RadialFunction build_ansatz(const AnsatzParams& a, const EigenPair& pair);

// J(u) = 1/2 int |u'|^2 - 1/(p+1) int |u|^{p+1} - lambda/2 int u^2 over the unit ball
double energy(const RadialFunction& u, double lambda, const QuadratureSpec& spec = {});

// J(ansatz) - S^{N/2}/N, assembled term by term so that no large cancellation occurs
double ansatz_energy_excess(const AnsatzParams& a, const EigenPair& pair, const UniversalIntegrals& uni,
                            const QuadratureSpec& spec = {});

// L^{2N/(N+2)} norm of the ansatz defect
double residual_norm(const AnsatzParams& a, const EigenPair& pair, const QuadratureSpec& spec = {});

// eps e^{-2/eps}; throws PrecisionLoss below 1e-280
double expansion_prefactor_n4(double eps);

// Finite-difference (s1, s2)-gradient of the ansatz energy divided by eps e^{-2/eps}.
std::array<double, 2> psi_gradient_check(const AnsatzParams& a, const EigenPair& pair,
                                         const UniversalIntegrals& uni, const QuadratureSpec& spec = {});

} // namespace bnlab
