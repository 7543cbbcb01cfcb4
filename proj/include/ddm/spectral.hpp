#pragma once

#include "ddm/many_domain.hpp"
#include "ddm/sparse_linalg.hpp"
#include "ddm/two_domain.hpp"

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace ddm {

/// Dense matrix whose column j is op(e_j); throws DimensionCapExceeded above kDenseCap.
Matrix materialize(const LinearOperator& op);

/// How interface operators act on V_Gamma when a formula mixes them with the identity.
///  l2:        S_i = M^{-1} Shat_i, the operator induced by the L2 pairing on Gamma.
///  euclidean: S_i = Shat_i, the raw Schur complement matrix.
enum class Pairing { l2, euclidean };

/// Dense error-propagation operator of one stationary sweep for the two-domain methods:
///   R1 = I - theta S2^{-1}(S1 + S2)
///   R2 = I - theta (d1^2 S1^{-1} + d2^2 S2^{-1})(S1 + S2)
///   R3 = I - theta (d1^2 S1 + d2^2 S2)(S1^{-1} + S2^{-1})
///   R4 = I - theta (I - (g1 I - S2)(g2 I + S2)^{-1}(g2 I - S1)(g1 I + S1)^{-1})
/// Sides 1 and 2 are ordered as in TwoDomainProblem::run (smaller coefficient
/// first for D-N and R-R). R1..R3 are invariant under the pairing choice.
Matrix error_operator(Method m, const MethodParams& p, const TwoDomainProblem& pb,
                      Pairing pairing = Pairing::l2);

/// Measured constants of lambda(M^{-1} S0) in [c0, C1/h], S0 the unit-coefficient
/// Schur complement of side 1.
struct SpectrumBounds {
  double c0 = 0.0;
  double C1 = 0.0;
};
SpectrumBounds spectrum_bounds(const TwoDomainProblem& pb);

/// omega(lambda) = -((g1 - nu2 l)/(g1 + nu1 l)) ((g2 - nu1 l)/(g2 + nu2 l)).
double rr_omega(double lambda, double g1, double g2, double nu1, double nu2);

struct OmegaProfile {
  std::vector<double> lambda;
  std::vector<double> omega;
  double argmax = 0.0;
  double max = 0.0;
  double lambda0 = 0.0;  ///< sqrt(g1 g2 / (nu1 nu2))
};
OmegaProfile rr_omega_profile(double g1, double g2, double nu1, double nu2,
                              const std::vector<double>& grid);

/// Geometric grid of `count` points on [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int count);

struct SpectralReport {
  std::string name;
  Method method = Method::dn;
  double nu1 = 1.0, nu2 = 1.0;  ///< nu_R, nu_B for many-domain reports
  double h = 0.0, H = 0.0;
  double theta = 0.0;
  std::vector<std::complex<double>> spectrum;  ///< empty for Lanczos-mode reports
  double rho = 0.0;                            ///< max |lambda|
  double lambda_min = 0.0, lambda_max = 0.0;   ///< real parts, extreme
  double kappa = 0.0;                          ///< lambda_max / lambda_min for SPD pairs
};

/// Spectrum of the materialized error operator R_i.
SpectralReport error_report(Method m, const MethodParams& p, const TwoDomainProblem& pb,
                            Pairing pairing = Pairing::l2);

enum class EigenMode { automatic, dense, lanczos };

/// Extreme eigenvalues and kappa of P^{-1}A for an interface system, from the
/// pencil (A P^{-1} A) x = lambda A x (dense) or Lanczos on P^{-1}A in the A inner product.
SpectralReport condition_report(const ManyDomainProblem& pb, const InterfaceSystem& system,
                                EigenMode mode = EigenMode::automatic);

/// CSV columns: method,nu1,nu2,h,H,theta,rho,kappa (reals with 17 significant digits).
void write_spectral_csv(std::ostream& os, const std::vector<SpectralReport>& reports);

} // namespace ddm
