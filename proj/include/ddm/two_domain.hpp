#pragma once

#include "ddm/assembly.hpp"
#include "ddm/mesh.hpp"
#include "ddm/sparse_linalg.hpp"
#include "ddm/substructuring.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>

namespace ddm {

enum class Method { dn, nn, dd, rr };

const char* to_string(Method m);
/// Accepts "dn", "nn", "dd", "rr" (case-insensitive, dashes ignored).
Method parse_method(const std::string& name);

/// Relaxation theta, weights delta1 + delta2 = 1 (N-N, D-D), Robin gamma1, gamma2 (R-R).
///
/// For D-N and R-R side 1 is the subdomain with the smaller coefficient; the
/// solver swaps the subdomains when nu2 < nu1, so parameters always refer to
/// that ordering.
struct MethodParams {
  double theta = 1.0;
  double delta1 = 0.5;
  double delta2 = 0.5;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
};

/// Parameters that make the symmetric-case error operator vanish (D-N, N-N,
/// D-D) or minimize its bound (R-R). D-D uses the balancing weights
/// delta_i = sqrt(nu_j) / (sqrt(nu1) + sqrt(nu2)).
MethodParams optimal_params(Method m, double nu1, double nu2, double h);

/// Weights sqrt(nu_i) / (sqrt(nu1) + sqrt(nu2)).
std::array<double, 2> sqrt_weights(double nu1, double nu2);

/// Symmetric-case contraction factor of the error operator for these params.
double predicted_rate(Method m, const MethodParams& p, double nu1, double nu2);

/// min{k >= 1 : rho^k < tol}; empty when rho >= 1. For R-R this is an upper bound.
std::optional<int> predicted_iterations(Method m, const MethodParams& p, double nu1, double nu2,
                                        double tol);

struct TwoDomainResult {
  Vector iterate;        ///< final interface iterate (u_G, lambda or g1)
  IterationLog log;
  Vector solution;       ///< recovered free-dof solution
  double solution_error = 0.0;  ///< ||u - u*|| / ||u*||
  bool swapped = false;
};

/// Two subdomains split at x = a with coefficients nu1 (left), nu2 (right).
class TwoDomainProblem {
public:
  TwoDomainProblem(int n, double a, double nu1, double nu2, const ScalarField& f = model_load);

  const AssembledSystem& system() const { return sys_; }
  const TwoDomainPartition& partition() const { return part_; }
  const SparseMatrix& mass() const { return mass_; }
  double nu(int side) const { return nu_[std::size_t(side)]; }
  double h() const { return sys_.mesh.h(); }

  std::shared_ptr<const SubdomainSolver> subdomain(int side) const { return sub_[std::size_t(side)]; }
  const ShiftedSchur& neumann(int side) const { return *neumann_[std::size_t(side)]; }

  /// Direct solution of the global system and its interface trace.
  const Vector& reference_solution() const { return u_ref_; }
  Vector reference_trace() const { return gather(u_ref_, part_.interface); }

  /// Stationary iteration from a zero initial guess until the relative l2
  /// error of the iterate drops strictly below tol, or diverges 10x.
  TwoDomainResult run(Method m, const MethodParams& p, double tol = 1e-8, int max_iter = 1000) const;

private:
  struct Side {
    int index = 0;
    std::shared_ptr<const SubdomainSolver> sub;
    std::shared_ptr<const ShiftedSchur> neumann;
    Vector load_interior;
    Vector load_trace;
  };
  Side side(int s) const;
  /// A^(s)_{G,:} u - f^(s)_G, the flux datum the side-s Neumann problem needs to reproduce u.
  Vector flux_of(const Side& s, const Eigen::Ref<const Vector>& u) const;
  Vector complete_from_trace(const Eigen::Ref<const Vector>& trace) const;

  AssembledSystem sys_;
  TwoDomainPartition part_;
  SparseMatrix mass_;
  std::array<double, 2> nu_{};
  std::array<std::shared_ptr<const SubdomainSolver>, 2> sub_;
  std::array<std::shared_ptr<const ShiftedSchur>, 2> neumann_;
  Vector u_ref_;
};

} // namespace ddm
