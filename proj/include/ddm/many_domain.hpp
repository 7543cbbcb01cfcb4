#pragma once

#include "ddm/assembly.hpp"
#include "ddm/mesh.hpp"
#include "ddm/sparse_linalg.hpp"
#include "ddm/substructuring.hpp"
#include "ddm/two_domain.hpp"

#include <functional>
#include <memory>
#include <string>

namespace ddm {

/// D_R = red I, D_B = black I with red + black = 1.
struct ScalingWeights {
  double red = 0.5;
  double black = 0.5;
};

/// sqrt(nu_R) / (sqrt(nu_R) + sqrt(nu_B)) and its complement (N-N).
ScalingWeights many_domain_weights(double nu_red, double nu_black);
/// The swapped weights sqrt(nu_B) / (...), sqrt(nu_R) / (...) used by the flux preconditioner.
ScalingWeights flux_weights(double nu_red, double nu_black);

/// Red-black checkerboard problem on an N x N array of subdomains with H/h = n/N.
///
/// "Red" always names the color with the smaller coefficient: when the
/// requested nu_red exceeds nu_black the algorithmic roles are swapped, while
/// the physical coefficient layout is kept.
class ManyDomainProblem {
public:
  ManyDomainProblem(int n, int N, double nu_red, double nu_black, const ScalarField& f = model_load);

  const AssembledSystem& system() const { return sys_; }
  const RedBlackPartition& partition() const { return part_; }
  /// Interface mass matrix on Gamma = Delta then C.
  const SparseMatrix& mass() const { return mass_; }
  double h() const { return sys_.mesh.h(); }
  double H() const { return part_.H; }
  bool roles_swapped() const { return swapped_; }
  double nu_red() const { return nu_r_; }
  double nu_black() const { return nu_b_; }

  const SparseMatrix& red_matrix() const { return sys_.part_matrices[std::size_t(red_)]; }
  const SparseMatrix& black_matrix() const { return sys_.part_matrices[std::size_t(1 - red_)]; }
  const Vector& red_load() const { return sys_.part_loads[std::size_t(red_)]; }
  const Vector& black_load() const { return sys_.part_loads[std::size_t(1 - red_)]; }
  const IndexSet& red_interior() const;
  const IndexSet& black_interior() const;

  /// Local Schur complements S_R, S_B on V_Gamma.
  std::shared_ptr<const SubdomainSolver> red() const { return red_sub_; }
  std::shared_ptr<const SubdomainSolver> black() const { return black_sub_; }

  const Vector& reference_solution() const { return u_ref_; }

private:
  AssembledSystem sys_;
  RedBlackPartition part_;
  SparseMatrix mass_;
  int red_ = 0;
  bool swapped_ = false;
  double nu_r_ = 1.0, nu_b_ = 1.0;
  std::shared_ptr<const SubdomainSolver> red_sub_, black_sub_;
  Vector u_ref_;
};

struct InterfaceSystem {
  enum class Kind { primal, flux, robin };

  Kind kind = Kind::primal;
  Method method = Method::dn;
  LinearOperator op;
  LinearOperator precond;
  Vector rhs;
  /// Free-dof solution from the interface solution.
  std::function<Vector(const Vector&)> recover;
};

/// S~ u_D = f~_D with P_DN^{-1} = S~_B^{-1} (method dn) or
/// P_NN^{-1} = dR^2 S~_R^{-1} + dB^2 S~_B^{-1} (method nn).
InterfaceSystem build_primal_system(const ManyDomainProblem& pb, Method method,
                                    const ScalingWeights& w);

/// F = S_R^{-1} + S_B^{-1}, d = S_B^{-1} f_B - S_R^{-1} f_R,
/// P_DD^{-1} = dR^2 S_R + dB^2 S_B on V_Gamma.
InterfaceSystem build_flux_system(const ManyDomainProblem& pb, const ScalingWeights& w);

/// K = M((gR M - S_B)^{-1} - (gR M + S_R)^{-1})M, f* = M(gR M - S_B)^{-1} f_B + M(gR M + S_R)^{-1} f_R,
/// P_RR^{-1} = (gR + gB)(gB M + S_B)^{-1} - M^{-1}.
/// Throws DefinitenessFailure when gR M - S_B is not SPD.
InterfaceSystem build_robin_system(const ManyDomainProblem& pb, double gamma_red, double gamma_black);

struct ManyDomainOptions {
  double rtol = 1e-6;
  int max_iter = 2000;
  /// Robin parameters; nonpositive means the defaults 16 nu_B / h and nu_R H / 2.
  double gamma_red = 0.0;
  double gamma_black = 0.0;
};

/// The interface system of `method` with optimal weights and the default Robin parameters.
InterfaceSystem build_system(const ManyDomainProblem& pb, Method method,
                             const ManyDomainOptions& opt = {});

struct ManyDomainResult {
  Vector interface;
  IterationLog log;
  Vector solution;
  double solution_error = 0.0;  ///< ||u - u*|| / ||u*|| against the global direct solve
};

ManyDomainResult solve(const ManyDomainProblem& pb, const InterfaceSystem& system,
                       double rtol = 1e-6, int max_iter = 2000);

} // namespace ddm
