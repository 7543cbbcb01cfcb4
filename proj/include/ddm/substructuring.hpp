#pragma once

#include "ddm/sparse_linalg.hpp"
#include "ddm/types.hpp"

#include <Eigen/Cholesky>

#include <memory>
#include <utility>

namespace ddm {

/// Interior/trace block view of one part matrix A^(k) with a cached A_II factorization.
///
/// Index sets are global free-dof numbers; vectors passed in and out are in the
/// local numbering of `interior` or `trace`. For a color class the interior is
/// the union of all subdomain interiors of that color, so A_II is block diagonal.
class SubdomainSolver {
public:
  SubdomainSolver(const SparseMatrix& part, IndexSet interior, IndexSet trace);

  const IndexSet& interior() const { return interior_; }
  const IndexSet& trace() const { return trace_; }
  Index interior_size() const { return Index(interior_.size()); }
  Index trace_size() const { return Index(trace_.size()); }

  const SparseMatrix& A_II() const { return a_ii_; }
  const SparseMatrix& A_IG() const { return a_ig_; }
  const SparseMatrix& A_GI() const { return a_gi_; }
  const SparseMatrix& A_GG() const { return a_gg_; }
  const DirectSolver& interior_solver() const { return solver_; }

  /// -A_II^{-1} A_IG g.
  Vector harmonic_extension(const Eigen::Ref<const Vector>& g) const;
  /// A_II^{-1} (f_I - A_IG g).
  Vector dirichlet_solve(const Eigen::Ref<const Vector>& load_interior,
                         const Eigen::Ref<const Vector>& g) const;
  /// (A_GG - A_GI A_II^{-1} A_IG) u.
  Vector schur_apply(const Eigen::Ref<const Vector>& u) const;
  /// f_G - A_GI A_II^{-1} f_I for a load given in global numbering.
  Vector condensed_load(const Eigen::Ref<const Vector>& global_load) const;
  /// A_GI u_I + A_GG u_G.
  Vector trace_residual(const Eigen::Ref<const Vector>& u_interior,
                        const Eigen::Ref<const Vector>& u_trace) const;
  /// Column-by-column Schur complement; throws DimensionCapExceeded above kDenseCap.
  Matrix dense_schur() const;

private:
  IndexSet interior_;
  IndexSet trace_;
  SparseMatrix a_ii_, a_ig_, a_gi_, a_gg_;
  DirectSolver solver_;
};

LinearOperator schur_operator(std::shared_ptr<const SubdomainSolver> sub);

/// Static condensation of K onto a small coarse set C:
/// S_CC = K_CC - K_CF K_FF^{-1} K_FC, stored dense and Cholesky-factored.
/// S_CC is formed in column chunks so K_FF^{-1} K_FC is never held in full.
class CoarseElimination {
public:
  CoarseElimination(const SparseMatrix& k, const IndexSet& fine, const IndexSet& coarse);

  const Matrix& coarse_matrix() const { return s_cc_; }
  Index fine_size() const { return k_ff_.rows(); }
  Index coarse_size() const { return s_cc_.rows(); }

  /// Solves [K_FF K_FC; K_CF K_CC] (x_F, x_C) = (r_F, r_C).
  std::pair<Vector, Vector> solve(const Eigen::Ref<const Vector>& r_fine,
                                  const Eigen::Ref<const Vector>& r_coarse) const;

private:
  SparseMatrix k_ff_, k_fc_, k_cf_;
  DirectSolver fine_solver_;
  Matrix s_cc_;
  Eigen::LLT<Matrix> coarse_solver_;
};

/// S~ on V_Delta: the Schur complement of A onto Delta after eliminating the
/// interiors I and the cross points C, applied through the coarse problem
/// S_CC u_C = -(A_CD - A_CI A_II^{-1} A_ID) u_D and interior back-substitution.
class TildeSchur {
public:
  TildeSchur(const SparseMatrix& a, IndexSet interior, IndexSet delta, IndexSet cross);

  Index dim() const { return Index(delta_.size()); }
  Vector apply(const Eigen::Ref<const Vector>& u_delta) const;
  const Matrix& coarse_matrix() const { return elim_->coarse_matrix(); }
  /// f~_D = f_D - A_D(IC) A_(IC)^{-1} f_(IC), load in global numbering.
  Vector condensed_load(const Eigen::Ref<const Vector>& global_load) const;
  /// Full free-dof vector from u_D by coarse + interior back-substitution.
  Vector complete(const Eigen::Ref<const Vector>& u_delta,
                  const Eigen::Ref<const Vector>& global_load) const;

private:
  IndexSet interior_, delta_, cross_;
  SparseMatrix a_dd_, a_di_, a_dc_, a_id_, a_cd_;
  std::shared_ptr<CoarseElimination> elim_;
};

/// S~_X^{-1} on V_Delta for one color: solves A^X restricted to (I_X, Delta, C)
/// with right-hand side (0, u_D, 0) via the coarse matrix S~_CC^X.
class TildeSchurInverse {
public:
  /// Throws SingularCoarseProblem if S~_CC^X is not positive definite.
  TildeSchurInverse(const SparseMatrix& part, const IndexSet& interior, IndexSet delta,
                    IndexSet cross);

  Index dim() const { return Index(delta_.size()); }
  Vector apply(const Eigen::Ref<const Vector>& u_delta) const;
  const Matrix& coarse_matrix() const { return elim_->coarse_matrix(); }

private:
  IndexSet delta_;
  Index interior_size_ = 0;
  std::shared_ptr<CoarseElimination> elim_;
};

/// gamma M + sigma S_X on the trace space of `sub`, inverted through the
/// augmented matrix [[sigma A_II, sigma A_IG], [sigma A_GI, sigma A_GG + gamma M]].
///
/// For sigma = -1 the inertia must be exactly |I| negative pivots; otherwise
/// gamma M - S_X is not SPD and construction throws DefinitenessFailure
/// carrying the smallest Ritz value of gamma M - S_X.
class ShiftedSchur {
public:
  ShiftedSchur(std::shared_ptr<const SubdomainSolver> sub, SparseMatrix mass, double gamma,
               int sigma);

  Index dim() const { return sub_->trace_size(); }
  double gamma() const { return gamma_; }
  int sigma() const { return sigma_; }

  /// (gamma M + sigma S) w.
  Vector apply(const Eigen::Ref<const Vector>& w) const;
  /// w with (gamma M + sigma S) w = r.
  Vector solve(const Eigen::Ref<const Vector>& r) const;
  /// (u_I, u_G) solving the local problem (sigma A^X + gamma M) u = (rhs_I, rhs_G);
  /// with sigma = +1 this is the Neumann (gamma = 0) or Robin subdomain solve.
  std::pair<Vector, Vector> solve_local(const Eigen::Ref<const Vector>& rhs_interior,
                                        const Eigen::Ref<const Vector>& rhs_trace) const;

private:
  std::shared_ptr<const SubdomainSolver> sub_;
  SparseMatrix mass_;
  double gamma_;
  int sigma_;
  DirectSolver solver_;
};

/// Smallest Ritz value of gamma M - S for the given solver (Lanczos).
double smallest_shifted_ritz(const SubdomainSolver& sub, const SparseMatrix& mass, double gamma);

} // namespace ddm
