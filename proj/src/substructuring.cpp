#include "ddm/substructuring.hpp"

#include <algorithm>
#include <sstream>

namespace ddm {

namespace {

constexpr Index kCoarseChunk = 64;

// Triplets of `block` shifted by (row0, col0), scaled by s.
void append_block(std::vector<Eigen::Triplet<double>>& out, const SparseMatrix& block, Index row0,
                  Index col0, double s) {
  for (Index c = 0; c < block.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(block, c); it; ++it)
      out.emplace_back(row0 + it.row(), col0 + it.col(), s * it.value());
}

} // namespace

// ---------------------------------------------------------------------------
// SubdomainSolver

SubdomainSolver::SubdomainSolver(const SparseMatrix& part, IndexSet interior, IndexSet trace)
    : interior_(std::move(interior)), trace_(std::move(trace)) {
  a_ii_ = extract_block(part, interior_, interior_);
  a_ig_ = extract_block(part, interior_, trace_);
  a_gi_ = extract_block(part, trace_, interior_);
  a_gg_ = extract_block(part, trace_, trace_);
  solver_ = DirectSolver(a_ii_);
}

Vector SubdomainSolver::harmonic_extension(const Eigen::Ref<const Vector>& g) const {
  return -solver_.solve(Vector(a_ig_ * g));
}

Vector SubdomainSolver::dirichlet_solve(const Eigen::Ref<const Vector>& load_interior,
                                        const Eigen::Ref<const Vector>& g) const {
  return solver_.solve(Vector(load_interior - a_ig_ * g));
}

Vector SubdomainSolver::schur_apply(const Eigen::Ref<const Vector>& u) const {
  return a_gg_ * u + a_gi_ * harmonic_extension(u);
}

Vector SubdomainSolver::condensed_load(const Eigen::Ref<const Vector>& global_load) const {
  const Vector f_i = gather(global_load, interior_);
  return gather(global_load, trace_) - a_gi_ * solver_.solve(f_i);
}

Vector SubdomainSolver::trace_residual(const Eigen::Ref<const Vector>& u_interior,
                                       const Eigen::Ref<const Vector>& u_trace) const {
  return a_gi_ * u_interior + a_gg_ * u_trace;
}

Matrix SubdomainSolver::dense_schur() const {
  check_dense_cap(trace_size());
  const Matrix ext = solver_.solve_many(Matrix(a_ig_));
  Matrix s = Matrix(a_gg_) - a_gi_ * ext;
  return 0.5 * (s + s.transpose());
}

LinearOperator schur_operator(std::shared_ptr<const SubdomainSolver> sub) {
  const Index dim = sub->trace_size();
  return {dim, [sub](const Vector& u) -> Vector { return sub->schur_apply(u); }};
}

// ---------------------------------------------------------------------------
// CoarseElimination

CoarseElimination::CoarseElimination(const SparseMatrix& k, const IndexSet& fine,
                                     const IndexSet& coarse) {
  k_ff_ = extract_block(k, fine, fine);
  k_fc_ = extract_block(k, fine, coarse);
  k_cf_ = extract_block(k, coarse, fine);
  fine_solver_ = DirectSolver(k_ff_);

  const Index nc = Index(coarse.size());
  s_cc_ = Matrix(extract_block(k, coarse, coarse));
  for (Index c0 = 0; c0 < nc; c0 += kCoarseChunk) {
    const Index w = std::min(kCoarseChunk, nc - c0);
    const Matrix rhs = Matrix(k_fc_.middleCols(c0, w));
    const Matrix y = fine_solver_.solve_many(rhs);
    s_cc_.middleCols(c0, w) -= k_cf_ * y;
  }
  s_cc_ = 0.5 * (s_cc_ + s_cc_.transpose()).eval();

  coarse_solver_.compute(s_cc_);
  if (coarse_solver_.info() != Eigen::Success)
    throw SingularCoarseProblem("coarse matrix on the cross points is not positive definite");
}

std::pair<Vector, Vector> CoarseElimination::solve(const Eigen::Ref<const Vector>& r_fine,
                                                   const Eigen::Ref<const Vector>& r_coarse) const {
  const Vector y = fine_solver_.solve(r_fine);
  const Vector x_c = coarse_solver_.solve(Vector(r_coarse - k_cf_ * y));
  Vector x_f = y - fine_solver_.solve(Vector(k_fc_ * x_c));
  return {std::move(x_f), x_c};
}

// ---------------------------------------------------------------------------
// TildeSchur

TildeSchur::TildeSchur(const SparseMatrix& a, IndexSet interior, IndexSet delta, IndexSet cross)
    : interior_(std::move(interior)), delta_(std::move(delta)), cross_(std::move(cross)) {
  a_dd_ = extract_block(a, delta_, delta_);
  a_di_ = extract_block(a, delta_, interior_);
  a_dc_ = extract_block(a, delta_, cross_);
  a_id_ = extract_block(a, interior_, delta_);
  a_cd_ = extract_block(a, cross_, delta_);
  elim_ = std::make_shared<CoarseElimination>(a, interior_, cross_);
}

Vector TildeSchur::apply(const Eigen::Ref<const Vector>& u_delta) const {
  const auto [u_i, u_c] = elim_->solve(-(a_id_ * u_delta), -(a_cd_ * u_delta));
  return a_dd_ * u_delta + a_di_ * u_i + a_dc_ * u_c;
}

Vector TildeSchur::condensed_load(const Eigen::Ref<const Vector>& global_load) const {
  const auto [u_i, u_c] = elim_->solve(gather(global_load, interior_), gather(global_load, cross_));
  return gather(global_load, delta_) - a_di_ * u_i - a_dc_ * u_c;
}

Vector TildeSchur::complete(const Eigen::Ref<const Vector>& u_delta,
                            const Eigen::Ref<const Vector>& global_load) const {
  const Vector r_i = gather(global_load, interior_) - a_id_ * u_delta;
  const Vector r_c = gather(global_load, cross_) - a_cd_ * u_delta;
  const auto [u_i, u_c] = elim_->solve(r_i, r_c);
  Vector u = Vector::Zero(global_load.size());
  scatter(u_i, interior_, u);
  scatter(u_delta, delta_, u);
  scatter(u_c, cross_, u);
  return u;
}

// ---------------------------------------------------------------------------
// TildeSchurInverse

TildeSchurInverse::TildeSchurInverse(const SparseMatrix& part, const IndexSet& interior,
                                     IndexSet delta, IndexSet cross)
    : delta_(std::move(delta)), interior_size_(Index(interior.size())) {
  elim_ = std::make_shared<CoarseElimination>(part, concat(interior, delta_), cross);
}

Vector TildeSchurInverse::apply(const Eigen::Ref<const Vector>& u_delta) const {
  Vector r = Vector::Zero(interior_size_ + dim());
  r.tail(dim()) = u_delta;
  const auto [w, w_c] = elim_->solve(r, Vector::Zero(elim_->coarse_size()));
  return w.tail(dim());
}

// ---------------------------------------------------------------------------
// ShiftedSchur

ShiftedSchur::ShiftedSchur(std::shared_ptr<const SubdomainSolver> sub, SparseMatrix mass,
                           double gamma, int sigma)
    : sub_(std::move(sub)), mass_(std::move(mass)), gamma_(gamma), sigma_(sigma) {
  if (sigma_ != 1 && sigma_ != -1) throw std::invalid_argument("ShiftedSchur: sigma must be +1 or -1");
  if (mass_.rows() != sub_->trace_size())
    throw std::invalid_argument("ShiftedSchur: mass matrix does not match the trace space");

  const Index ni = sub_->interior_size();
  const Index ng = sub_->trace_size();
  std::vector<Eigen::Triplet<double>> entries;
  const double s = double(sigma_);
  append_block(entries, sub_->A_II(), 0, 0, s);
  append_block(entries, sub_->A_IG(), 0, ni, s);
  append_block(entries, sub_->A_GI(), ni, 0, s);
  append_block(entries, sub_->A_GG(), ni, ni, s);
  if (gamma_ != 0.0) append_block(entries, mass_, ni, ni, gamma_);
  SparseMatrix aug(ni + ng, ni + ng);
  aug.setFromTriplets(entries.begin(), entries.end());

  if (sigma_ > 0) {
    solver_ = DirectSolver(aug);
    return;
  }
  solver_ = DirectSolver(aug, true);
  if (solver_.negative_pivots() != ni || !(solver_.min_abs_pivot() > 0.0)) {
    const double ritz = smallest_shifted_ritz(*sub_, mass_, gamma_);
    std::ostringstream os;
    os << "gamma M - S is not positive definite for gamma = " << gamma_
       << " (smallest Ritz value " << ritz << "); increase the Robin parameter";
    throw DefinitenessFailure(os.str(), ritz);
  }
}

Vector ShiftedSchur::apply(const Eigen::Ref<const Vector>& w) const {
  return gamma_ * (mass_ * w) + double(sigma_) * sub_->schur_apply(w);
}

Vector ShiftedSchur::solve(const Eigen::Ref<const Vector>& r) const {
  const Index ni = sub_->interior_size();
  Vector rhs = Vector::Zero(ni + r.size());
  rhs.tail(r.size()) = r;
  return solver_.solve(rhs).tail(r.size());
}

std::pair<Vector, Vector> ShiftedSchur::solve_local(const Eigen::Ref<const Vector>& rhs_interior,
                                                    const Eigen::Ref<const Vector>& rhs_trace) const {
  const Index ni = sub_->interior_size();
  Vector rhs(ni + rhs_trace.size());
  rhs << rhs_interior, rhs_trace;
  const Vector x = solver_.solve(rhs);
  return {x.head(ni), x.tail(rhs_trace.size())};
}

double smallest_shifted_ritz(const SubdomainSolver& sub, const SparseMatrix& mass, double gamma) {
  const LinearOperator op{sub.trace_size(), [&](const Vector& w) -> Vector {
                            return gamma * (mass * w) - sub.schur_apply(w);
                          }};
  try {
    return extreme_eigenvalues(op, identity_operator(sub.trace_size()), 1e-6,
                               int(std::min<Index>(sub.trace_size(), 400)))
        .min;
  } catch (const ConvergenceFailure&) {
    return extreme_eigenvalues(op, identity_operator(sub.trace_size()), 1e-2,
                               int(sub.trace_size()))
        .min;
  }
}

} // namespace ddm
