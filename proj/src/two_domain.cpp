#include "ddm/two_domain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace ddm {

const char* to_string(Method m) {
  switch (m) {
    case Method::dn: return "D-N";
    case Method::nn: return "N-N";
    case Method::dd: return "D-D";
    case Method::rr: return "R-R";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  std::string key;
  for (char c : name)
    if (c != '-' && c != '_') key.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  if (key == "dn") return Method::dn;
  if (key == "nn") return Method::nn;
  if (key == "dd") return Method::dd;
  if (key == "rr") return Method::rr;
  throw std::invalid_argument("unknown method '" + name + "' (expected dn, nn, dd or rr)");
}

std::array<double, 2> sqrt_weights(double nu1, double nu2) {
  const double s1 = std::sqrt(nu1), s2 = std::sqrt(nu2);
  return {s1 / (s1 + s2), s2 / (s1 + s2)};
}

namespace {

// Symmetric-case eigenvalue of the preconditioned operator with general weights.
double weighted_factor(Method m, const MethodParams& p, double nu1, double nu2) {
  const double d1 = p.delta1 * p.delta1, d2 = p.delta2 * p.delta2;
  if (m == Method::nn) return d1 * (1.0 + nu2 / nu1) + d2 * (1.0 + nu1 / nu2);
  return d1 * (1.0 + nu1 / nu2) + d2 * (1.0 + nu2 / nu1);
}

} // namespace

MethodParams optimal_params(Method m, double nu1, double nu2, double h) {
  MethodParams p;
  const double lo = std::min(nu1, nu2), hi = std::max(nu1, nu2);
  const double eps = lo / hi;
  switch (m) {
    case Method::dn:
      p.theta = 1.0 / (1.0 + eps);
      break;
    case Method::nn: {
      const auto w = sqrt_weights(nu1, nu2);
      p.delta1 = w[0];
      p.delta2 = w[1];
      p.theta = 1.0 / weighted_factor(m, p, nu1, nu2);
      break;
    }
    case Method::dd: {
      const auto w = sqrt_weights(nu1, nu2);
      p.delta1 = w[1];
      p.delta2 = w[0];
      p.theta = 1.0 / weighted_factor(m, p, nu1, nu2);
      break;
    }
    case Method::rr:
      p.theta = 2.0 / (2.0 + eps);
      p.gamma1 = hi / h;
      p.gamma2 = lo;
      break;
  }
  return p;
}

double predicted_rate(Method m, const MethodParams& p, double nu1, double nu2) {
  const double eps = std::min(nu1, nu2) / std::max(nu1, nu2);
  switch (m) {
    case Method::dn: return std::abs(1.0 - p.theta * (1.0 + eps));
    case Method::nn:
    case Method::dd: return std::abs(1.0 - p.theta * weighted_factor(m, p, nu1, nu2));
    case Method::rr:
      return std::max(std::abs(1.0 - p.theta), std::abs(1.0 - p.theta * (1.0 + eps)));
  }
  return 1.0;
}

std::optional<int> predicted_iterations(Method m, const MethodParams& p, double nu1, double nu2,
                                        double tol) {
  const double rho = predicted_rate(m, p, nu1, nu2);
  if (!(rho < 1.0)) return std::nullopt;
  if (rho < tol) return 1;
  double err = 1.0;
  for (int k = 1; k < 100000; ++k) {
    err *= rho;
    if (err < tol) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

TwoDomainProblem::TwoDomainProblem(int n, double a, double nu1, double nu2, const ScalarField& f)
    : nu_{nu1, nu2} {
  const Mesh mesh = build_mesh(n);
  part_ = partition_two(mesh, a);
  sys_ = assemble(mesh, CoefficientField::two_domain(a, nu1, nu2), f);
  mass_ = interface_mass(mesh, part_);

  const std::array<const IndexSet*, 2> interiors{&part_.interior1, &part_.interior2};
  for (int s = 0; s < 2; ++s) {
    sub_[std::size_t(s)] = std::make_shared<SubdomainSolver>(sys_.part_matrices[std::size_t(s)],
                                                             *interiors[std::size_t(s)], part_.interface);
    neumann_[std::size_t(s)] = std::make_shared<ShiftedSchur>(sub_[std::size_t(s)], mass_, 0.0, 1);
  }
  u_ref_ = factor_solve(sys_.A, sys_.f);
}

TwoDomainProblem::Side TwoDomainProblem::side(int s) const {
  Side out;
  out.index = s;
  out.sub = sub_[std::size_t(s)];
  out.neumann = neumann_[std::size_t(s)];
  out.load_interior = gather(sys_.part_loads[std::size_t(s)], out.sub->interior());
  out.load_trace = gather(sys_.part_loads[std::size_t(s)], part_.interface);
  return out;
}

Vector TwoDomainProblem::flux_of(const Side& s, const Eigen::Ref<const Vector>& u) const {
  return s.sub->trace_residual(gather(u, s.sub->interior()), gather(u, part_.interface)) -
         s.load_trace;
}

Vector TwoDomainProblem::complete_from_trace(const Eigen::Ref<const Vector>& trace) const {
  Vector u = Vector::Zero(sys_.A.rows());
  scatter(trace, part_.interface, u);
  for (int s = 0; s < 2; ++s) {
    const Side sd = side(s);
    scatter(sd.sub->dirichlet_solve(sd.load_interior, trace), sd.sub->interior(), u);
  }
  return u;
}

TwoDomainResult TwoDomainProblem::run(Method m, const MethodParams& p, double tol,
                                      int max_iter) const {
  TwoDomainResult out;
  out.swapped = (m == Method::dn || m == Method::rr) && nu_[1] < nu_[0];
  const Side first = side(out.swapped ? 1 : 0);
  const Side second = side(out.swapped ? 0 : 1);
  const Index ng = Index(part_.interface.size());
  const Vector f_trace = first.load_trace + second.load_trace;

  std::shared_ptr<ShiftedSchur> robin1, robin2;
  if (m == Method::rr) {
    robin1 = std::make_shared<ShiftedSchur>(first.sub, mass_, p.gamma1, 1);
    robin2 = std::make_shared<ShiftedSchur>(second.sub, mass_, p.gamma2, 1);
  }

  Vector reference;
  switch (m) {
    case Method::dn:
    case Method::nn: reference = reference_trace(); break;
    case Method::dd: reference = flux_of(first, u_ref_); break;
    case Method::rr:
      reference = flux_of(first, u_ref_) + p.gamma1 * (mass_ * reference_trace());
      break;
  }

  auto step = [&](const Vector& x) -> Vector {
    switch (m) {
      case Method::dn: {
        const Vector u_i = first.sub->dirichlet_solve(first.load_interior, x);
        const Vector r = f_trace - first.sub->trace_residual(u_i, x);
        const Vector w = second.neumann->solve_local(second.load_interior, r).second;
        return p.theta * w + (1.0 - p.theta) * x;
      }
      case Method::nn: {
        const Vector u1 = first.sub->dirichlet_solve(first.load_interior, x);
        const Vector u2 = second.sub->dirichlet_solve(second.load_interior, x);
        const Vector r = first.sub->trace_residual(u1, x) + second.sub->trace_residual(u2, x) - f_trace;
        const Vector w1 = first.neumann->solve(p.delta1 * r);
        const Vector w2 = second.neumann->solve(p.delta2 * r);
        return x - p.theta * (p.delta1 * w1 + p.delta2 * w2);
      }
      case Method::dd: {
        const Vector u1 = first.neumann->solve_local(first.load_interior, first.load_trace + x).second;
        const Vector u2 = second.neumann->solve_local(second.load_interior, second.load_trace - x).second;
        const Vector jump = u1 - u2;
        const Vector corr = p.delta1 * p.delta1 * first.sub->schur_apply(jump) +
                            p.delta2 * p.delta2 * second.sub->schur_apply(jump);
        return x - p.theta * corr;
      }
      case Method::rr: {
        const double g = p.gamma1 + p.gamma2;
        const Vector u1 = robin1->solve_local(first.load_interior, first.load_trace + x).second;
        const Vector g2 = g * (mass_ * u1) - x;
        const Vector u2 = robin2->solve_local(second.load_interior, second.load_trace + g2).second;
        const Vector g1 = g * (mass_ * u2) - g2;
        return p.theta * g1 + (1.0 - p.theta) * x;
      }
    }
    return x;
  };

  const double ref_norm = reference.norm();
  auto rel_error = [&](const Vector& x) {
    const double e = (x - reference).norm();
    return ref_norm > 0.0 ? e / ref_norm : e;
  };

  Vector x = Vector::Zero(ng);
  const double e0 = rel_error(x);
  for (int k = 0;; ++k) {
    const double e = rel_error(x);
    out.log.history.push_back(e);
    out.log.iterations = k;
    out.log.achieved = e;
    if (e < tol) {
      out.log.status = IterationLog::Status::converged;
      break;
    }
    if (e > 10.0 * std::max(e0, tol) || !std::isfinite(e)) {
      out.log.status = IterationLog::Status::diverged;
      break;
    }
    if (k == max_iter) {
      out.log.status = IterationLog::Status::max_iterations;
      break;
    }
    x = step(x);
  }
  out.iterate = x;

  Vector trace;
  switch (m) {
    case Method::dn:
    case Method::nn: trace = x; break;
    case Method::dd: {
      const Vector u1 = first.neumann->solve_local(first.load_interior, first.load_trace + x).second;
      const Vector u2 = second.neumann->solve_local(second.load_interior, second.load_trace - x).second;
      // The lambda error reaches u_i scaled by 1/nu_i; weighting by nu_i keeps
      // the low-coefficient side from amplifying it.
      const double w1 = nu_[out.swapped ? 1 : 0], w2 = nu_[out.swapped ? 0 : 1];
      trace = (w1 * u1 + w2 * u2) / (w1 + w2);
      break;
    }
    case Method::rr: {
      // Finish the half sweep: the Omega_2 trace carries ~100x less error than u_1.
      const Vector u1 = robin1->solve_local(first.load_interior, first.load_trace + x).second;
      const Vector g2 = (p.gamma1 + p.gamma2) * (mass_ * u1) - x;
      trace = robin2->solve_local(second.load_interior, second.load_trace + g2).second;
      break;
    }
  }
  out.solution = complete_from_trace(trace);
  const double ref = u_ref_.norm();
  out.solution_error = (out.solution - u_ref_).norm() / (ref > 0.0 ? ref : 1.0);
  return out;
}

} // namespace ddm
