#include "ddm/spectral.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace ddm {

Matrix materialize(const LinearOperator& op) {
  check_dense_cap(op.dim);
  Matrix out(op.dim, op.dim);
  Vector e = Vector::Zero(op.dim);
  for (Index j = 0; j < op.dim; ++j) {
    e[j] = 1.0;
    out.col(j) = op(e);
    e[j] = 0.0;
  }
  return out;
}

namespace {

Matrix inverse(const Matrix& a) { return a.partialPivLu().inverse(); }

} // namespace

Matrix error_operator(Method m, const MethodParams& p, const TwoDomainProblem& pb, Pairing pairing) {
  const bool swap = (m == Method::dn || m == Method::rr) && pb.nu(1) < pb.nu(0);
  Matrix s1 = pb.subdomain(swap ? 1 : 0)->dense_schur();
  Matrix s2 = pb.subdomain(swap ? 0 : 1)->dense_schur();
  if (pairing == Pairing::l2) {
    const Eigen::LLT<Matrix> mass(Matrix(pb.mass()));
    s1 = mass.solve(s1);
    s2 = mass.solve(s2);
  }
  const Index dim = s1.rows();
  const Matrix id = Matrix::Identity(dim, dim);
  const double d1 = p.delta1 * p.delta1, d2 = p.delta2 * p.delta2;

  switch (m) {
    case Method::dn: return id - p.theta * s2.partialPivLu().solve(Matrix(s1 + s2));
    case Method::nn: return id - p.theta * (d1 * inverse(s1) + d2 * inverse(s2)) * (s1 + s2);
    case Method::dd: return id - p.theta * (d1 * s1 + d2 * s2) * (inverse(s1) + inverse(s2));
    case Method::rr: {
      const Matrix t = (p.gamma1 * id - s2) * inverse(p.gamma2 * id + s2) * (p.gamma2 * id - s1) *
                       inverse(p.gamma1 * id + s1);
      return id - p.theta * (id - t);
    }
  }
  return id;
}

SpectrumBounds spectrum_bounds(const TwoDomainProblem& pb) {
  const Matrix s0 = pb.subdomain(0)->dense_schur() / pb.nu(0);
  const Vector lambda = generalized_eigenvalues(s0, Matrix(pb.mass()));
  return {lambda[0], lambda[lambda.size() - 1] * pb.h()};
}

double rr_omega(double lambda, double g1, double g2, double nu1, double nu2) {
  return -((g1 - nu2 * lambda) / (g1 + nu1 * lambda)) * ((g2 - nu1 * lambda) / (g2 + nu2 * lambda));
}

OmegaProfile rr_omega_profile(double g1, double g2, double nu1, double nu2,
                              const std::vector<double>& grid) {
  OmegaProfile out;
  out.lambda = grid;
  out.lambda0 = std::sqrt(g1 * g2 / (nu1 * nu2));
  out.max = -std::numeric_limits<double>::infinity();
  for (double l : grid) {
    const double w = rr_omega(l, g1, g2, nu1, nu2);
    out.omega.push_back(w);
    if (w > out.max) {
      out.max = w;
      out.argmax = l;
    }
  }
  return out;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  std::vector<double> grid;
  if (count < 2) return {lo};
  const double step = std::log(hi / lo) / (count - 1);
  for (int k = 0; k < count; ++k) grid.push_back(lo * std::exp(step * k));
  return grid;
}

SpectralReport error_report(Method m, const MethodParams& p, const TwoDomainProblem& pb,
                            Pairing pairing) {
  SpectralReport r;
  r.name = std::string("R(") + to_string(m) + ")";
  r.method = m;
  r.nu1 = pb.nu(0);
  r.nu2 = pb.nu(1);
  r.h = pb.h();
  r.theta = p.theta;
  const Eigen::VectorXcd ev = general_eigenvalues(error_operator(m, p, pb, pairing));
  r.spectrum.assign(ev.data(), ev.data() + ev.size());
  r.lambda_min = std::numeric_limits<double>::infinity();
  r.lambda_max = -std::numeric_limits<double>::infinity();
  for (const auto& z : r.spectrum) {
    r.rho = std::max(r.rho, std::abs(z));
    r.lambda_min = std::min(r.lambda_min, z.real());
    r.lambda_max = std::max(r.lambda_max, z.real());
  }
  r.kappa = std::numeric_limits<double>::quiet_NaN();
  return r;
}

SpectralReport condition_report(const ManyDomainProblem& pb, const InterfaceSystem& system,
                                EigenMode mode) {
  SpectralReport r;
  r.name = std::string("P^-1 A (") + to_string(system.method) + ")";
  r.method = system.method;
  r.nu1 = pb.nu_red();
  r.nu2 = pb.nu_black();
  r.h = pb.h();
  r.H = pb.H();

  const bool dense = mode == EigenMode::dense ||
                     (mode == EigenMode::automatic && system.op.dim <= kDenseCap);
  if (dense) {
    Matrix a = materialize(system.op);
    Matrix pinv = materialize(system.precond);
    a = 0.5 * (a + a.transpose()).eval();
    pinv = 0.5 * (pinv + pinv.transpose()).eval();
    const Vector lambda = generalized_eigenvalues(a * pinv * a, a);
    for (Index k = 0; k < lambda.size(); ++k) r.spectrum.emplace_back(lambda[k], 0.0);
    r.lambda_min = lambda[0];
    r.lambda_max = lambda[lambda.size() - 1];
  } else {
    const auto ext = extreme_eigenvalues(compose(system.precond, system.op), system.op, 1e-8, 600);
    r.lambda_min = ext.min;
    r.lambda_max = ext.max;
  }
  r.rho = std::max(std::abs(r.lambda_min), std::abs(r.lambda_max));
  r.kappa = r.lambda_max / r.lambda_min;
  return r;
}

void write_spectral_csv(std::ostream& os, const std::vector<SpectralReport>& reports) {
  os << "method,nu1,nu2,h,H,theta,rho,kappa\n";
  char buf[512];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  to_string(r.method), r.nu1, r.nu2, r.h, r.H, r.theta, r.rho, r.kappa);
    os << buf;
  }
}

} // namespace ddm
