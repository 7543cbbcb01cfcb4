#include "ddm/many_domain.hpp"

#include <cmath>

namespace ddm {

ScalingWeights many_domain_weights(double nu_red, double nu_black) {
  const auto w = sqrt_weights(nu_red, nu_black);
  return {w[0], w[1]};
}

ScalingWeights flux_weights(double nu_red, double nu_black) {
  const auto w = sqrt_weights(nu_red, nu_black);
  return {w[1], w[0]};
}

ManyDomainProblem::ManyDomainProblem(int n, int N, double nu_red, double nu_black,
                                     const ScalarField& f) {
  const Mesh mesh = build_mesh(n);
  part_ = partition_redblack(mesh, N);
  sys_ = assemble(mesh, CoefficientField::checkerboard(N, nu_red, nu_black), f);
  mass_ = interface_mass(mesh, part_);

  swapped_ = nu_red > nu_black;
  red_ = swapped_ ? 1 : 0;
  nu_r_ = swapped_ ? nu_black : nu_red;
  nu_b_ = swapped_ ? nu_red : nu_black;

  red_sub_ = std::make_shared<SubdomainSolver>(red_matrix(), red_interior(), part_.interface);
  black_sub_ = std::make_shared<SubdomainSolver>(black_matrix(), black_interior(), part_.interface);
  u_ref_ = factor_solve(sys_.A, sys_.f);
}

const IndexSet& ManyDomainProblem::red_interior() const {
  return swapped_ ? part_.interior_black : part_.interior_red;
}

const IndexSet& ManyDomainProblem::black_interior() const {
  return swapped_ ? part_.interior_red : part_.interior_black;
}

namespace {

// Free-dof vector from an interface trace on Gamma by interior Dirichlet solves of both colors.
struct TraceCompletion {
  std::shared_ptr<const SubdomainSolver> red, black;
  Vector red_load, black_load;
  IndexSet interface;
  Index ndof = 0;

  explicit TraceCompletion(const ManyDomainProblem& pb)
      : red(pb.red()),
        black(pb.black()),
        red_load(gather(pb.red_load(), pb.red()->interior())),
        black_load(gather(pb.black_load(), pb.black()->interior())),
        interface(pb.partition().interface),
        ndof(pb.system().A.rows()) {}

  Vector operator()(const Vector& trace) const {
    Vector u = Vector::Zero(ndof);
    scatter(trace, interface, u);
    scatter(red->dirichlet_solve(red_load, trace), red->interior(), u);
    scatter(black->dirichlet_solve(black_load, trace), black->interior(), u);
    return u;
  }
};

} // namespace

InterfaceSystem build_primal_system(const ManyDomainProblem& pb, Method method,
                                    const ScalingWeights& w) {
  if (method != Method::dn && method != Method::nn)
    throw std::invalid_argument("build_primal_system: method must be D-N or N-N");
  const auto& part = pb.partition();
  const auto tilde = std::make_shared<const TildeSchur>(
      pb.system().A, concat(part.interior_red, part.interior_black), part.delta, part.cross);
  const auto inv_black = std::make_shared<const TildeSchurInverse>(
      pb.black_matrix(), pb.black_interior(), part.delta, part.cross);

  InterfaceSystem sys;
  sys.kind = InterfaceSystem::Kind::primal;
  sys.method = method;
  const Index dim = tilde->dim();
  sys.op = {dim, [tilde](const Vector& u) -> Vector { return tilde->apply(u); }};
  sys.rhs = tilde->condensed_load(pb.system().f);

  if (method == Method::dn) {
    sys.precond = {dim, [inv_black](const Vector& r) -> Vector { return inv_black->apply(r); }};
  } else {
    const auto inv_red = std::make_shared<const TildeSchurInverse>(
        pb.red_matrix(), pb.red_interior(), part.delta, part.cross);
    const double r2 = w.red * w.red, b2 = w.black * w.black;
    sys.precond = {dim, [inv_red, inv_black, r2, b2](const Vector& r) -> Vector {
                     return r2 * inv_red->apply(r) + b2 * inv_black->apply(r);
                   }};
  }

  const Vector f = pb.system().f;
  sys.recover = [tilde, f](const Vector& u_delta) { return tilde->complete(u_delta, f); };
  return sys;
}

InterfaceSystem build_flux_system(const ManyDomainProblem& pb, const ScalingWeights& w) {
  const auto red = pb.red();
  const auto black = pb.black();
  const auto s_red = std::make_shared<const ShiftedSchur>(red, pb.mass(), 0.0, 1);
  const auto s_black = std::make_shared<const ShiftedSchur>(black, pb.mass(), 0.0, 1);

  const Vector f_red = red->condensed_load(pb.red_load());
  const Vector f_black = black->condensed_load(pb.black_load());

  InterfaceSystem sys;
  sys.kind = InterfaceSystem::Kind::flux;
  sys.method = Method::dd;
  const Index dim = red->trace_size();
  sys.op = {dim, [s_red, s_black](const Vector& x) -> Vector {
              return s_red->solve(x) + s_black->solve(x);
            }};
  sys.rhs = s_black->solve(f_black) - s_red->solve(f_red);
  const double r2 = w.red * w.red, b2 = w.black * w.black;
  sys.precond = {dim, [red, black, r2, b2](const Vector& x) -> Vector {
                   return r2 * red->schur_apply(x) + b2 * black->schur_apply(x);
                 }};

  // nu-weighted average of the one-sided traces, as in the two-subdomain D-D recovery.
  sys.recover = [complete = TraceCompletion(pb), s_red, s_black, f_red, f_black, nu_r = pb.nu_red(),
                 nu_b = pb.nu_black()](const Vector& lambda) {
    const Vector u_red = s_red->solve(f_red + lambda);
    const Vector u_black = s_black->solve(f_black - lambda);
    return complete(Vector((nu_r * u_red + nu_b * u_black) / (nu_r + nu_b)));
  };
  return sys;
}

InterfaceSystem build_robin_system(const ManyDomainProblem& pb, double gamma_red,
                                   double gamma_black) {
  const auto red = pb.red();
  const auto black = pb.black();
  const SparseMatrix& m = pb.mass();
  const auto minus_black = std::make_shared<const ShiftedSchur>(black, m, gamma_red, -1);
  const auto plus_red = std::make_shared<const ShiftedSchur>(red, m, gamma_red, 1);
  const auto plus_black = std::make_shared<const ShiftedSchur>(black, m, gamma_black, 1);
  const auto mass_solver = std::make_shared<const DirectSolver>(m);
  const auto mass = std::make_shared<const SparseMatrix>(m);

  const Vector f_red = red->condensed_load(pb.red_load());
  const Vector f_black = black->condensed_load(pb.black_load());

  InterfaceSystem sys;
  sys.kind = InterfaceSystem::Kind::robin;
  sys.method = Method::rr;
  const Index dim = red->trace_size();
  sys.op = {dim, [minus_black, plus_red, mass](const Vector& g) -> Vector {
              const Vector mg = (*mass) * g;
              return (*mass) * Vector(minus_black->solve(mg) - plus_red->solve(mg));
            }};
  sys.rhs = m * Vector(minus_black->solve(f_black) + plus_red->solve(f_red));
  const double gsum = gamma_red + gamma_black;
  sys.precond = {dim, [plus_black, mass_solver, gsum](const Vector& r) -> Vector {
                   return gsum * plus_black->solve(r) - mass_solver->solve(r);
                 }};

  sys.recover = [complete = TraceCompletion(pb), plus_red, mass, f_red](const Vector& g) {
    return complete(plus_red->solve(f_red + (*mass) * g));
  };
  return sys;
}

InterfaceSystem build_system(const ManyDomainProblem& pb, Method method,
                             const ManyDomainOptions& opt) {
  switch (method) {
    case Method::dn:
    case Method::nn:
      return build_primal_system(pb, method, many_domain_weights(pb.nu_red(), pb.nu_black()));
    case Method::dd: return build_flux_system(pb, flux_weights(pb.nu_red(), pb.nu_black()));
    case Method::rr: {
      const double gr = opt.gamma_red > 0.0 ? opt.gamma_red : 16.0 * pb.nu_black() / pb.h();
      const double gb = opt.gamma_black > 0.0 ? opt.gamma_black : pb.nu_red() * pb.H() / 2.0;
      return build_robin_system(pb, gr, gb);
    }
  }
  throw std::invalid_argument("build_system: unknown method");
}

ManyDomainResult solve(const ManyDomainProblem& pb, const InterfaceSystem& system, double rtol,
                       int max_iter) {
  ManyDomainResult out;
  auto res = pcg(system.op, system.precond, system.rhs, rtol, max_iter);
  out.interface = std::move(res.x);
  out.log = std::move(res.log);
  out.solution = system.recover(out.interface);
  const double ref = pb.reference_solution().norm();
  out.solution_error = (out.solution - pb.reference_solution()).norm() / (ref > 0.0 ? ref : 1.0);
  return out;
}

} // namespace ddm
