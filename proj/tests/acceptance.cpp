// Acceptance report: one PASS/FAIL line per criterion.
//
//   acceptance            exit status 1 if any criterion fails
//   acceptance --report   print the same lines, exit status 0

#include "ddm/assembly.hpp"
#include "ddm/experiment.hpp"
#include "ddm/many_domain.hpp"
#include "ddm/spectral.hpp"
#include "ddm/two_domain.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace ddm;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> misses;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      misses.push_back(what);
    }
  }
};

int g_failures = 0;

void report(int id, const std::string& title, Outcome& o) {
  std::string text = o.detail.str();
  if (!o.misses.empty()) {
    text += text.empty() ? "" : "; ";
    text += "misses: ";
    const std::size_t shown = std::min<std::size_t>(o.misses.size(), 6);
    for (std::size_t k = 0; k < shown; ++k) text += (k ? ", " : "") + o.misses[k];
    if (o.misses.size() > shown) text += ", ... (" + std::to_string(o.misses.size()) + " total)";
  }
  std::printf("%-4s %2d  %s: %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), text.c_str());
  std::fflush(stdout);
  g_failures += o.pass ? 0 : 1;
}

std::string fmt(double x, const char* spec = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

int threads() {
  ExperimentConfig probe;
  if (std::getenv("DDM_THREADS")) return resolve_threads(probe);
  return int(std::clamp(std::thread::hardware_concurrency(), 1u, 8u));
}

TableArtifact table(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.threads = threads();
  return run_table(cfg);
}

bool is_method_column(const std::string& label) {
  for (const char* m : {"D-N", "N-N", "D-D", "R-R"})
    if (label.rfind(m, 0) == 0) return true;
  return false;
}

/// "table1[1e-2,1e+2,1/16][D-N 1]=2 vs 3"
std::string cell(const TableArtifact& t, std::size_t row, const std::string& col, int got, int want) {
  std::string lead;
  for (std::size_t c = 0; c < t.header.size() && !is_method_column(t.header[c]); ++c)
    lead += (c ? "," : "") + t.rows[row][c];
  return t.name + "[" + lead + "][" + col + "]=" + std::to_string(got) + " vs " + std::to_string(want);
}

// ---------------------------------------------------------------------------

void fem_sanity() {
  Outcome o;
  double previous = 0.0;
  std::string ratios;
  for (int n : {8, 16, 32, 64}) {
    const Mesh mesh = build_mesh(n);
    const auto sys = assemble(mesh, CoefficientField::constant(1.0), model_load);
    const Vector u = Eigen::SimplicialLDLT<SparseMatrix>(sys.A).solve(sys.f);
    const double err = discrete_l2_error(mesh, u, model_solution);
    if (previous > 0.0) {
      const double ratio = previous / err;
      ratios += (ratios.empty() ? "" : ", ") + fmt(ratio, "%.4f");
      o.require(ratio >= 3.6 && ratio <= 4.4, "n=" + std::to_string(n / 2) + " ratio " + fmt(ratio));
    }
    previous = err;
  }
  o.detail << "L2 error ratios n->2n for n=8,16,32: " << ratios;
  report(1, "FEM sanity", o);
}

void symmetric_exactness(const TableArtifact& t1, const TableArtifact& t2) {
  Outcome o;
  double worst = 0.0;
  for (int n : {16, 32, 64})
    for (int k : {2, 4, 6}) {
      const double nu1 = std::pow(10.0, -k), nu2 = std::pow(10.0, k);
      const TwoDomainProblem pb(n, 0.5, nu1, nu2);
      const Matrix s1 = pb.subdomain(0)->dense_schur() / nu1;
      const Matrix s2 = pb.subdomain(1)->dense_schur() / nu2;
      const double rel = (s2 - s1).cwiseAbs().maxCoeff() / s1.cwiseAbs().maxCoeff();
      worst = std::max(worst, rel);
      o.require(rel <= 1e-12, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " " + fmt(rel));
    }
  int ones = 0, cells = 0;
  for (std::size_t r = 0; r < 9; ++r)
    for (const auto& [t, col] : {std::pair{&t1, "D-N θ_opt"}, std::pair{&t1, "N-N θ_opt"},
                                 std::pair{&t2, "D-D θ_opt"}}) {
      const int c = t->count(r, col);
      ++cells;
      ones += c == 1;
      o.require(c == 1, cell(*t, r, col, c, 1));
    }
  o.detail << "max |S2/nu2 - S1/nu1| / |S1/nu1| = " << fmt(worst) << "; optimal-theta runs in 1 iteration: "
           << ones << "/" << cells;
  report(2, "Symmetric exactness", o);
}

// Table 1/2 protocol: reference values within +-1 and the symmetric oracle exact
// unless the predicted terminal error lies within 10% of tol.
void symmetric_table_protocol(Outcome& o, const TableArtifact& t, const std::array<std::array<int, 6>, 9>& reference,
                              int& exact, int& slack) {
  const double tol = 1e-8;
  for (std::size_t r = 0; r < 9; ++r) {
    const int k = 2 * int(r % 3) + 2;
    const int n = 16 << (r / 3);
    const double nu1 = std::pow(10.0, -k), nu2 = std::pow(10.0, k);
    for (std::size_t c = 0; c < 6; ++c) {
      const std::string& col = t.header[3 + c];
      const Method m = parse_method(col.substr(0, 3));
      MethodParams p = optimal_params(m, nu1, nu2, 1.0 / n);
      const std::string label = col.substr(4);
      if (label == "1/2") p.theta = 0.5;
      if (label == "1") p.theta = 1.0;
      if (label == "1/3") p.theta = 1.0 / 3.0;
      if (label == "2/3") p.theta = 2.0 / 3.0;
      const int got = t.count(r, col);
      o.require(std::abs(got - reference[r][c]) <= 1, cell(t, r, col, got, reference[r][c]));

      const auto pred = predicted_iterations(m, p, nu1, nu2, tol);
      if (!pred) {
        o.require(false, cell(t, r, col, got, -1) + " (no convergence predicted)");
        continue;
      }
      const double rho = predicted_rate(m, p, nu1, nu2);
      const double last = std::pow(rho, *pred), before = std::pow(rho, *pred - 1);
      const bool boundary = std::abs(last / tol - 1.0) <= 0.1 || std::abs(before / tol - 1.0) <= 0.1;
      // For R-R the symmetric rate is only an upper bound on the contraction.
      const bool ok = m == Method::rr ? got <= *pred + (boundary ? 1 : 0)
                                      : (got == *pred || (boundary && std::abs(got - *pred) <= 1));
      (got == *pred ? exact : slack) += ok ? 1 : 0;
      o.require(ok, cell(t, r, col, got, *pred) + " (oracle)");
    }
  }
}

void table1(const TableArtifact& t) {
  static const std::array<std::array<int, 6>, 9> reference{{{1, 27, 3, 1, 18, 16},
                                                        {1, 27, 1, 1, 17, 17},
                                                        {1, 27, 1, 1, 17, 17},
                                                        {1, 27, 3, 1, 18, 16},
                                                        {1, 27, 1, 1, 17, 17},
                                                        {1, 27, 1, 1, 17, 17},
                                                        {1, 27, 3, 1, 18, 16},
                                                        {1, 27, 2, 1, 17, 17},
                                                        {1, 27, 1, 1, 17, 17}}};
  Outcome o;
  int exact = 0, slack = 0;
  symmetric_table_protocol(o, t, reference, exact, slack);
  o.detail << "54 cells; oracle exact " << exact << ", boundary +-1 " << slack;
  report(3, "Table 1 reproduction", o);
}

void table2(const TableArtifact& t) {
  static const std::array<std::array<int, 6>, 9> reference{{{1, 18, 16, 2, 27, 2},
                                                        {1, 17, 17, 1, 27, 1},
                                                        {1, 17, 17, 1, 27, 1},
                                                        {1, 18, 16, 2, 27, 2},
                                                        {1, 17, 17, 1, 27, 1},
                                                        {1, 17, 17, 1, 27, 1},
                                                        {1, 18, 16, 2, 27, 2},
                                                        {1, 17, 17, 1, 27, 1},
                                                        {1, 17, 17, 1, 27, 1}}};
  Outcome o;
  int exact = 0, slack = 0;
  symmetric_table_protocol(o, t, reference, exact, slack);
  for (std::size_t r = 0; r < 9; ++r) {
    const int c = t.count(r, "R-R θ_opt");
    if (r % 3 == 0)
      o.require(c <= 2, cell(t, r, "R-R θ_opt", c, 2) + " (<= 2)");
    else
      o.require(std::abs(c - 1) <= 1, cell(t, r, "R-R θ_opt", c, 1));
  }
  o.detail << "54 cells; oracle exact " << exact << ", boundary +-1 " << slack;
  report(4, "Table 2 reproduction", o);
}

void table3(const TableArtifact& t) {
  const std::array<int, 6> fast_dn{4, 2, 2, 1, 1, 1}, fast_rr{5, 2, 2, 1, 1, 1};
  Outcome o;
  std::ostringstream counts;
  for (std::size_t r = 0; r < 6; ++r) {
    for (const char* g : {"Γ1", "Γ2"}) {
      const std::string dn = std::string("D-N ") + g, rr = std::string("R-R ") + g;
      const std::string nn = std::string("N-N ") + g, dd = std::string("D-D ") + g;
      const int flat = std::string(g) == "Γ1" ? 11 : 14;
      o.require(std::abs(t.count(r, dn) - fast_dn[r]) <= 1, cell(t, r, dn, t.count(r, dn), fast_dn[r]));
      o.require(std::abs(t.count(r, rr) - fast_rr[r]) <= 1, cell(t, r, rr, t.count(r, rr), fast_rr[r]));
      o.require(std::abs(t.count(r, nn) - flat) <= 2, cell(t, r, nn, t.count(r, nn), flat));
      o.require(std::abs(t.count(r, dd) - flat) <= 2, cell(t, r, dd, t.count(r, dd), flat));
    }
  }
  for (const char* col : {"D-N Γ1", "D-N Γ2", "R-R Γ1", "R-R Γ2", "N-N Γ1", "N-N Γ2", "D-D Γ1", "D-D Γ2"}) {
    counts << (counts.tellp() > 0 ? " " : "") << col << "=(";
    for (std::size_t r = 0; r < 6; ++r) counts << (r ? "," : "") << t.count(r, col);
    counts << ")";
  }
  o.detail << counts.str();
  report(5, "Table 3 reproduction", o);
}

std::string column_summary(const TableArtifact& t, const std::vector<std::string>& cols) {
  std::ostringstream os;
  for (const auto& col : cols) {
    os << (os.tellp() > 0 ? " " : "") << col << "=(";
    for (std::size_t r = 0; r < t.rows.size(); ++r) os << (r ? "," : "") << t.count(r, col);
    os << ")";
  }
  return os.str();
}

const std::vector<std::string> kMethods{"D-N", "N-N", "D-D", "R-R"};

void table4(const TableArtifact& t) {
  const std::array<std::array<int, 4>, 5> reference{
      {{15, 8, 7, 15}, {17, 10, 8, 17}, {19, 11, 9, 19}, {21, 13, 10, 21}, {23, 14, 11, 23}}};
  Outcome o;
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t r = 0; r < 5; ++r) {
      const int got = t.count(r, kMethods[c]);
      o.require(std::abs(got - reference[r][c]) <= 3, cell(t, r, kMethods[c], got, reference[r][c]));
      if (r > 0)
        o.require(got >= t.count(r - 1, kMethods[c]),
                  kMethods[c] + " decreases at H/h=" + t.rows[r][0]);
    }
  o.detail << column_summary(t, kMethods);
  report(6, "Table 4 reproduction", o);
}

void table5(const TableArtifact& t) {
  const std::array<std::array<int, 4>, 5> reference{
      {{9, 5, 4, 10}, {17, 10, 8, 17}, {20, 10, 8, 20}, {20, 10, 8, 20}, {20, 10, 7, 20}}};
  Outcome o;
  std::ostringstream spreads;
  for (std::size_t c = 0; c < 4; ++c) {
    int lo = 1 << 30, hi = -1;
    for (std::size_t r = 0; r < 5; ++r) {
      const int got = t.count(r, kMethods[c]);
      o.require(std::abs(got - reference[r][c]) <= 3, cell(t, r, kMethods[c], got, reference[r][c]));
      if (r >= 1) {
        lo = std::min(lo, got);
        hi = std::max(hi, got);
      }
    }
    spreads << (c ? " " : "") << kMethods[c] << "=" << hi - lo;
    o.require(hi - lo <= 2, kMethods[c] + " spread over N>=8 is " + std::to_string(hi - lo) + " > 2");
  }
  o.detail << column_summary(t, kMethods) << "; spread N>=8: " << spreads.str();
  report(7, "Table 5 reproduction", o);
}

void table6(const TableArtifact& t) {
  const std::array<int, 6> fast{4, 2, 2, 1, 1, 1};
  Outcome o;
  for (std::size_t r = 0; r < 6; ++r) {
    for (const std::string col : {"D-N", "R-R"})
      o.require(std::abs(t.count(r, col) - fast[r]) <= 1, cell(t, r, col, t.count(r, col), fast[r]));
    o.require(std::abs(t.count(r, "N-N") - 17) <= 3, cell(t, r, "N-N", t.count(r, "N-N"), 17));
    o.require(std::abs(t.count(r, "D-D") - 14) <= 3, cell(t, r, "D-D", t.count(r, "D-D"), 14));
  }
  o.detail << column_summary(t, kMethods);
  report(8, "Table 6 reproduction", o);
}

void spectral_formulas() {
  Outcome o;
  double worst = 0.0;
  int spectra = 0;
  for (int n : {16, 32, 64})
    for (int k : {2, 4, 6}) {
      const double nu1 = std::pow(10.0, -k), nu2 = std::pow(10.0, k), eps = nu1 / nu2;
      const TwoDomainProblem pb(n, 0.5, nu1, nu2);
      const double s = std::sqrt(nu1) + std::sqrt(nu2);
      const double f = 2.0 * (nu1 + nu2) / (s * s);
      const std::array<std::pair<Method, std::vector<double>>, 3> cases{
          {{Method::dn, {0.5, 1.0}}, {Method::nn, {1.0 / 3.0, 2.0 / 3.0}}, {Method::dd, {1.0 / 3.0, 2.0 / 3.0}}}};
      for (const auto& [m, thetas] : cases) {
        std::vector<double> all = thetas;
        all.push_back(optimal_params(m, nu1, nu2, pb.h()).theta);
        for (double theta : all) {
          MethodParams p = optimal_params(m, nu1, nu2, pb.h());
          p.theta = theta;
          const double want = m == Method::dn ? 1.0 - theta * (1.0 + eps) : 1.0 - theta * f;
          const auto rep = error_report(m, p, pb);
          double err = 0.0;
          for (const auto& z : rep.spectrum) err = std::max(err, std::abs(z - std::complex<double>(want, 0.0)));
          worst = std::max(worst, err);
          ++spectra;
          o.require(err <= 1e-10, std::string(to_string(m)) + " n=" + std::to_string(n) + " k=" +
                                      std::to_string(k) + " theta=" + fmt(theta) + " err " + fmt(err));
        }
      }
    }
  double worst_rr = 0.0;
  for (int n : {8, 16})
    for (double eps : {1e-2, 1e-4}) {
      const double nu1 = std::sqrt(eps), nu2 = 1.0 / nu1;
      const TwoDomainProblem pb(n, 0.5, nu1, nu2);
      const auto b = spectrum_bounds(pb);
      MethodParams p = optimal_params(Method::rr, nu1, nu2, pb.h());
      p.gamma1 = b.C1 * nu2 / pb.h();
      p.gamma2 = nu1;
      const double rho = error_report(Method::rr, p, pb).rho;
      worst_rr = std::max(worst_rr, rho / eps);
      o.require(p.gamma2 <= b.c0 * nu1 && rho < eps / 2.0,
                "R-R n=" + std::to_string(n) + " eps=" + fmt(eps) + " rho/eps=" + fmt(rho / eps, "%.4f"));
    }
  o.detail << spectra << " symmetric R1-R3 spectra, max deviation " << fmt(worst)
           << "; max rho(R4)/eps = " << fmt(worst_rr, "%.8f") << " (< 0.5 required, gamma1 = C1 nu2/h, gamma2 = nu1)";
  report(9, "Spectral formulas", o);
}

void condition_shapes() {
  Outcome o;
  const int n = 16, N = 4;
  auto report_for = [&](double eps, Method m) {
    const ManyDomainProblem pb(n, N, eps, 1.0);
    return condition_report(pb, build_system(pb, m), EigenMode::dense);
  };

  const double k_dn6 = report_for(1e-6, Method::dn).kappa;
  o.require(k_dn6 <= 1.01, "kappa(P_DN^-1 S~) at eps=1e-6 is " + fmt(k_dn6, "%.6f"));

  double previous = std::numeric_limits<double>::infinity(), min_ritz = 1.0;
  std::string kappas;
  for (double eps : {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const ManyDomainProblem pb(n, N, eps, 1.0);
    const auto sys = build_system(pb, Method::dn);
    const auto rep = condition_report(pb, sys, EigenMode::dense);
    const auto run = solve(pb, sys, 1e-10, 500);
    kappas += (kappas.empty() ? "" : ",") + fmt(rep.kappa, "%.4g");
    o.require(rep.kappa <= previous * (1.0 + 1e-10), "kappa_DN increases at eps=" + fmt(eps));
    previous = rep.kappa;
    min_ritz = std::min({min_ritz, rep.lambda_min, run.log.ritz_min});
  }
  o.require(min_ritz >= 1.0 - 1e-8, "min Ritz of P_DN^-1 S~ = " + fmt(min_ritz, "%.12f"));

  const double k_nn0 = report_for(1.0, Method::nn).kappa, k_nn6 = report_for(1e-6, Method::nn).kappa;
  o.require(k_nn6 < 2.0 * k_nn0 && k_nn0 < 2.0 * k_nn6,
            "kappa_NN(1e-6)/kappa_NN(1) = " + fmt(k_nn6, "%.4f") + "/" + fmt(k_nn0, "%.4f") + " = " +
                fmt(k_nn6 / k_nn0, "%.3f"));

  int checks = 0;
  for (double eps : {1.0, 1e-3, 1e-6})
    for (Method m : {Method::dn, Method::nn, Method::dd, Method::rr}) {
      const ManyDomainProblem pb(n, N, eps, 1.0);
      const auto sys = build_system(pb, m);
      const Matrix a = materialize(sys.op), p = materialize(sys.precond);
      const double asym = (a - a.transpose()).norm() / a.norm(), psym = (p - p.transpose()).norm() / p.norm();
      const double amin = symmetric_eigenvalues(Matrix(0.5 * (a + a.transpose())))[0];
      const double pmin = symmetric_eigenvalues(Matrix(0.5 * (p + p.transpose())))[0];
      const auto rep = condition_report(pb, sys, EigenMode::dense);
      const auto run = solve(pb, sys);
      const std::string tag = std::string(to_string(m)) + " eps=" + fmt(eps);
      o.require(asym <= 1e-10 && psym <= 1e-10, tag + " asymmetry " + fmt(std::max(asym, psym)));
      o.require(amin > 0.0 && pmin > 0.0 && rep.lambda_min > 0.0 && run.log.ritz_min > 0.0,
                tag + " not positive definite");
      ++checks;
    }
  o.detail << "kappa_DN(eps=1..1e-6) = " << kappas << "; kappa_NN eps=1: " << fmt(k_nn0, "%.4f")
           << ", eps=1e-6: " << fmt(k_nn6, "%.4f") << " (ratio " << fmt(k_nn6 / k_nn0, "%.3f")
           << "); min Ritz P_DN = " << fmt(min_ritz, "%.12f") << "; " << checks
           << " operator/preconditioner pairs symmetric positive definite";
  report(10, "Condition-number shapes", o);
}

void solution_consistency(const std::vector<const TableArtifact*>& tables) {
  Outcome o;
  double worst_stat = 0.0, worst_pcg = 0.0;
  std::size_t runs = 0;
  for (const TableArtifact* t : tables)
    for (const auto& r : t->runs) {
      ++runs;
      const bool pcg = r.N >= 2;
      const double limit = pcg ? 1e-4 : 10.0 * 1e-8;
      (pcg ? worst_pcg : worst_stat) = std::max(pcg ? worst_pcg : worst_stat, r.solution_error);
      o.require(r.converged && r.solution_error <= limit,
                t->name + "[" + std::to_string(r.row) + "][" + r.column + "] error " + fmt(r.solution_error));
    }
  o.detail << runs << " runs; max relative error vs direct solve: stationary " << fmt(worst_stat)
           << " (limit 1e-7), PCG " << fmt(worst_pcg) << " (limit 1e-4)";
  report(11, "Solution consistency", o);
}

} // namespace

int main(int argc, char** argv) {
  const bool report_only = argc > 1 && std::strcmp(argv[1], "--report") == 0;
  const auto start = std::chrono::steady_clock::now();

  fem_sanity();
  const TableArtifact t1 = table(ExperimentKind::table1);
  const TableArtifact t2 = table(ExperimentKind::table2);
  symmetric_exactness(t1, t2);
  table1(t1);
  table2(t2);
  const TableArtifact t3 = table(ExperimentKind::table3);
  table3(t3);
  const TableArtifact t4 = table(ExperimentKind::table4);
  table4(t4);
  const TableArtifact t5 = table(ExperimentKind::table5);
  table5(t5);
  const TableArtifact t6 = table(ExperimentKind::table6);
  table6(t6);
  spectral_formulas();
  condition_shapes();
  solution_consistency({&t1, &t2, &t3, &t4, &t5, &t6});

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("acceptance: %d/11 PASS, %d FAIL (%.1f s, %d threads)\n", 11 - g_failures, g_failures, seconds,
              threads());
  return report_only || g_failures == 0 ? 0 : 1;
}
