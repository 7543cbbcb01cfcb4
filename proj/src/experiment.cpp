#include "ddm/experiment.hpp"

#include "ddm/many_domain.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ddm {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::pair<ExperimentKind, const char*> kKinds[] = {
    {ExperimentKind::table1, "table1"}, {ExperimentKind::table2, "table2"},
    {ExperimentKind::table3, "table3"}, {ExperimentKind::table4, "table4"},
    {ExperimentKind::table5, "table5"}, {ExperimentKind::table6, "table6"},
    {ExperimentKind::spectra, "spectra"}, {ExperimentKind::custom, "custom"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(x))
    throw std::invalid_argument(key + ": expected a real number, got '" + value + "'");
  return x;
}

int to_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || x < std::numeric_limits<int>::min() ||
      x > std::numeric_limits<int>::max())
    throw std::invalid_argument(key + ": expected an integer, got '" + value + "'");
  return int(x);
}

double positive(const std::string& key, double x) {
  if (!(x > 0.0)) throw std::invalid_argument(key + ": must be positive");
  return x;
}

std::string theta_label(double theta) {
  if (theta == 0.5) return "1/2";
  if (theta == 1.0) return "1";
  if (std::abs(theta - 1.0 / 3.0) < 1e-15) return "1/3";
  if (std::abs(theta - 2.0 / 3.0) < 1e-15) return "2/3";
  return format_real(theta);
}

std::string power_label(int k) {
  return "1e" + std::string(k < 0 ? "-" : "+") + std::to_string(std::abs(k));
}

MethodParams resolve_params(const ExperimentConfig& cfg, Method m, double nu1, double nu2, double h,
                            std::optional<double> theta) {
  MethodParams p = optimal_params(m, nu1, nu2, h);
  if (theta) p.theta = *theta;
  if (cfg.delta1) {
    p.delta1 = *cfg.delta1;
    p.delta2 = cfg.delta2 ? *cfg.delta2 : 1.0 - *cfg.delta1;
  } else if (cfg.delta2) {
    p.delta2 = *cfg.delta2;
    p.delta1 = 1.0 - *cfg.delta2;
  }
  if (cfg.gamma1) p.gamma1 = *cfg.gamma1;
  if (cfg.gamma2) p.gamma2 = *cfg.gamma2;
  return p;
}

RunRecord run_two(const ExperimentConfig& cfg, const TwoDomainProblem& pb, double a, Method m,
                  std::optional<double> theta) {
  const MethodParams p = resolve_params(cfg, m, pb.nu(0), pb.nu(1), pb.h(), theta);
  const TwoDomainResult r = pb.run(m, p, cfg.tol, cfg.max_iter);
  RunRecord rec;
  rec.method = m;
  rec.nu1 = pb.nu(0);
  rec.nu2 = pb.nu(1);
  rec.h = pb.h();
  rec.H = kNaN;
  rec.a = a;
  rec.theta = p.theta;
  rec.iterations = r.log.iterations;
  rec.converged = r.log.converged();
  rec.final_error = r.log.achieved;
  rec.solution_error = r.solution_error;
  return rec;
}

RunRecord run_many(const ExperimentConfig& cfg, const ManyDomainProblem& pb, int N, double nu_red,
                   double nu_black, Method m) {
  ManyDomainOptions opt;
  opt.rtol = cfg.rtol;
  opt.max_iter = cfg.max_iter;
  opt.gamma_red = cfg.gamma_red.value_or(0.0);
  opt.gamma_black = cfg.gamma_black.value_or(0.0);
  const InterfaceSystem sys = build_system(pb, m, opt);
  const ManyDomainResult r = solve(pb, sys, cfg.rtol, cfg.max_iter);
  RunRecord rec;
  rec.method = m;
  rec.nu1 = nu_red;
  rec.nu2 = nu_black;
  rec.h = pb.h();
  rec.H = pb.H();
  rec.a = kNaN;
  rec.N = N;
  rec.theta = kNaN;
  rec.iterations = r.log.iterations;
  rec.converged = r.log.converged();
  rec.final_error = r.log.achieved;
  rec.solution_error = r.solution_error;
  return rec;
}

std::string cell(const RunRecord& r) {
  return r.converged ? std::to_string(r.iterations) : "NC(" + std::to_string(r.iterations) + ")";
}

struct TwoColumn {
  Method method;
  std::optional<double> theta;
  double a = 0.5;
};

// One row per coefficient pair; every column of a row shares the problem for its interface position.
struct RowPlan {
  std::vector<std::string> lead;
  std::function<std::vector<RunRecord>()> run;
};

TableArtifact execute(const ExperimentConfig& cfg, TableArtifact table, std::vector<RowPlan> plan) {
  std::vector<std::vector<RunRecord>> results(plan.size());
  parallel_for(plan.size(), resolve_threads(cfg), [&](std::size_t k) { results[k] = plan[k].run(); });
  for (std::size_t k = 0; k < plan.size(); ++k) {
    std::vector<std::string> row = plan[k].lead;
    for (std::size_t c = 0; c < results[k].size(); ++c) {
      RunRecord& r = results[k][c];
      r.table = table.name;
      r.row = k;
      r.column = table.header[plan[k].lead.size() + c];
      row.push_back(cell(r));
      table.runs.push_back(r);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

RowPlan two_domain_row(const ExperimentConfig& cfg, int n, double nu1, double nu2,
                       std::vector<std::string> lead, std::vector<TwoColumn> columns) {
  RowPlan row;
  row.lead = std::move(lead);
  row.run = [cfg, n, nu1, nu2, columns]() {
    std::vector<RunRecord> out;
    std::unique_ptr<TwoDomainProblem> pb;
    double a = kNaN;
    for (const auto& c : columns) {
      if (!pb || c.a != a) {
        a = c.a;
        pb = std::make_unique<TwoDomainProblem>(n, a, nu1, nu2);
      }
      out.push_back(run_two(cfg, *pb, a, c.method, c.theta));
    }
    return out;
  };
  return row;
}

RowPlan many_domain_row(const ExperimentConfig& cfg, int N, int ratio, double nu_red, double nu_black,
                        std::vector<std::string> lead) {
  RowPlan row;
  row.lead = std::move(lead);
  row.run = [cfg, N, ratio, nu_red, nu_black]() {
    const ManyDomainProblem pb(N * ratio, N, nu_red, nu_black);
    std::vector<RunRecord> out;
    for (Method m : cfg.methods) out.push_back(run_many(cfg, pb, N, nu_red, nu_black, m));
    return out;
  };
  return row;
}

std::vector<std::string> method_header(const ExperimentConfig& cfg) {
  std::vector<std::string> out;
  for (Method m : cfg.methods) out.emplace_back(to_string(m));
  return out;
}

TableArtifact symmetric_table(const ExperimentConfig& cfg, const std::string& name,
                              const std::string& caption, Method m1, std::vector<double> thetas1,
                              Method m2, std::vector<double> thetas2) {
  TableArtifact t;
  t.name = name;
  t.caption = caption;
  t.header = {"nu1", "nu2", "h"};
  std::vector<TwoColumn> columns;
  auto add = [&](Method m, const std::vector<double>& thetas) {
    t.header.push_back(std::string(to_string(m)) + " θ_opt");
    columns.push_back({m, std::nullopt});
    for (double th : thetas) {
      t.header.push_back(std::string(to_string(m)) + " " + theta_label(th));
      columns.push_back({m, th});
    }
  };
  add(m1, thetas1);
  add(m2, thetas2);

  std::vector<RowPlan> plan;
  for (int n : {16, 32, 64})
    for (int k : {2, 4, 6})
      plan.push_back(two_domain_row(cfg, n, std::pow(10.0, -k), std::pow(10.0, k),
                                    {power_label(-k), power_label(k), "1/" + std::to_string(n)},
                                    columns));
  return execute(cfg, std::move(t), std::move(plan));
}

TableArtifact table3(const ExperimentConfig& cfg) {
  TableArtifact t;
  t.name = "table3";
  t.caption = "Iterations with nonsymmetric interfaces Gamma1 = {1/4}x(0,1), Gamma2 = {3/4}x(0,1), h = 1/64";
  t.header = {"nu1", "nu2"};
  std::vector<TwoColumn> columns;
  for (Method m : {Method::dn, Method::nn, Method::dd, Method::rr}) {
    t.header.push_back(std::string(to_string(m)) + " Γ1");
    t.header.push_back(std::string(to_string(m)) + " Γ2");
    columns.push_back({m, std::nullopt, 0.25});
    columns.push_back({m, std::nullopt, 0.75});
  }
  // Group columns by interface so each row builds two problems.
  std::vector<std::size_t> order(columns.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return columns[x].a < columns[y].a; });

  std::vector<RowPlan> plan;
  for (int k = 1; k <= 6; ++k) {
    std::vector<TwoColumn> sorted;
    for (std::size_t j : order) sorted.push_back(columns[j]);
    RowPlan inner = two_domain_row(cfg, 64, std::pow(10.0, -k), std::pow(10.0, k),
                                   {power_label(-k), power_label(k)}, sorted);
    RowPlan row;
    row.lead = inner.lead;
    row.run = [inner, order]() {
      const std::vector<RunRecord> got = inner.run();
      std::vector<RunRecord> out(got.size());
      for (std::size_t j = 0; j < order.size(); ++j) out[order[j]] = got[j];
      return out;
    };
    plan.push_back(std::move(row));
  }
  return execute(cfg, std::move(t), std::move(plan));
}

TableArtifact table4(const ExperimentConfig& cfg) {
  const int N = cfg.N > 0 ? cfg.N : 8;
  TableArtifact t;
  t.name = "table4";
  t.caption = "Iterations for " + std::to_string(N) + "x" + std::to_string(N) +
              " subdomains with nu_R = nu_B = 1";
  t.header = {"H/h"};
  for (auto& m : method_header(cfg)) t.header.push_back(m);
  std::vector<RowPlan> plan;
  for (int ratio : {4, 8, 16, 32, 64})
    plan.push_back(many_domain_row(cfg, N, ratio, 1.0, 1.0, {std::to_string(ratio)}));
  return execute(cfg, std::move(t), std::move(plan));
}

TableArtifact table5(const ExperimentConfig& cfg) {
  const int ratio = cfg.Hh > 0 ? cfg.Hh : 8;
  TableArtifact t;
  t.name = "table5";
  t.caption = "Iterations with nu_R = nu_B = 1 and fixed H/h = " + std::to_string(ratio);
  t.header = {"NxN"};
  for (auto& m : method_header(cfg)) t.header.push_back(m);
  std::vector<RowPlan> plan;
  for (int N : {4, 8, 16, 24, 32})
    plan.push_back(
        many_domain_row(cfg, N, ratio, 1.0, 1.0, {std::to_string(N) + "x" + std::to_string(N)}));
  return execute(cfg, std::move(t), std::move(plan));
}

TableArtifact table6(const ExperimentConfig& cfg) {
  const int N = cfg.N > 0 ? cfg.N : 8;
  const int ratio = cfg.Hh > 0 ? cfg.Hh : 8;
  TableArtifact t;
  t.name = "table6";
  t.caption = "Iterations for " + std::to_string(N) + "x" + std::to_string(N) +
              " subdomains, H/h = " + std::to_string(ratio) + ", with coefficient jumps";
  t.header = {"nu_B", "nu_R"};
  for (auto& m : method_header(cfg)) t.header.push_back(m);
  std::vector<RowPlan> plan;
  for (int k = 1; k <= 6; ++k)
    plan.push_back(many_domain_row(cfg, N, ratio, std::pow(10.0, -k), std::pow(10.0, k),
                                   {power_label(k), power_label(-k)}));
  return execute(cfg, std::move(t), std::move(plan));
}

TableArtifact custom_table(const ExperimentConfig& cfg) {
  TableArtifact t;
  t.name = "custom";
  std::vector<RowPlan> plan;
  if (cfg.N >= 2) {
    if (cfg.n % cfg.N != 0) throw std::invalid_argument("custom: N must divide n");
    t.caption = "PCG iterations, " + std::to_string(cfg.N) + "x" + std::to_string(cfg.N) +
                " subdomains, H/h = " + std::to_string(cfg.n / cfg.N);
    t.header = {"nu_R", "nu_B"};
    for (auto& m : method_header(cfg)) t.header.push_back(m);
    plan.push_back(many_domain_row(cfg, cfg.N, cfg.n / cfg.N, cfg.nu_red, cfg.nu_black,
                                   {format_real(cfg.nu_red), format_real(cfg.nu_black)}));
  } else {
    t.caption = "Stationary iterations, two subdomains split at x = " + format_real(cfg.a) +
                ", h = 1/" + std::to_string(cfg.n);
    t.header = {"nu1", "nu2"};
    std::vector<TwoColumn> columns;
    for (Method m : cfg.methods) {
      t.header.emplace_back(to_string(m));
      columns.push_back({m, cfg.theta, cfg.a});
    }
    plan.push_back(two_domain_row(cfg, cfg.n, cfg.nu1, cfg.nu2,
                                  {format_real(cfg.nu1), format_real(cfg.nu2)}, columns));
  }
  return execute(cfg, std::move(t), std::move(plan));
}

std::vector<std::pair<double, double>> coefficient_pairs(const ExperimentConfig& cfg, bool many) {
  std::vector<std::pair<double, double>> out;
  for (double e : cfg.eps) out.emplace_back(std::sqrt(e), 1.0 / std::sqrt(e));
  if (out.empty()) out.emplace_back(many ? cfg.nu_red : cfg.nu1, many ? cfg.nu_black : cfg.nu2);
  return out;
}

} // namespace

const char* to_string(ExperimentKind k) {
  for (const auto& [kind, name] : kKinds)
    if (kind == k) return name;
  return "?";
}

ExperimentKind parse_experiment(const std::string& name) {
  for (const auto& [kind, label] : kKinds)
    if (name == label) return kind;
  throw std::invalid_argument("unknown experiment '" + name +
                              "' (expected table1..table6, spectra or custom)");
}

std::vector<std::string> config_keys() {
  return {"experiment", "n",      "a",       "N",           "Hh",         "nu1",
          "nu2",        "nu_red", "nu_black", "method",     "eps",        "theta",
          "delta1",     "delta2", "gamma1",  "gamma2",      "gamma_red",  "gamma_black",
          "tol",        "rtol",   "max_iter", "format",     "threads"};
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "experiment") {
    cfg.kind = parse_experiment(value);
  } else if (key == "n") {
    const int n = to_int(key, value);
    if (n < 2 || n % 2 != 0)
      throw std::invalid_argument("n: mesh size must be even and >= 2, got " + value);
    cfg.n = n;
  } else if (key == "a") {
    const double a = to_real(key, value);
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("a: interface must lie in (0, 1)");
    cfg.a = a;
  } else if (key == "N") {
    cfg.N = to_int(key, value);
    if (cfg.N < 0 || cfg.N == 1) throw std::invalid_argument("N: must be 0 or >= 2");
  } else if (key == "Hh") {
    cfg.Hh = to_int(key, value);
    if (cfg.Hh < 2) throw std::invalid_argument("Hh: must be >= 2");
  } else if (key == "nu1") {
    cfg.nu1 = positive(key, to_real(key, value));
  } else if (key == "nu2") {
    cfg.nu2 = positive(key, to_real(key, value));
  } else if (key == "nu_red") {
    cfg.nu_red = positive(key, to_real(key, value));
  } else if (key == "nu_black") {
    cfg.nu_black = positive(key, to_real(key, value));
  } else if (key == "method" || key == "methods") {
    cfg.methods.clear();
    for (const auto& m : split_list(value)) cfg.methods.push_back(parse_method(m));
  } else if (key == "eps") {
    cfg.eps.clear();
    for (const auto& e : split_list(value)) cfg.eps.push_back(positive(key, to_real(key, e)));
  } else if (key == "theta") {
    cfg.theta = positive(key, to_real(key, value));
  } else if (key == "delta1") {
    cfg.delta1 = to_real(key, value);
  } else if (key == "delta2") {
    cfg.delta2 = to_real(key, value);
  } else if (key == "gamma1") {
    cfg.gamma1 = positive(key, to_real(key, value));
  } else if (key == "gamma2") {
    cfg.gamma2 = positive(key, to_real(key, value));
  } else if (key == "gamma_red") {
    cfg.gamma_red = positive(key, to_real(key, value));
  } else if (key == "gamma_black") {
    cfg.gamma_black = positive(key, to_real(key, value));
  } else if (key == "tol") {
    cfg.tol = positive(key, to_real(key, value));
  } else if (key == "rtol") {
    cfg.rtol = positive(key, to_real(key, value));
  } else if (key == "max_iter") {
    cfg.max_iter = to_int(key, value);
    if (cfg.max_iter < 1) throw std::invalid_argument("max_iter: must be >= 1");
  } else if (key == "format") {
    if (value == "csv") cfg.format = OutputFormat::csv;
    else if (value == "markdown" || value == "md") cfg.format = OutputFormat::markdown;
    else if (value == "both") cfg.format = OutputFormat::both;
    else throw std::invalid_argument("format: expected csv, markdown or both, got '" + value + "'");
  } else if (key == "threads") {
    cfg.threads = to_int(key, value);
    if (cfg.threads < 0) throw std::invalid_argument("threads: must be >= 0");
  } else {
    throw std::invalid_argument("unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig cfg) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) {
      const auto eq = token.find('=');
      try {
        if (eq == std::string::npos || eq == 0)
          throw std::invalid_argument("expected key=value, got '" + token + "'");
        apply_setting(cfg, token.substr(0, eq), token.substr(eq + 1));
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), std::move(base));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

bool TableArtifact::all_converged() const {
  return std::all_of(runs.begin(), runs.end(), [](const RunRecord& r) { return r.converged; });
}

int TableArtifact::count(std::size_t row, const std::string& column) const {
  for (const auto& r : runs)
    if (r.row == row && r.column == column) return r.iterations;
  return -1;
}

TableArtifact run_table(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::table1:
      return symmetric_table(cfg, "table1", "Iterations of D-N and N-N with different parameters",
                             Method::dn, {0.5, 1.0}, Method::nn, {1.0 / 3.0, 2.0 / 3.0});
    case ExperimentKind::table2:
      return symmetric_table(cfg, "table2", "Iterations of D-D and R-R with different parameters",
                             Method::dd, {1.0 / 3.0, 2.0 / 3.0}, Method::rr, {0.5, 1.0});
    case ExperimentKind::table3: return table3(cfg);
    case ExperimentKind::table4: return table4(cfg);
    case ExperimentKind::table5: return table5(cfg);
    case ExperimentKind::table6: return table6(cfg);
    case ExperimentKind::custom: return custom_table(cfg);
    case ExperimentKind::spectra: break;
  }
  throw std::invalid_argument("run_table: 'spectra' is not a table experiment");
}

std::vector<SpectralReport> run_spectra(const ExperimentConfig& cfg) {
  std::vector<SpectralReport> out;
  if (cfg.methods.empty()) return out;
  const bool many = cfg.N >= 2;
  for (const auto& [nu1, nu2] : coefficient_pairs(cfg, many)) {
    if (many) {
      if (cfg.n % cfg.N != 0) throw std::invalid_argument("spectra: N must divide n");
      const ManyDomainProblem pb(cfg.n, cfg.N, nu1, nu2);
      ManyDomainOptions opt;
      opt.gamma_red = cfg.gamma_red.value_or(0.0);
      opt.gamma_black = cfg.gamma_black.value_or(0.0);
      for (Method m : cfg.methods) out.push_back(condition_report(pb, build_system(pb, m, opt)));
    } else {
      check_dense_cap(cfg.n - 1);
      const TwoDomainProblem pb(cfg.n, cfg.a, nu1, nu2);
      for (Method m : cfg.methods)
        out.push_back(error_report(m, resolve_params(cfg, m, nu1, nu2, pb.h(), cfg.theta), pb));
    }
  }
  return out;
}

void write_omega_csv(std::ostream& os, const ExperimentConfig& cfg) {
  os << "nu1,nu2,h,gamma1,gamma2,lambda0,argmax,omega_max,c0,C1\n";
  if (cfg.N >= 2) return;
  char buf[512];
  for (const auto& [nu1, nu2] : coefficient_pairs(cfg, false)) {
    check_dense_cap(cfg.n - 1);
    const TwoDomainProblem pb(cfg.n, cfg.a, nu1, nu2);
    const MethodParams p = resolve_params(cfg, Method::rr, nu1, nu2, pb.h(), cfg.theta);
    // The solver orders sides so that side 1 carries the smaller coefficient.
    const double n1 = std::min(nu1, nu2), n2 = std::max(nu1, nu2);
    const SpectrumBounds b = spectrum_bounds(pb);
    const auto grid = geometric_grid(0.1 * b.c0, 10.0 * b.C1 / pb.h(), 4001);
    const OmegaProfile prof = rr_omega_profile(p.gamma1, p.gamma2, n1, n2, grid);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  n1, n2, pb.h(), p.gamma1, p.gamma2, prof.lambda0, prof.argmax, prof.max, b.c0, b.C1);
    os << buf;
  }
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& runs) {
  os << "table,row,column,method,nu1,nu2,h,H,a,N,theta,iterations,converged,final_error,solution_error\n";
  for (const auto& r : runs) {
    os << r.table << ',' << r.row << ',' << r.column << ',' << to_string(r.method) << ','
       << format_real(r.nu1) << ',' << format_real(r.nu2) << ',' << format_real(r.h) << ','
       << format_real(r.H) << ',' << format_real(r.a) << ',' << r.N << ',' << format_real(r.theta)
       << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << format_real(r.final_error)
       << ',' << format_real(r.solution_error) << '\n';
  }
}

namespace {

// Display width in code points, so that θ and Γ pad like ASCII.
std::size_t width(const std::string& s) {
  return std::size_t(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

} // namespace

void write_markdown(std::ostream& os, const TableArtifact& table) {
  std::vector<std::size_t> w(table.header.size(), 3);
  for (std::size_t c = 0; c < w.size(); ++c) w[c] = std::max(w[c], width(table.header[c]));
  for (const auto& row : table.rows)
    for (std::size_t c = 0; c < row.size() && c < w.size(); ++c) w[c] = std::max(w[c], width(row[c]));

  auto line = [&](const std::vector<std::string>& cells) {
    os << '|';
    for (std::size_t c = 0; c < w.size(); ++c) {
      const std::string& s = c < cells.size() ? cells[c] : std::string();
      os << ' ' << std::string(w[c] - width(s), ' ') << s << " |";
    }
    os << '\n';
  };

  os << "**" << table.name << "**: " << table.caption << "\n\n";
  line(table.header);
  os << '|';
  for (std::size_t c = 0; c < w.size(); ++c) os << ' ' << std::string(w[c] - 1, '-') << ": |";
  os << '\n';
  for (const auto& row : table.rows) line(row);
}

int resolve_threads(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("DDM_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          task(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

} // namespace ddm
