#pragma once

#include "ddm/spectral.hpp"
#include "ddm/two_domain.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ddm {

enum class ExperimentKind { table1, table2, table3, table4, table5, table6, spectra, custom };

const char* to_string(ExperimentKind k);
ExperimentKind parse_experiment(const std::string& name);

enum class OutputFormat { csv, markdown, both };

/// Fully resolved experiment settings. Defaults are the published settings:
/// f = -2(x^2+y^2-x-y), tol 1e-8 for the stationary iterations, PCG rtol 1e-6,
/// optimal theta and weights, gamma1 = nu2/h, gamma2 = nu1, gamma_R = 16 nu_B/h,
/// gamma_B = nu_R H/2. Unset optionals mean "use the optimal/default value".
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::custom;
  int n = 16;
  double a = 0.5;
  int N = 0;   ///< 0 selects the two-subdomain problem for custom/spectra; table4/table6 default 8
  int Hh = 0;  ///< H/h for table5/table6 (default 8)
  double nu1 = 1.0, nu2 = 1.0;
  double nu_red = 1.0, nu_black = 1.0;
  std::vector<Method> methods{Method::dn, Method::nn, Method::dd, Method::rr};
  std::vector<double> eps;  ///< spectra sweep: nu1/nu2 with nu1 = sqrt(eps), nu2 = 1/sqrt(eps)
  std::optional<double> theta, delta1, delta2, gamma1, gamma2, gamma_red, gamma_black;
  double tol = 1e-8;
  double rtol = 1e-6;
  int max_iter = 2000;
  OutputFormat format = OutputFormat::both;
  int threads = 0;  ///< 0: take DDM_THREADS from the environment, else 1
};

/// Applies "key=value" tokens (whitespace or newline separated, '#' starts a
/// comment) on top of `base`. Unknown keys and malformed values throw
/// std::invalid_argument naming the line.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base = {});
/// Applies a single key=value assignment (used for command-line flags).
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

std::vector<std::string> config_keys();

/// One solver run of a table.
struct RunRecord {
  std::string table;
  std::size_t row = 0;
  Method method = Method::dn;
  std::string column;  ///< markdown column label
  double nu1 = 0, nu2 = 0, h = 0, H = 0, a = 0;
  int N = 0;
  double theta = 0;
  int iterations = 0;
  bool converged = false;
  double final_error = 0;     ///< stationary: relative error; PCG: relative residual
  double solution_error = 0;  ///< recovered solution vs global direct solve
};

struct TableArtifact {
  std::string name;
  std::string caption;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<RunRecord> runs;

  bool all_converged() const;
  /// Iteration count in the cell at (row, column label); -1 if absent.
  int count(std::size_t row, const std::string& column) const;
};

/// Reproduces table1..table6 or runs a custom sweep; rows and columns follow
/// the published layout. Runs may execute concurrently (cfg.threads), output
/// order is fixed.
TableArtifact run_table(const ExperimentConfig& cfg);

/// Spectral reports for the configured problem: error operators R_i for the
/// two-subdomain problem (N = 0), or condition reports of P^{-1}A (N >= 2).
std::vector<SpectralReport> run_spectra(const ExperimentConfig& cfg);

/// R-R omega profile for each eps of a spectra config (two-subdomain only).
void write_omega_csv(std::ostream& os, const ExperimentConfig& cfg);

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& runs);
void write_markdown(std::ostream& os, const TableArtifact& table);

/// Thread count: cfg.threads if positive, else DDM_THREADS, else 1.
int resolve_threads(const ExperimentConfig& cfg);

/// Runs tasks[k] for every k on up to `threads` workers; rethrows the first failure.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

/// Formats a real with 17 significant digits.
std::string format_real(double x);

} // namespace ddm
