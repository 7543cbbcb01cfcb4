// ddm: reproduces the iteration-count tables and spectral reports.
//
//   ddm run --experiment table4 --out results/
//   ddm spectra --n 16 --eps 1e-4
//   ddm run --config sweep.cfg --set theta=0.5 --set method=dn
//
// DDM_THREADS sets the number of concurrent runs (default 1).

#include "ddm/experiment.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string config;
  std::vector<std::string> sets;
  std::string n, N, a, method, eps, theta, nu1, nu2, nu_red, nu_black, format;
};

void add_common(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config, "key=value config file")->check(CLI::ExistingFile);
  cmd.add_option("--set", o.sets, "extra key=value setting (repeatable)");
  cmd.add_option("--n", o.n, "mesh intervals per side (even)");
  cmd.add_option("--N", o.N, "subdomains per side (0: two subdomains)");
  cmd.add_option("--a", o.a, "two-subdomain interface position");
  cmd.add_option("--method", o.method, "comma list of dn,nn,dd,rr");
  cmd.add_option("--eps", o.eps, "comma list of coefficient ratios nu1/nu2");
  cmd.add_option("--theta", o.theta, "relaxation parameter");
  cmd.add_option("--nu1", o.nu1, "left coefficient (two subdomains)");
  cmd.add_option("--nu2", o.nu2, "right coefficient (two subdomains)");
  cmd.add_option("--nu-red", o.nu_red, "red coefficient (many subdomains)");
  cmd.add_option("--nu-black", o.nu_black, "black coefficient (many subdomains)");
  cmd.add_option("--format", o.format, "csv, markdown or both");
}

// Config file first, then --set, then the named flags.
ddm::ExperimentConfig resolve(const Overrides& o, ddm::ExperimentConfig cfg) {
  if (!o.config.empty()) cfg = ddm::parse_config_file(o.config, cfg);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("--set: expected key=value, got '" + s + "'");
    try {
      ddm::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("--set: ") + e.what());
    }
  }
  const std::pair<const char*, const std::string*> flags[] = {
      {"n", &o.n},         {"N", &o.N},         {"a", &o.a},
      {"method", &o.method}, {"eps", &o.eps},   {"theta", &o.theta},
      {"nu1", &o.nu1},     {"nu2", &o.nu2},     {"nu_red", &o.nu_red},
      {"nu_black", &o.nu_black}, {"format", &o.format},
  };
  for (const auto& [key, value] : flags) {
    if (value->empty()) continue;
    try {
      ddm::apply_setting(cfg, key, *value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("--") + e.what());
    }
  }
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int run_command(const ddm::ExperimentConfig& cfg, const std::string& out_dir) {
  const ddm::TableArtifact table = ddm::run_table(cfg);
  std::ostringstream csv, md;
  ddm::write_runs_csv(csv, table.runs);
  ddm::write_markdown(md, table);

  std::cout << md.str();
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    if (cfg.format != ddm::OutputFormat::markdown)
      write_file(fs::path(out_dir) / (table.name + ".csv"), csv.str());
    if (cfg.format != ddm::OutputFormat::csv)
      write_file(fs::path(out_dir) / (table.name + ".md"), md.str());
  } else if (cfg.format == ddm::OutputFormat::csv) {
    std::cout << '\n' << csv.str();
  }
  if (!table.all_converged()) {
    std::cerr << "ddm: some runs did not converge (marked NC in the table)\n";
    return 1;
  }
  return 0;
}

int spectra_command(const ddm::ExperimentConfig& cfg, const std::string& out_dir) {
  std::ostringstream csv, omega;
  ddm::write_spectral_csv(csv, ddm::run_spectra(cfg));
  const bool with_rr =
      std::find(cfg.methods.begin(), cfg.methods.end(), ddm::Method::rr) != cfg.methods.end();
  if (with_rr) ddm::write_omega_csv(omega, cfg);

  std::cout << csv.str();
  if (with_rr && cfg.N < 2) std::cout << '\n' << omega.str();
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "spectra.csv", csv.str());
    if (with_rr && cfg.N < 2) write_file(fs::path(out_dir) / "omega.csv", omega.str());
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonoverlapping domain decomposition experiments (D-N, N-N, D-D, R-R)"};
  app.require_subcommand(1);

  Overrides run_opts, spectra_opts;
  std::string experiment, run_out, spectra_out;

  auto* run = app.add_subcommand("run", "reproduce an iteration-count table or a custom sweep");
  run->add_option("--experiment,-e", experiment, "table1..table6 or custom");
  run->add_option("--out,-o", run_out, "output directory for <name>.csv and <name>.md");
  add_common(*run, run_opts);

  auto* spectra = app.add_subcommand("spectra", "error-operator spectra and condition numbers");
  spectra->add_option("--out,-o", spectra_out, "output directory for spectra.csv and omega.csv");
  add_common(*spectra, spectra_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ddm::ExperimentConfig cfg = resolve(run_opts, {});
      if (!experiment.empty()) cfg.kind = ddm::parse_experiment(experiment);
      if (cfg.kind == ddm::ExperimentKind::spectra) return spectra_command(cfg, run_out);
      return run_command(cfg, run_out);
    }
    ddm::ExperimentConfig base;
    base.kind = ddm::ExperimentKind::spectra;
    return spectra_command(resolve(spectra_opts, base), spectra_out);
  } catch (const std::exception& e) {
    std::cerr << "ddm: " << e.what() << '\n';
    return 2;
  }
}
