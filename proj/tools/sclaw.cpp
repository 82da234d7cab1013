// sclaw: run, couple, ergodic, validate and resume experiments for the
// periodic stochastic viscous conservation law.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "sclaw/observables.hpp"
#include "sclaw/run.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::optional<double> dt;
  std::optional<int> modes;
  std::optional<double> nu;
  std::optional<std::string> flux;
  std::optional<std::string> noise_profile;
  std::optional<std::string> out;
  std::optional<std::string> scheme;
  std::optional<std::string> snapshot;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("-c,--config", f.config, "INI configuration file");
  cmd->add_option("--seed", f.seed, "noise seed");
  cmd->add_option("--horizon", f.horizon, "final time T");
  cmd->add_option("--dt", f.dt, "time step (0: 0.5 / (nu |lambda_M|))");
  cmd->add_option("--modes", f.modes, "number of retained modes M (even)");
  cmd->add_option("--nu", f.nu, "viscosity");
  cmd->add_option("--flux", f.flux, "burgers | zero | cubic | poly:a0,a1,...");
  cmd->add_option("--noise-profile", f.noise_profile, "c,q for sigma_m = c (1 + k)^-q");
  cmd->add_option("--scheme", f.scheme, "exp_euler | exp_midpoint_flux");
  cmd->add_option("-o,--out", f.out, "output directory");
}

sclaw::ConfigOverrides overrides(const Flags& f, const char* experiment) {
  sclaw::ConfigOverrides o;
  auto fmt = [](double v) { return sclaw::format_double(v); };
  if (experiment) o["run.experiment"] = experiment;
  if (f.seed) o["run.seed"] = std::to_string(*f.seed);
  if (f.horizon) o["run.horizon"] = fmt(*f.horizon);
  if (f.dt) o["solver.dt"] = fmt(*f.dt);
  if (f.modes) o["solver.modes"] = std::to_string(*f.modes);
  if (f.nu) o["model.nu"] = fmt(*f.nu);
  if (f.scheme) o["solver.scheme"] = *f.scheme;
  if (f.out) o["run.out"] = *f.out;
  if (f.snapshot) o["run.resume"] = *f.snapshot;
  if (f.flux) {
    if (f.flux->rfind("poly:", 0) == 0) {
      o["model.flux"] = "polynomial";
      o["model.flux_coeffs"] = f.flux->substr(5);
    } else {
      o["model.flux"] = *f.flux;
    }
  }
  if (f.noise_profile) {
    const auto comma = f.noise_profile->find(',');
    o["noise.profile_c"] = f.noise_profile->substr(0, comma);
    o["noise.profile_q"] = comma == std::string::npos ? std::string() : f.noise_profile->substr(comma + 1);
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral simulator for the stochastic viscous conservation law on the unit torus"};
  app.require_subcommand(1);

  Flags f;
  struct Sub {
    CLI::App* cmd;
    const char* experiment;
  };
  std::vector<Sub> subs = {
      {app.add_subcommand("run", "single trajectory: observables.csv, snapshots, summary.json"), "single"},
      {app.add_subcommand("couple", "two initial data on one noise path: L1 distance and first passages"), "coupled"},
      {app.add_subcommand("ergodic", "time averages from two initial data with batch-means errors"), "ergodic"},
      {app.add_subcommand("validate", "closed-form self-checks; exit 1 on any failure"), "validate"},
      {app.add_subcommand("resume", "continue a single run from a snapshot file"), "single"},
  };
  for (auto& s : subs) add_common(s.cmd, f);
  subs.back().cmd->add_option("snapshot", f.snapshot, "snapshot file written by `run`")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sclaw::exit_config;
  }

  const char* experiment = nullptr;
  for (const auto& s : subs)
    if (s.cmd->parsed()) experiment = s.experiment;

  sclaw::RunConfig cfg;
  try {
    cfg = sclaw::parse_config(f.config.empty() ? std::nullopt : std::optional<std::filesystem::path>(f.config),
                              overrides(f, experiment));
  } catch (const sclaw::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return sclaw::exit_config;
  }

  const auto outcome = sclaw::run_experiment(cfg, std::cout);
  if (outcome.exit_code != sclaw::exit_ok) std::cerr << "error: " << outcome.message << '\n';
  std::cout << "run " << outcome.summary.value("run_id", std::string()) << " -> " << cfg.out << "/summary.json"
            << " (exit " << outcome.exit_code << ")\n";
  return outcome.exit_code;
}
