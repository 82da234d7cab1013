#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sclaw/integrator.hpp"

namespace sclaw {

enum class Experiment { single, coupled, ergodic, validate };

const char* to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

/// Everything a run needs. Validated before any compute; its INI echo is
/// written verbatim into every output artifact.
struct RunConfig {
  // [model]
  double nu = 0.1;
  std::string flux = "burgers";  // burgers | zero | cubic | polynomial
  std::vector<double> flux_coeffs;
  std::optional<int> flux_growth_exponent;
  std::optional<double> flux_growth_constant;

  // [noise]: either a profile or an explicit amplitude list
  NoiseProfile noise_profile{0.5, 3.0};
  std::vector<double> noise_sigma;

  // [solver]
  SolverConfig solver{};

  // [run]
  Experiment experiment = Experiment::single;
  double horizon = 1.0;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::vector<double> observables{2.0, 4.0, 6.0};
  int record_every = 1;
  int snapshot_every = 0;
  std::string initial_u = "mode:1:1";
  std::string initial_v = "mode:1:-1";
  std::string resume;

  // [coupled]
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
  double contraction_tolerance = 1e-8;
  std::optional<double> dissipation_radius;

  // [ergodic]
  std::optional<double> burn_in;
  int batches = 16;
  std::vector<double> tightness_epsilons{0.01, 0.1, 1.0};

  bool operator==(const RunConfig&) const = default;
};

/// All violations found, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Flag overrides keyed by "section.key" (e.g. "model.nu"); applied on top
/// of the file, each value in the same text form the file uses.
using ConfigOverrides = std::map<std::string, std::string>;

/// Parses INI text (sections [model], [noise], [solver], [run], [coupled],
/// [ergodic]) plus overrides into a validated RunConfig. Throws ConfigError.
RunConfig parse_config_text(std::string_view ini, const ConfigOverrides& overrides = {});
/// Same, reading the file first (std::nullopt: defaults plus overrides).
RunConfig parse_config(const std::optional<std::filesystem::path>& file, const ConfigOverrides& overrides = {});

/// Lists every violated invariant of an assembled config.
std::vector<std::string> validate_config(const RunConfig& cfg);

/// Canonical INI rendering; parse_config_text(echo_config(c)) == c.
std::string echo_config(const RunConfig& cfg);

FluxSpec build_flux(const RunConfig& cfg);
NoiseSpec build_noise(const RunConfig& cfg);
ModelSpec build_model(const RunConfig& cfg);

/// "zero", "mode:<m>:<amplitude>" (sum several with '+') or
/// "coeffs:<c1>,<c2>,...". Throws std::invalid_argument.
SpectralField build_initial(std::string_view descriptor, const BasisPtr& basis);

}  // namespace sclaw
