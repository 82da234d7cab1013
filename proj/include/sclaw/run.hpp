#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "sclaw/config.hpp"

namespace sclaw {

enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_config = 2,
  exit_blowup = 3,
  exit_io = 4,
};

struct RunOutcome {
  int exit_code = exit_ok;
  std::string message;
  nlohmann::json summary;
};

/// FNV-1a 64 of the canonical config echo (output and resume paths
/// excluded), as 16 hex digits.
std::string run_id(const RunConfig& cfg);

/// Runs the configured experiment, writing into cfg.out:
///   config.ini        canonical echo of cfg
///   summary.json      run id, status, estimates
///   observables.csv   one row per record (observables_v.csv for the
///                     second ergodic run, coupled.csv for coupled runs)
///   snapshot_<n>.bin  every snapshot_every steps, final.snap at the end
/// Progress and check lines go to `log`. Never throws; failures map to
/// the exit codes above.
RunOutcome run_experiment(const RunConfig& cfg, std::ostream& log);

}  // namespace sclaw
