#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sclaw/integrator.hpp"

namespace sclaw {

/// Binary restart file. All fields little-endian:
///
///   char[8]  magic "SCLSNAP1"
///   u32      modes M
///   u32      scheme (0 exp_euler, 1 exp_midpoint_flux)
///   f64      t
///   f64      nu
///   f64      dt
///   u64      seed
///   u64      step counter
///   u64      noise fine-step counter
///   f64[M]   coefficients of u
///   f64[M]   coefficients of the stochastic convolution w
struct Snapshot {
  int modes = 0;
  Scheme scheme = Scheme::exp_euler;
  double t = 0.0;
  double nu = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  std::uint64_t noise_fine_steps = 0;
  std::vector<double> coeffs;
  std::vector<double> convolution;

  bool operator==(const Snapshot&) const = default;
};

Snapshot make_snapshot(const State& state, const NoisePath& path, const Stepper& stepper);

/// Throws std::runtime_error on I/O failure.
void write_snapshot(const std::filesystem::path& file, const Snapshot& snap);
/// Throws std::runtime_error on I/O failure or a malformed file.
Snapshot read_snapshot(const std::filesystem::path& file);

std::vector<unsigned char> encode_snapshot(const Snapshot& snap);
Snapshot decode_snapshot(const std::vector<unsigned char>& bytes);

/// Rebuilds the state and repositions `path` to continue the snapshotted
/// run. Throws std::invalid_argument if the snapshot does not match the
/// stepper's model or the path's seed.
State restore_snapshot(const Snapshot& snap, const Stepper& stepper, NoisePath& path);

}  // namespace sclaw
