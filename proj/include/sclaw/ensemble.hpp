#pragma once

#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#include "sclaw/invariant_measure.hpp"

namespace sclaw {

/// How independent ensemble members are scheduled. `serial` is the
/// reference; `openmp` must reproduce it bit for bit, since every member
/// owns its state and its noise is addressed by seed alone.
enum class Execution { serial, openmp };

/// Calls `body(i)` for i in [0, n). Exceptions thrown by a member are
/// captured and the first one is rethrown after the loop.
template <class Body>
void for_each_member(std::size_t n, Execution exec, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  if (exec == Execution::openmp) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<CouplingReport> confluence_ensemble(const SpectralField& u0, const SpectralField& v0,
                                                const ModelSpec& model, const SolverConfig& cfg,
                                                std::span<const std::uint64_t> seeds,
                                                const ConfluenceOptions& options, Execution exec);

std::vector<SampledRun> run_ensemble(std::span<const SpectralField> initial, const ModelSpec& model,
                                     const SolverConfig& cfg, std::span<const std::uint64_t> seeds, double horizon,
                                     int record_every, const std::vector<double>& lp_orders, Execution exec);

/// Seeds base, base + 1, ..., base + n - 1.
std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t n);

}  // namespace sclaw
