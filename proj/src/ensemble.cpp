#include "sclaw/ensemble.hpp"

#include <stdexcept>

namespace sclaw {

std::vector<CouplingReport> confluence_ensemble(const SpectralField& u0, const SpectralField& v0,
                                                const ModelSpec& model, const SolverConfig& cfg,
                                                std::span<const std::uint64_t> seeds,
                                                const ConfluenceOptions& options, Execution exec) {
  std::vector<CouplingReport> out(seeds.size());
  for_each_member(seeds.size(), exec,
                  [&](std::size_t i) { out[i] = confluence_experiment(u0, v0, model, cfg, seeds[i], options); });
  return out;
}

std::vector<SampledRun> run_ensemble(std::span<const SpectralField> initial, const ModelSpec& model,
                                     const SolverConfig& cfg, std::span<const std::uint64_t> seeds, double horizon,
                                     int record_every, const std::vector<double>& lp_orders, Execution exec) {
  if (initial.size() != seeds.size()) throw std::invalid_argument("run_ensemble: one initial condition per seed");
  std::vector<std::optional<SampledRun>> slots(seeds.size());
  for_each_member(seeds.size(), exec, [&](std::size_t i) {
    slots[i] = sample_run(initial[i], model, cfg, seeds[i], horizon, record_every, lp_orders);
  });
  std::vector<SampledRun> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t n) {
  std::vector<std::uint64_t> seeds(n);
  for (std::size_t i = 0; i < n; ++i) seeds[i] = base + i;
  return seeds;
}

}  // namespace sclaw
