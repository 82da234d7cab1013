#include "sclaw/invariant_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sclaw {

double default_burn_in(double nu) { return 10.0 / (nu * 4.0 * std::numbers::pi * std::numbers::pi); }

double record_value(const ObservableRecord& r, std::string_view name) {
  if (name == "one") return 1.0;
  if (name == "l2_sq") return r.l2_sq;
  if (name == "h1_sq") return r.h1_sq;
  if (name == "h2_sq") return r.h2_sq;
  if (name == "l1_dist") return r.l1_dist;
  if (name == "energy_residual") return r.energy_residual;
  if (name.size() > 4 && name.substr(0, 2) == "lp" && name.substr(name.size() - 2) == "_p") {
    const std::string order(name.substr(2, name.size() - 4));
    return r.lp_p(std::stod(order));
  }
  throw std::invalid_argument("unknown observable '" + std::string(name) + "'");
}

ErgodicEstimate ergodic_average(std::span<const double> times, std::span<const double> values,
                                std::string observable, double burn_in, int batches) {
  if (times.size() != values.size()) throw std::invalid_argument("ergodic_average: size mismatch");
  if (batches < 8) throw std::invalid_argument("ergodic_average: need at least 8 batches");
  const auto first = static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), burn_in) - times.begin());
  const std::size_t n = times.size() - first;
  const std::size_t per_batch = n / static_cast<std::size_t>(batches);
  if (per_batch == 0)
    throw std::invalid_argument("ergodic_average: insufficient samples after burn-in for " + observable);

  std::vector<double> means(static_cast<std::size_t>(batches), 0.0);
  for (int b = 0; b < batches; ++b) {
    double acc = 0.0;
    const std::size_t base = first + static_cast<std::size_t>(b) * per_batch;
    for (std::size_t i = 0; i < per_batch; ++i) acc += values[base + i];
    means[static_cast<std::size_t>(b)] = acc / static_cast<double>(per_batch);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= batches;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (batches - 1);

  ErgodicEstimate e;
  e.observable = std::move(observable);
  e.value = mean;
  e.std_error = std::sqrt(var / batches);
  e.horizon = times.empty() ? 0.0 : times.back();
  e.burn_in = burn_in;
  e.batches = batches;
  e.samples = per_batch * static_cast<std::size_t>(batches);
  return e;
}

ErgodicEstimate ergodic_average(std::span<const ObservableRecord> records, std::string_view observable,
                                double burn_in, int batches) {
  std::vector<double> t(records.size()), v(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    t[i] = records[i].t;
    v[i] = record_value(records[i], observable);
  }
  return ergodic_average(t, v, std::string(observable), burn_in, batches);
}

bool estimates_agree(const ErgodicEstimate& a, const ErgodicEstimate& b, double k) {
  return std::abs(a.value - b.value) <= k * std::hypot(a.std_error, b.std_error);
}

std::vector<TightnessRow> tightness_diagnostic(std::span<const ObservableRecord> records,
                                               std::span<const double> epsilons, double nu, double u0_l2_sq,
                                               double noise_l2_trace) {
  if (records.size() < 2) throw std::invalid_argument("tightness_diagnostic: need at least two records");
  const double horizon = records.back().t - records.front().t;
  std::vector<TightnessRow> rows;
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw std::invalid_argument("tightness_diagnostic: epsilon must be > 0");
    // Left-point time weights so uneven spacing is handled.
    double outside = 0.0;
    for (std::size_t i = 0; i + 1 < records.size(); ++i)
      if (records[i].h1_sq > 1.0 / eps) outside += records[i + 1].t - records[i].t;
    TightnessRow row;
    row.epsilon = eps;
    row.fraction = horizon > 0.0 ? outside / horizon : 0.0;
    row.bound = eps * (u0_l2_sq + noise_l2_trace * horizon) / (2.0 * nu * horizon);
    row.vacuous = row.bound >= 1.0;
    row.holds = row.vacuous || row.fraction <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

CouplingReport confluence_experiment(const SpectralField& u0, const SpectralField& v0, const ModelSpec& model,
                                     const SolverConfig& cfg, std::uint64_t seed, const ConfluenceOptions& options) {
  Stepper stepper(model, cfg);
  NoisePath path = stepper.make_path(seed);
  Observer observer(stepper.basis(), {}, options.quadrature_points);
  const auto lambda = stepper.basis()->eigenvalues();

  CouplingReport rep;
  rep.seed = seed;
  rep.epsilons = options.epsilons;
  rep.first_passage.assign(options.epsilons.size(), std::nullopt);
  rep.dissipation_radius = options.dissipation_radius;
  const double min_eps = options.epsilons.empty() ? 0.0 : *std::min_element(options.epsilons.begin(), options.epsilons.end());

  State a{0.0, 0, u0};
  State b{0.0, 0, v0};
  auto sample = [&](const State& s1, const State& s2) {
    return CoupledSample{s1.t, observer.l1_distance(s1.u.coeffs(), s2.u.coeffs()),
                         sobolev_norm_sq(s1.u.coeffs(), lambda, 1.0), sobolev_norm_sq(s2.u.coeffs(), lambda, 1.0)};
  };
  auto note_passages = [&](const CoupledSample& s) {
    for (std::size_t i = 0; i < rep.epsilons.size(); ++i)
      if (!rep.first_passage[i] && s.l1 < rep.epsilons[i]) rep.first_passage[i] = s.t;
    if (options.dissipation_radius && !rep.tau_r && s.h1_u + s.h1_v <= *options.dissipation_radius) rep.tau_r = s.t;
  };

  rep.series.push_back(sample(a, b));
  rep.initial_distance = rep.series.back().l1;
  note_passages(rep.series.back());
  const auto steps = static_cast<std::uint64_t>(std::llround(options.horizon / stepper.dt()));
  for (std::uint64_t n = 0; n < steps; ++n) {
    if (options.stop_at_min_epsilon && !rep.epsilons.empty() && rep.series.back().l1 < min_eps) break;
    try {
      stepper.coupled_step(a, b, path);
    } catch (const BlowupError& e) {
      rep.blowup = e.what();
      break;
    }
    const double prev = rep.series.back().l1;
    rep.series.push_back(sample(a, b));
    const double cur = rep.series.back().l1;
    if (cur > prev * (1.0 + options.tolerance)) {
      ++rep.violations;
      rep.worst_relative_increase = std::max(rep.worst_relative_increase, (cur - prev) / prev);
    }
    note_passages(rep.series.back());
  }
  rep.final_distance = rep.series.back().l1;
  rep.reached = !rep.epsilons.empty() && rep.final_distance < min_eps;
  rep.horizon_exhausted = !rep.reached && !rep.blowup;
  return rep;
}

std::optional<double> dissipation_entry_time(std::span<const CoupledSample> series, double R) {
  for (const auto& s : series)
    if (s.h1_u + s.h1_v <= R) return s.t;
  return std::nullopt;
}

double dissipation_entry_bound(double u0_l2_sq, double v0_l2_sq, double nu, double R, double noise_l2_trace) {
  const double margin = nu * R - noise_l2_trace;
  if (!(margin > 0.0)) return std::numeric_limits<double>::infinity();
  return (u0_l2_sq + v0_l2_sq) / (2.0 * margin);
}

SampledRun sample_run(const SpectralField& u0, const ModelSpec& model, const SolverConfig& cfg, std::uint64_t seed,
                      double horizon, int record_every, std::vector<double> lp_orders) {
  if (record_every < 1) throw std::invalid_argument("sample_run: record_every must be >= 1");
  Stepper stepper(model, cfg);
  NoisePath path = stepper.make_path(seed);
  Observer observer(stepper.basis(), std::move(lp_orders));
  SampledRun run{{}, State{0.0, 0, u0}, std::nullopt};
  run.records.push_back(observer.observe(0.0, u0, cfg.guard_radius));
  const auto steps = static_cast<std::uint64_t>(std::llround(horizon / stepper.dt()));
  for (std::uint64_t n = 1; n <= steps; ++n) {
    try {
      stepper.step(run.final_state, path);
    } catch (const BlowupError& e) {
      run.blowup = e;
      break;
    }
    if (n % static_cast<std::uint64_t>(record_every) == 0)
      run.records.push_back(observer.observe(run.final_state.t, run.final_state.u, cfg.guard_radius));
  }
  return run;
}

}  // namespace sclaw
