#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sclaw/integrator.hpp"
#include "sclaw/observables.hpp"

namespace sclaw {

/// Time average of an observable after burn-in, with a batch-means
/// standard error.
struct ErgodicEstimate {
  std::string observable;
  double value = 0.0;
  double std_error = 0.0;
  double horizon = 0.0;
  double burn_in = 0.0;
  int batches = 0;
  std::size_t samples = 0;
};

/// Ten relaxation times 1 / (nu 4 pi^2) of the slowest linear mode.
double default_burn_in(double nu);

/// Value of a named observable on a record: "one", "l2_sq", "h1_sq",
/// "h2_sq", "l1_dist", "energy_residual" or "lp<p>_p".
double record_value(const ObservableRecord& record, std::string_view observable);

/// Batch means over equally spaced samples with t >= burn_in. Needs at
/// least 8 batches and one sample per batch, else std::invalid_argument
/// ("insufficient samples").
ErgodicEstimate ergodic_average(std::span<const double> times, std::span<const double> values,
                                std::string observable, double burn_in, int batches = 16);
ErgodicEstimate ergodic_average(std::span<const ObservableRecord> records, std::string_view observable,
                                double burn_in, int batches = 16);

/// |a - b| <= k sqrt(se_a^2 + se_b^2).
bool estimates_agree(const ErgodicEstimate& a, const ErgodicEstimate& b, double k = 3.0);

struct TightnessRow {
  double epsilon = 0.0;
  double fraction = 0.0;  // share of recorded time with |u|_H1^2 > 1/epsilon
  double bound = 0.0;     // epsilon (|u0|_L2^2 + trace T) / (2 nu T)
  bool vacuous = false;   // bound >= 1
  bool holds = true;
};

/// Markov-type bound on the time spent outside the H1 ball of radius^2
/// 1/epsilon, evaluated with the L2 noise trace.
std::vector<TightnessRow> tightness_diagnostic(std::span<const ObservableRecord> records,
                                               std::span<const double> epsilons, double nu, double u0_l2_sq,
                                               double noise_l2_trace);

struct CoupledSample {
  double t;
  double l1;
  double h1_u;  // |u|_H1^2
  double h1_v;  // |v|_H1^2
};

struct ConfluenceOptions {
  double horizon = 10.0;
  std::vector<double> epsilons;          // absolute L1 thresholds
  double tolerance = 1e-8;               // allowed per-step relative L1 increase
  std::optional<double> dissipation_radius;  // R for the entry time tau_R
  bool stop_at_min_epsilon = true;
  int quadrature_points = 0;             // 0: dealiased grid
};

struct CouplingReport {
  std::uint64_t seed = 0;
  std::vector<CoupledSample> series;
  std::vector<double> epsilons;
  std::vector<std::optional<double>> first_passage;
  double initial_distance = 0.0;
  double final_distance = 0.0;
  std::optional<double> dissipation_radius;
  std::optional<double> tau_r;
  std::size_t violations = 0;
  double worst_relative_increase = 0.0;
  bool reached = false;           // distance fell below min(epsilons)
  bool horizon_exhausted = false;
  std::optional<std::string> blowup;
};

/// Drives u0 and v0 with one shared noise path and tracks their L1 distance
/// until it drops below min(epsilons) or the horizon runs out. Every step
/// is checked for l1(t + dt) <= (1 + tolerance) l1(t).
CouplingReport confluence_experiment(const SpectralField& u0, const SpectralField& v0, const ModelSpec& model,
                                     const SolverConfig& cfg, std::uint64_t seed, const ConfluenceOptions& options);

/// First recorded time with |u|_H1^2 + |v|_H1^2 <= R.
std::optional<double> dissipation_entry_time(std::span<const CoupledSample> series, double R);

/// (|u0|^2 + |v0|^2) / (2 (nu R - trace)); +inf when nu R <= trace.
double dissipation_entry_bound(double u0_l2_sq, double v0_l2_sq, double nu, double R, double noise_l2_trace);

/// Records of a single run, one every `record_every` steps including t = 0.
struct SampledRun {
  std::vector<ObservableRecord> records;
  State final_state;
  std::optional<BlowupError> blowup;
};

SampledRun sample_run(const SpectralField& u0, const ModelSpec& model, const SolverConfig& cfg, std::uint64_t seed,
                      double horizon, int record_every, std::vector<double> lp_orders);

}  // namespace sclaw
