#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sclaw/errors.hpp"
#include "sclaw/flux.hpp"
#include "sclaw/noise.hpp"
#include "sclaw/spectral.hpp"

namespace sclaw {

/// du = -d/dx A(u) dt + nu d_xx u dt + dW^Q on the unit torus.
struct ModelSpec {
  double nu = 1.0;
  FluxSpec flux = FluxSpec::burgers();
  NoiseSpec noise;

  /// Throws std::invalid_argument naming the violated condition.
  void validate() const;
};

enum class Scheme { exp_euler, exp_midpoint_flux };

const char* to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);

struct SolverConfig {
  int modes = 32;
  double dt = 0.0;  // 0 selects default_dt(nu, modes)
  Scheme scheme = Scheme::exp_euler;
  std::optional<double> guard_radius;  // trip when |u|_H1^2 >= r
  double picard_tol = 1e-10;
  int picard_max_iter = 60;
  int picard_max_halvings = 10;

  bool operator==(const SolverConfig&) const = default;
};

/// 0.5 / (nu |lambda_M|): the explicit-flux step size used when none is given.
double default_dt(double nu, int modes);

struct State {
  double t = 0.0;
  std::uint64_t step = 0;
  SpectralField u;
};

struct GuardTrip {
  double t;
  double h1_sq;
};

/// Trips once |u|_H1^2 >= r. Throws std::invalid_argument for r <= 0.
std::optional<GuardTrip> guard_check(const State& state, double r);

/// Exponential integrator for the mild formulation
///   u(t+dt) = S_dt u(t) - int S_{t+dt-s} d/dx A(u(s)) ds + [w(t+dt) - S_dt w(t)].
///
/// The heat semigroup and the stochastic convolution increment are applied
/// exactly; only the flux integral is approximated (left point for
/// exp_euler, half-step predictor for exp_midpoint_flux). With A = 0 the
/// scheme has no time-discretisation error at all.
///
/// Owns transform scratch, so one Stepper per thread.
class Stepper {
 public:
  Stepper(ModelSpec model, SolverConfig cfg);

  const ModelSpec& model() const { return model_; }
  const SolverConfig& config() const { return cfg_; }
  const BasisPtr& basis() const { return basis_; }
  double dt() const { return dt_; }
  const std::shared_ptr<const NoiseSpec>& noise() const { return noise_; }

  /// A fresh path at t = 0. `fine_dt == 0` uses dt().
  NoisePath make_path(std::uint64_t seed, double fine_dt = 0.0) const;

  /// Advances by dt. Throws BlowupError (with the time of the failure) on a
  /// guard trip, flux overflow or non-finite state.
  void step(State& state, NoisePath& path);

  /// Advances both states with one shared noise increment.
  void coupled_step(State& a, State& b, NoisePath& path);

  /// Noise-free update over dt written into `out` (size = modes).
  void deterministic_update(std::span<const double> u, std::span<double> out);

  /// -d/dx A(u) on the retained modes.
  void nonlinear(std::span<const double> u, std::span<double> out) { nonlinear_.evaluate(u, out); }
  const NonlinearTerm& nonlinear_term() const { return nonlinear_; }

  /// exp(nu lambda_m dt) per mode.
  std::span<const double> decay() const { return decay_; }

 private:
  void check_path(const NoisePath& path) const;
  void finish(State& state, std::span<const double> next);

  ModelSpec model_;
  SolverConfig cfg_;
  double dt_;
  BasisPtr basis_;
  std::shared_ptr<const NoiseSpec> noise_;
  NonlinearTerm nonlinear_;
  std::vector<double> decay_;
  std::vector<double> half_decay_;
  std::vector<double> flux_;
  std::vector<double> half_;
  std::vector<double> next_;
  std::vector<double> next_b_;
  std::vector<double> increment_;
};

/// One step from a self-contained (model, cfg) pair. Builds a Stepper per
/// call; loops should hold a Stepper instead.
State step(const State& state, const ModelSpec& model, const SolverConfig& cfg, NoisePath& path);
std::pair<State, State> coupled_step(const State& a, const State& b, const ModelSpec& model, const SolverConfig& cfg,
                                     NoisePath& path);

struct PicardSegment {
  double t_start = 0.0;
  int steps = 0;
  int iterations = 0;
  std::vector<double> gaps;  // sup over the segment grid of |v_{j+1} - v_j|_H1
};

struct PicardResult {
  std::vector<double> times;
  std::vector<SpectralField> trajectory;
  std::vector<PicardSegment> segments;
  int halvings = 0;
  bool converged = true;
  std::string message;
};

/// Fixed point of the mild-solution map
///   (Gv)(t) = S_t u0 - int_0^t S_{t-s} d/dx A(v(s)) ds + w(t)
/// on the step grid of `cfg.dt`, with the time integral done by the
/// integrating-factor trapezoid rule and w rebuilt from `path` (consumed
/// exactly as Stepper::step would). Iterates until the sup-in-time H1 gap
/// between successive iterates drops below `cfg.picard_tol`; on divergence
/// or stalling the segment length is halved and the horizon is covered
/// segment by segment. Non-convergence after `cfg.picard_max_halvings`
/// halvings is reported in the result, not thrown.
PicardResult picard_solve(const SpectralField& u0, const ModelSpec& model, const SolverConfig& cfg, double horizon,
                          NoisePath& path);

}  // namespace sclaw
