#include "sclaw/integrator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sclaw {

void ModelSpec::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw std::invalid_argument("model: violated nu > 0");
  if (noise.modes() == 0) throw std::invalid_argument("model: noise spec is empty");
}

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::exp_euler: return "exp_euler";
    case Scheme::exp_midpoint_flux: return "exp_midpoint_flux";
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "exp_euler") return Scheme::exp_euler;
  if (name == "exp_midpoint_flux") return Scheme::exp_midpoint_flux;
  return std::nullopt;
}

double default_dt(double nu, int modes) { return 0.5 / (nu * std::abs(mode_eigenvalue(modes))); }

std::optional<GuardTrip> guard_check(const State& state, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("guard_check: r must be > 0");
  const double h1_sq = sobolev_norm_sq(state.u.coeffs(), state.u.basis().eigenvalues(), 1.0);
  if (h1_sq >= r) return GuardTrip{state.t, h1_sq};
  return std::nullopt;
}

Stepper::Stepper(ModelSpec model, SolverConfig cfg)
    : model_(std::move(model)),
      cfg_(cfg),
      dt_(cfg.dt > 0.0 ? cfg.dt : default_dt(model_.nu, cfg.modes)),
      basis_(ModeBasis::make(cfg.modes)),
      noise_(std::make_shared<const NoiseSpec>(model_.noise)),
      nonlinear_(model_.flux, basis_) {
  model_.validate();
  if (model_.noise.modes() != cfg_.modes) throw std::invalid_argument("Stepper: noise spec and solver modes differ");
  if (cfg_.guard_radius && !(*cfg_.guard_radius > 0.0)) throw std::invalid_argument("Stepper: guard radius must be > 0");
  const auto lambda = basis_->eigenvalues();
  const std::size_t n = lambda.size();
  decay_.resize(n);
  half_decay_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    decay_[i] = std::exp(model_.nu * lambda[i] * dt_);
    half_decay_[i] = std::exp(model_.nu * lambda[i] * 0.5 * dt_);
  }
  flux_.assign(n, 0.0);
  half_.assign(n, 0.0);
  next_.assign(n, 0.0);
  next_b_.assign(n, 0.0);
  increment_.assign(n, 0.0);
}

NoisePath Stepper::make_path(std::uint64_t seed, double fine_dt) const {
  return NoisePath(basis_, noise_, model_.nu, seed, fine_dt > 0.0 ? fine_dt : dt_);
}

void Stepper::check_path(const NoisePath& path) const {
  if (path.basis().modes() != basis_->modes() || path.nu() != model_.nu)
    throw std::invalid_argument("Stepper: noise path built for a different model");
}

void Stepper::deterministic_update(std::span<const double> u, std::span<double> out) {
  const std::size_t n = decay_.size();
  if (nonlinear_.is_zero()) {
    for (std::size_t i = 0; i < n; ++i) out[i] = decay_[i] * u[i];
    return;
  }
  nonlinear_.evaluate(u, flux_);
  switch (cfg_.scheme) {
    case Scheme::exp_euler:
      for (std::size_t i = 0; i < n; ++i) out[i] = decay_[i] * (u[i] + dt_ * flux_[i]);
      break;
    case Scheme::exp_midpoint_flux:
      for (std::size_t i = 0; i < n; ++i) half_[i] = half_decay_[i] * (u[i] + 0.5 * dt_ * flux_[i]);
      nonlinear_.evaluate(half_, flux_);
      for (std::size_t i = 0; i < n; ++i) out[i] = decay_[i] * u[i] + dt_ * half_decay_[i] * flux_[i];
      break;
  }
}

void Stepper::finish(State& state, std::span<const double> next) {
  auto c = state.u.coeffs();
  bool finite = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = next[i] + increment_[i];
    finite = finite && std::isfinite(c[i]);
  }
  ++state.step;
  state.t = static_cast<double>(state.step) * dt_;
  if (!finite) throw BlowupError(BlowupKind::non_finite_state, state.t, std::numeric_limits<double>::quiet_NaN());
  if (cfg_.guard_radius) {
    if (const auto trip = guard_check(state, *cfg_.guard_radius))
      throw BlowupError(BlowupKind::guard_trip, trip->t, std::sqrt(trip->h1_sq));
  }
}

void Stepper::step(State& state, NoisePath& path) {
  check_path(path);
  try {
    deterministic_update(state.u.coeffs(), next_);
  } catch (const BlowupError& e) {
    throw e.at_time(state.t);
  }
  path.advance(dt_, increment_);
  finish(state, next_);
}

void Stepper::coupled_step(State& a, State& b, NoisePath& path) {
  check_path(path);
  if (a.t != b.t) throw std::invalid_argument("coupled_step: states are at different times");
  try {
    deterministic_update(a.u.coeffs(), next_);
    deterministic_update(b.u.coeffs(), next_b_);
  } catch (const BlowupError& e) {
    throw e.at_time(a.t);
  }
  path.advance(dt_, increment_);
  finish(a, next_);
  finish(b, next_b_);
}

State step(const State& state, const ModelSpec& model, const SolverConfig& cfg, NoisePath& path) {
  Stepper stepper(model, cfg);
  State next = state;
  stepper.step(next, path);
  return next;
}

std::pair<State, State> coupled_step(const State& a, const State& b, const ModelSpec& model, const SolverConfig& cfg,
                                     NoisePath& path) {
  Stepper stepper(model, cfg);
  std::pair<State, State> next{a, b};
  stepper.coupled_step(next.first, next.second, path);
  return next;
}

}  // namespace sclaw
