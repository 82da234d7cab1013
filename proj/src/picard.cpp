#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sclaw/integrator.hpp"

namespace sclaw {

namespace {

using Trajectory = std::vector<std::vector<double>>;

double h1_gap(std::span<const double> a, std::span<const double> b, std::span<const double> lambda) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += -lambda[i] * d * d;
  }
  return std::sqrt(acc);
}

struct SegmentOutcome {
  bool converged = false;
  PicardSegment record;
  Trajectory values;  // steps + 1 states, first is the segment start
};

// Picard iteration on grid points start..start+steps of the global grid.
SegmentOutcome solve_segment(Stepper& stepper, std::span<const double> u_start, const Trajectory& innovations,
                             std::size_t start, int steps, double t_start, const SolverConfig& cfg) {
  const std::size_t modes = u_start.size();
  const auto decay = stepper.decay();
  const auto lambda = stepper.basis()->eigenvalues();
  const double dt = stepper.dt();
  const auto count = static_cast<std::size_t>(steps) + 1;

  // Linear part S_{t - t_start} u_start + [w(t) - S_{t - t_start} w(t_start)].
  Trajectory linear(count, std::vector<double>(modes));
  std::vector<double> free_decay(u_start.begin(), u_start.end());
  std::vector<double> noise(modes, 0.0);
  linear[0] = free_decay;
  for (std::size_t n = 1; n < count; ++n) {
    const auto& xi = innovations[start + n - 1];
    for (std::size_t i = 0; i < modes; ++i) {
      free_decay[i] *= decay[i];
      noise[i] = decay[i] * noise[i] + xi[i];
      linear[n][i] = free_decay[i] + noise[i];
    }
  }

  SegmentOutcome out;
  out.record.t_start = t_start;
  out.record.steps = steps;
  out.values = linear;

  Trajectory flux(count, std::vector<double>(modes));
  Trajectory next(count, std::vector<double>(modes));
  std::vector<double> integral(modes);
  for (int iter = 1; iter <= cfg.picard_max_iter; ++iter) {
    try {
      for (std::size_t n = 0; n < count; ++n) stepper.nonlinear(out.values[n], flux[n]);
    } catch (const BlowupError&) {
      return out;
    }
    // I_n = S_dt I_{n-1} + dt/2 (S_dt F_{n-1} + F_n), I_0 = 0
    std::fill(integral.begin(), integral.end(), 0.0);
    next[0] = linear[0];
    double gap = 0.0;
    for (std::size_t n = 1; n < count; ++n) {
      for (std::size_t i = 0; i < modes; ++i) {
        integral[i] = decay[i] * (integral[i] + 0.5 * dt * flux[n - 1][i]) + 0.5 * dt * flux[n][i];
        next[n][i] = linear[n][i] + integral[i];
      }
      gap = std::max(gap, h1_gap(next[n], out.values[n], lambda));
    }
    out.values.swap(next);
    out.record.gaps.push_back(gap);
    out.record.iterations = iter;
    if (!std::isfinite(gap)) return out;
    if (gap < cfg.picard_tol) {
      out.converged = true;
      return out;
    }
    const auto& g = out.record.gaps;
    if (g.size() >= 3 && g[g.size() - 1] > g[g.size() - 2]) return out;  // not contracting
  }
  return out;
}

}  // namespace

PicardResult picard_solve(const SpectralField& u0, const ModelSpec& model, const SolverConfig& cfg, double horizon,
                          NoisePath& path) {
  if (!(horizon > 0.0)) throw std::invalid_argument("picard_solve: horizon must be > 0");
  Stepper stepper(model, cfg);
  const double dt = stepper.dt();
  const auto total = static_cast<std::size_t>(std::llround(horizon / dt));
  if (total == 0) throw std::invalid_argument("picard_solve: horizon shorter than one step");
  if (!u0.same_basis(SpectralField(stepper.basis()))) throw std::invalid_argument("picard_solve: basis mismatch");

  // Consume the path exactly as the stepper would, keeping each increment.
  const std::size_t modes = static_cast<std::size_t>(cfg.modes);
  Trajectory innovations(total, std::vector<double>(modes));
  for (auto& xi : innovations) path.advance(dt, xi);

  PicardResult result;
  result.times.push_back(0.0);
  result.trajectory.push_back(u0);

  std::vector<double> current(u0.coeffs().begin(), u0.coeffs().end());
  std::size_t done = 0;
  auto segment_steps = static_cast<int>(total);
  while (done < total) {
    const int steps = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(segment_steps), total - done));
    SegmentOutcome seg =
        solve_segment(stepper, current, innovations, done, steps, static_cast<double>(done) * dt, cfg);
    if (!seg.converged) {
      if (segment_steps == 1 || result.halvings >= cfg.picard_max_halvings) {
        result.converged = false;
        result.segments.push_back(std::move(seg.record));
        result.message = "no contraction after " + std::to_string(result.halvings) + " halvings at t=" +
                         std::to_string(static_cast<double>(done) * dt);
        return result;
      }
      segment_steps = std::max(1, segment_steps / 2);
      ++result.halvings;
      continue;
    }
    for (std::size_t n = 1; n < seg.values.size(); ++n) {
      result.times.push_back(static_cast<double>(done + n) * dt);
      result.trajectory.emplace_back(stepper.basis(), seg.values[n]);
    }
    current = seg.values.back();
    done += static_cast<std::size_t>(steps);
    result.segments.push_back(std::move(seg.record));
  }
  return result;
}

}  // namespace sclaw
