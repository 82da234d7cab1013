#include "sclaw/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sclaw/rng.hpp"

namespace sclaw {

NoiseSpec NoiseSpec::diagonal(std::vector<double> sigma) {
  if (sigma.empty() || sigma.size() % 2 != 0)
    throw std::invalid_argument("NoiseSpec: need an even, non-empty list of amplitudes");
  for (double s : sigma)
    if (!std::isfinite(s)) throw std::invalid_argument("NoiseSpec: non-finite amplitude");
  NoiseSpec n;
  n.modes_ = static_cast<int>(sigma.size());
  n.sigma_ = std::move(sigma);
  return n;
}

NoiseSpec NoiseSpec::from_profile(int modes, NoiseProfile profile) {
  if (!std::isfinite(profile.c) || !std::isfinite(profile.q))
    throw std::invalid_argument("NoiseSpec: non-finite profile parameters");
  std::vector<double> sigma(static_cast<std::size_t>(modes));
  for (int m = 1; m <= modes; ++m)
    sigma[static_cast<std::size_t>(m - 1)] = profile.c * std::pow(1.0 + mode_wavenumber(m), -profile.q);
  NoiseSpec n = diagonal(std::move(sigma));
  n.profile_ = profile;
  return n;
}

NoiseSpec NoiseSpec::dense(int family_size, int modes, std::vector<double> loadings) {
  if (family_size < 1 || modes < 2 || modes % 2 != 0)
    throw std::invalid_argument("NoiseSpec: dense family needs >= 1 member and an even mode count");
  if (loadings.size() != static_cast<std::size_t>(family_size) * static_cast<std::size_t>(modes))
    throw std::invalid_argument("NoiseSpec: loading matrix has the wrong shape");
  for (double g : loadings)
    if (!std::isfinite(g)) throw std::invalid_argument("NoiseSpec: non-finite loading");
  NoiseSpec n;
  n.modes_ = modes;
  n.family_size_ = family_size;
  n.loadings_ = std::move(loadings);
  return n;
}

double NoiseSpec::loading(int k, int m) const {
  if (m < 1 || m > modes_) throw std::out_of_range("NoiseSpec::loading: mode out of range");
  if (is_diagonal()) {
    if (k < 1 || k > modes_) throw std::out_of_range("NoiseSpec::loading: family index out of range");
    return k == m ? sigma_[static_cast<std::size_t>(m - 1)] : 0.0;
  }
  if (k < 1 || k > family_size_) throw std::out_of_range("NoiseSpec::loading: family index out of range");
  return loadings_[static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(modes_) + static_cast<std::size_t>(m - 1)];
}

double NoiseSpec::mode_variance(int m) const {
  if (is_diagonal()) {
    const double s = sigma_.at(static_cast<std::size_t>(m - 1));
    return s * s;
  }
  double v = 0.0;
  for (int k = 1; k <= family_size_; ++k) {
    const double g = loading(k, m);
    v += g * g;
  }
  return v;
}

NoiseTraces trace_h2(const NoiseSpec& spec) {
  NoiseTraces tr;
  for (int m = 1; m <= spec.modes(); ++m) {
    const double var = spec.mode_variance(m);
    const double lambda = mode_eigenvalue(m);
    tr.h2 += lambda * lambda * var;
    tr.l2 += var;
  }
  return tr;
}

OuTransition ou_transition(const NoiseSpec& spec, const ModeBasis& basis, double nu, double h) {
  OuTransition tr;
  const auto lambda = basis.eigenvalues();
  tr.decay.resize(lambda.size());
  tr.stddev.resize(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double rate = nu * lambda[i];
    tr.decay[i] = std::exp(rate * h);
    // var * (1 - e^{2 rate h}) / (-2 rate), written with expm1 for small rate * h
    const double var = spec.mode_variance(static_cast<int>(i) + 1);
    tr.stddev[i] = std::sqrt(var * -std::expm1(2.0 * rate * h) / (-2.0 * rate));
  }
  return tr;
}

NoisePath::NoisePath(BasisPtr basis, std::shared_ptr<const NoiseSpec> spec, double nu, std::uint64_t seed,
                     double fine_dt)
    : basis_(std::move(basis)), spec_(std::move(spec)), nu_(nu), seed_(seed), fine_dt_(fine_dt) {
  if (spec_->modes() != basis_->modes()) throw std::invalid_argument("NoisePath: noise and basis mode counts differ");
  if (!(nu > 0.0)) throw std::invalid_argument("NoisePath: nu must be > 0");
  if (!(fine_dt > 0.0)) throw std::invalid_argument("NoisePath: fine_dt must be > 0");
  fine_ = ou_transition(*spec_, *basis_, nu_, fine_dt_);
  conv_.assign(static_cast<std::size_t>(basis_->modes()), 0.0);
  scratch_.assign(conv_.size(), 0.0);
  family_scratch_.assign(static_cast<std::size_t>(std::max(spec_->family_size(), 0)), 0.0);
}

std::uint64_t NoisePath::substeps(double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("NoisePath: dt must be > 0");
  const double ratio = dt / fine_dt_;
  const double k = std::round(ratio);
  if (k < 1.0 || std::abs(ratio - k) > 1e-9 * k)
    throw std::invalid_argument("NoisePath: dt=" + std::to_string(dt) + " is not a multiple of fine_dt=" +
                                std::to_string(fine_dt_));
  return static_cast<std::uint64_t>(k);
}

void NoisePath::fine_innovation(std::uint64_t step, std::span<double> out) {
  const int modes = basis_->modes();
  if (spec_->is_diagonal()) {
    for (int m = 1; m <= modes; ++m) {
      const double sd = fine_.stddev[static_cast<std::size_t>(m - 1)];
      out[static_cast<std::size_t>(m - 1)] =
          sd == 0.0 ? 0.0
                    : sd * rng::normal({seed_, rng::streams::ou_innovation, static_cast<std::uint32_t>(m), step});
    }
    return;
  }
  // Dense loadings: exponential Euler-Maruyama, S_h (sum_k g_k dW^k).
  const double root_h = std::sqrt(fine_dt_);
  auto& dw = family_scratch_;
  for (int k = 1; k <= spec_->family_size(); ++k)
    dw[static_cast<std::size_t>(k - 1)] =
        root_h * rng::normal({seed_, rng::streams::dense_family, static_cast<std::uint32_t>(k), step});
  for (int m = 1; m <= modes; ++m) {
    double acc = 0.0;
    for (int k = 1; k <= spec_->family_size(); ++k) acc += spec_->loading(k, m) * dw[static_cast<std::size_t>(k - 1)];
    out[static_cast<std::size_t>(m - 1)] = fine_.decay[static_cast<std::size_t>(m - 1)] * acc;
  }
}

void NoisePath::advance(double dt, std::span<double> increment) {
  const std::uint64_t k = substeps(dt);
  std::fill(increment.begin(), increment.end(), 0.0);
  for (std::uint64_t j = 0; j < k; ++j) {
    fine_innovation(fine_steps_, scratch_);
    for (std::size_t i = 0; i < conv_.size(); ++i) {
      increment[i] = fine_.decay[i] * increment[i] + scratch_[i];
      conv_[i] = fine_.decay[i] * conv_[i] + scratch_[i];
    }
    ++fine_steps_;
  }
  t_ += dt;
}

void NoisePath::wiener_increment(double dt, std::span<double> increment) {
  if (!(dt > 0.0)) throw std::invalid_argument("wiener_increment: dt must be > 0");
  const double root_dt = std::sqrt(dt);
  const int modes = basis_->modes();
  const std::uint64_t draw = wiener_draws_++;
  if (spec_->is_diagonal()) {
    const auto sigma = spec_->sigma();
    for (int m = 1; m <= modes; ++m) {
      const double s = sigma[static_cast<std::size_t>(m - 1)];
      increment[static_cast<std::size_t>(m - 1)] =
          s == 0.0 ? 0.0
                   : s * root_dt *
                         rng::normal({seed_, rng::streams::wiener_increment, static_cast<std::uint32_t>(m), draw});
    }
    return;
  }
  for (int k = 1; k <= spec_->family_size(); ++k)
    family_scratch_[static_cast<std::size_t>(k - 1)] =
        root_dt * rng::normal({seed_, rng::streams::wiener_increment, static_cast<std::uint32_t>(k), draw});
  for (int m = 1; m <= modes; ++m) {
    double acc = 0.0;
    for (int k = 1; k <= spec_->family_size(); ++k)
      acc += spec_->loading(k, m) * family_scratch_[static_cast<std::size_t>(k - 1)];
    increment[static_cast<std::size_t>(m - 1)] = acc;
  }
}

void NoisePath::restore(std::uint64_t fine_steps, double t, std::span<const double> convolution) {
  if (convolution.size() != conv_.size()) throw std::invalid_argument("NoisePath::restore: size mismatch");
  fine_steps_ = fine_steps;
  t_ = t;
  std::copy(convolution.begin(), convolution.end(), conv_.begin());
}

SpectralField sample_wiener_increment(NoisePath& path, double dt) {
  SpectralField out(path.basis_ptr());
  path.wiener_increment(dt, out.coeffs());
  return out;
}

SpectralField ou_convolution_step(NoisePath& path, double dt) {
  std::vector<double> inc(static_cast<std::size_t>(path.basis().modes()));
  path.advance(dt, inc);
  return path.convolution_field();
}

double predicted_h2_step_stddev(const NoiseSpec& spec, const ModeBasis& basis, double nu, double dt) {
  const OuTransition tr = ou_transition(spec, basis, nu, dt);
  const auto lambda = basis.eigenvalues();
  double acc = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) acc += lambda[i] * lambda[i] * tr.stddev[i] * tr.stddev[i];
  return std::sqrt(acc);
}

ContinuityReport continuity_check(std::span<const double> h2_norms, double step_stddev, double multiple) {
  ContinuityReport r;
  if (h2_norms.size() < 2) return r;
  double sq = 0.0;
  const double limit = multiple * step_stddev;
  for (std::size_t i = 0; i + 1 < h2_norms.size(); ++i) {
    const double jump = std::abs(h2_norms[i + 1] - h2_norms[i]);
    r.max_jump = std::max(r.max_jump, jump);
    sq += jump * jump;
    if (jump > limit) r.flagged.push_back(i);
  }
  r.rms_jump = std::sqrt(sq / static_cast<double>(h2_norms.size() - 1));
  return r;
}

}  // namespace sclaw
