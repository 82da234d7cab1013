#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sclaw/spectral.hpp"

namespace sclaw {

/// Amplitude profile sigma_m = c (1 + k)^{-q}, k the wavenumber of mode m.
struct NoiseProfile {
  double c = 1.0;
  double q = 3.0;

  bool operator==(const NoiseProfile&) const = default;
};

/// Covariance of the Q-Wiener forcing W^Q = sum_k g_k W^k.
///
/// Diagonal form: g_m = sigma_m e_m. Dense form: loading matrix
/// G[k][m] = <g_k, e_m>, stored row-major with one row per family member.
class NoiseSpec {
 public:
  NoiseSpec() = default;

  static NoiseSpec diagonal(std::vector<double> sigma);
  static NoiseSpec from_profile(int modes, NoiseProfile profile);
  static NoiseSpec dense(int family_size, int modes, std::vector<double> loadings);
  static NoiseSpec none(int modes) { return diagonal(std::vector<double>(static_cast<std::size_t>(modes), 0.0)); }

  int modes() const { return modes_; }
  bool is_diagonal() const { return family_size_ == 0; }
  int family_size() const { return family_size_; }
  const std::optional<NoiseProfile>& profile() const { return profile_; }

  /// Diagonal amplitudes (empty for dense specs).
  std::span<const double> sigma() const { return sigma_; }
  /// <g_k, e_m> for 1-based k and m.
  double loading(int k, int m) const;

  /// Per-unit-time variance of mode m: sum_k G[k][m]^2.
  double mode_variance(int m) const;
  bool is_silent(int m) const { return mode_variance(m) == 0.0; }

  bool operator==(const NoiseSpec& other) const = default;

 private:
  int modes_ = 0;
  int family_size_ = 0;
  std::vector<double> sigma_;
  std::vector<double> loadings_;
  std::optional<NoiseProfile> profile_;
};

struct NoiseTraces {
  double h2 = 0.0;  // D_0 = sum_k |g_k|_{H2}^2
  double l2 = 0.0;  // sum_k |g_k|_{L2}^2
};

NoiseTraces trace_h2(const NoiseSpec& spec);

/// Exact OU transition data of every mode over a step h.
struct OuTransition {
  std::vector<double> decay;  // exp(nu lambda_m h)
  std::vector<double> stddev; // sqrt(var_m (1 - exp(2 nu lambda_m h)) / (-2 nu lambda_m))
};

OuTransition ou_transition(const NoiseSpec& spec, const ModeBasis& basis, double nu, double h);

/// One realisation of W^Q and of its stochastic convolution
/// w_m(t) = int_0^t exp(nu lambda_m (t - s)) dW_m(s).
///
/// Innovations are drawn from a counter-based generator addressed by
/// (seed, mode, fine step), so a path is a pure function of its seed. Any
/// step that is a whole multiple of `fine_dt` composes the exact fine-step
/// transitions; coarse and fine integrations therefore see the same
/// Brownian path. Single owner; copy to branch.
class NoisePath {
 public:
  NoisePath(BasisPtr basis, std::shared_ptr<const NoiseSpec> spec, double nu, std::uint64_t seed, double fine_dt);

  const ModeBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const NoiseSpec& spec() const { return *spec_; }
  double nu() const { return nu_; }
  std::uint64_t seed() const { return seed_; }
  double fine_dt() const { return fine_dt_; }
  std::uint64_t fine_steps() const { return fine_steps_; }
  double time() const { return t_; }

  /// Current w(t) coefficients.
  std::span<const double> convolution() const { return conv_; }
  SpectralField convolution_field() const { return SpectralField(basis_, conv_); }

  /// Number of fine steps in dt; throws if dt is not a whole multiple of fine_dt.
  std::uint64_t substeps(double dt) const;

  /// Advances w by dt and writes w(t + dt) - S_dt w(t) into `increment`.
  void advance(double dt, std::span<double> increment);

  /// Independent Brownian increment of W^Q over dt (mode-m variance
  /// dt * mode_variance(m)), drawn from its own stream.
  void wiener_increment(double dt, std::span<double> increment);

  /// Repositions the path, e.g. when resuming from a snapshot.
  void restore(std::uint64_t fine_steps, double t, std::span<const double> convolution);

 private:
  void fine_innovation(std::uint64_t step, std::span<double> out);

  BasisPtr basis_;
  std::shared_ptr<const NoiseSpec> spec_;
  double nu_;
  std::uint64_t seed_;
  double fine_dt_;
  OuTransition fine_;
  std::uint64_t fine_steps_ = 0;
  std::uint64_t wiener_draws_ = 0;
  double t_ = 0.0;
  std::vector<double> conv_;
  std::vector<double> scratch_;
  std::vector<double> family_scratch_;
};

/// Wiener increment over dt as a field.
SpectralField sample_wiener_increment(NoisePath& path, double dt);

/// Advances the stochastic convolution by dt and returns w(t + dt).
SpectralField ou_convolution_step(NoisePath& path, double dt);

/// Standard deviation of one step of the H2 norm of w in stationarity,
/// sqrt(sum_m lambda_m^2 var_m (1 - exp(2 nu lambda_m dt)) / (-2 nu lambda_m)).
double predicted_h2_step_stddev(const NoiseSpec& spec, const ModeBasis& basis, double nu, double dt);

struct ContinuityReport {
  double max_jump = 0.0;
  double rms_jump = 0.0;
  std::vector<std::size_t> flagged;  // indices i with |x_{i+1} - x_i| over the limit
};

/// Scans a recorded series of H2 norms of w for step-to-step jumps larger
/// than `multiple * step_stddev`.
ContinuityReport continuity_check(std::span<const double> h2_norms, double step_stddev, double multiple = 8.0);

}  // namespace sclaw
