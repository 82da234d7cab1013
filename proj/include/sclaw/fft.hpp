#pragma once

#include <span>

namespace sclaw {

/// Real transform between sine/cosine coefficients and equispaced samples.
///
/// Owns its FFTW plans and scratch buffers. Not thread-safe; use one instance
/// per thread (see `thread_fft`). Plans are built with FFTW_ESTIMATE so the
/// selected algorithm, and therefore every output bit, is reproducible.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return n_; }

  /// samples[j] = sum_m coeffs[m-1] e_m(j / n). Requires coeffs.size() < n - 1
  /// so the Nyquist bin is never touched.
  void synthesize(std::span<const double> coeffs, std::span<double> samples);

  /// Inverse of `synthesize` for band-limited data: writes the first
  /// coeffs.size() basis coefficients and returns the sample mean.
  double analyze(std::span<const double> samples, std::span<double> coeffs);

 private:
  int n_;
  double* real_ = nullptr;
  void* spectrum_ = nullptr;  // fftw_complex[n/2 + 1]
  void* forward_ = nullptr;   // fftw_plan
  void* backward_ = nullptr;  // fftw_plan
};

/// Per-thread cached transform of size n.
RealFft& thread_fft(int n);

/// Smallest even n' >= n whose only prime factors are 2, 3 and 5.
int fft_friendly_size(int n);

}  // namespace sclaw
