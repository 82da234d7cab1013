#include "sclaw/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace sclaw {

namespace {

// The FFTW planner is not reentrant; execution with distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr double kSqrt2 = 1.41421356237309504880;

}  // namespace

RealFft::RealFft(int n) : n_(n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("RealFft: size must be even and >= 2");
  real_ = fftw_alloc_real(static_cast<std::size_t>(n));
  auto* spec = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
  spectrum_ = spec;
  std::lock_guard<std::mutex> lock(planner_mutex());
  forward_ = fftw_plan_dft_r2c_1d(n, real_, spec, FFTW_ESTIMATE);
  backward_ = fftw_plan_dft_c2r_1d(n, spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_));
  }
  fftw_free(real_);
  fftw_free(spectrum_);
}

void RealFft::synthesize(std::span<const double> coeffs, std::span<double> samples) {
  const int modes = static_cast<int>(coeffs.size());
  if (static_cast<int>(samples.size()) != n_) throw std::invalid_argument("RealFft::synthesize: sample size mismatch");
  if (modes >= n_ - 1 || modes % 2 != 0) throw std::invalid_argument("RealFft::synthesize: too many modes for grid");

  auto* spec = static_cast<fftw_complex*>(spectrum_);
  std::fill_n(&spec[0][0], 2 * (n_ / 2 + 1), 0.0);
  // u = sum_k sqrt2 (a_k sin + b_k cos) => c_k = (b_k - i a_k) / sqrt2
  for (int k = 1; k <= modes / 2; ++k) {
    const double a = coeffs[2 * k - 2];
    const double b = coeffs[2 * k - 1];
    spec[k][0] = b / kSqrt2;
    spec[k][1] = -a / kSqrt2;
  }
  fftw_execute(static_cast<fftw_plan>(backward_));
  std::copy_n(real_, n_, samples.begin());
}

double RealFft::analyze(std::span<const double> samples, std::span<double> coeffs) {
  const int modes = static_cast<int>(coeffs.size());
  if (static_cast<int>(samples.size()) != n_) throw std::invalid_argument("RealFft::analyze: sample size mismatch");
  if (modes >= n_ - 1 || modes % 2 != 0) throw std::invalid_argument("RealFft::analyze: too many modes for grid");

  std::copy(samples.begin(), samples.end(), real_);
  fftw_execute(static_cast<fftw_plan>(forward_));
  const auto* spec = static_cast<const fftw_complex*>(spectrum_);
  const double scale = kSqrt2 / n_;
  for (int k = 1; k <= modes / 2; ++k) {
    coeffs[2 * k - 2] = -spec[k][1] * scale;
    coeffs[2 * k - 1] = spec[k][0] * scale;
  }
  return spec[0][0] / n_;
}

RealFft& thread_fft(int n) {
  thread_local std::unordered_map<int, std::unique_ptr<RealFft>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFft>(n);
  return *slot;
}

int fft_friendly_size(int n) {
  int candidate = std::max(2, n + (n % 2));
  for (;; candidate += 2) {
    int r = candidate;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return candidate;
  }
}

}  // namespace sclaw
