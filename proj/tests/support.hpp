#pragma once

#include <cmath>
#include <random>

#include "sclaw/spectral.hpp"

namespace sclaw::testing {

// Random band-limited field with coefficients ~ N(0, 1) * amplitude / k^decay.
inline SpectralField random_field(const BasisPtr& basis, std::mt19937_64& gen, double amplitude = 1.0,
                                  double decay = 1.0) {
  std::normal_distribution<double> n01;
  SpectralField f(basis);
  for (int m = 1; m <= basis->modes(); ++m)
    f.coeff(m) = amplitude * n01(gen) / std::pow(static_cast<double>(mode_wavenumber(m)), decay);
  return f;
}

// Direct synthesis on an arbitrary point, no FFT involved.
inline double direct_eval(const SpectralField& f, double x) {
  double v = 0.0;
  for (int m = 1; m <= f.size(); ++m) v += f.coeff(m) * f.basis().eval(m, x);
  return v;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace sclaw::testing
