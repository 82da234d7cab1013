#include "sclaw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sclaw/fft.hpp"

namespace sclaw {

double mode_eigenvalue(int m) {
  if (m < 1) throw std::out_of_range("mode index must be >= 1");
  const double k = 2.0 * std::numbers::pi * mode_wavenumber(m);
  return -k * k;
}

ModeBasis::ModeBasis(int modes, int grid_points)
    : modes_(modes), grid_points_(grid_points == 0 ? 2 * modes : grid_points) {
  if (modes < 2 || modes % 2 != 0)
    throw std::invalid_argument("ModeBasis: modes must be a positive even integer");
  if (grid_points_ < modes_ + 2 || grid_points_ % 2 != 0)
    throw std::invalid_argument("ModeBasis: grid_points must be even and >= modes + 2");
  eigenvalues_.resize(static_cast<std::size_t>(modes_));
  for (int m = 1; m <= modes_; ++m) eigenvalues_[static_cast<std::size_t>(m - 1)] = mode_eigenvalue(m);
}

double ModeBasis::eigenvalue(int m) const {
  if (m < 1 || m > modes_)
    throw std::out_of_range("mode index " + std::to_string(m) + " outside [1, " + std::to_string(modes_) + "]");
  return eigenvalues_[static_cast<std::size_t>(m - 1)];
}

double ModeBasis::eval(int m, double x) const {
  if (m < 1 || m > modes_)
    throw std::out_of_range("mode index " + std::to_string(m) + " outside [1, " + std::to_string(modes_) + "]");
  const double arg = 2.0 * std::numbers::pi * mode_wavenumber(m) * x;
  return std::numbers::sqrt2 * (m % 2 == 1 ? std::sin(arg) : std::cos(arg));
}

std::vector<double> ModeBasis::quadrature_points() const {
  std::vector<double> x(static_cast<std::size_t>(grid_points_));
  for (int j = 0; j < grid_points_; ++j) x[static_cast<std::size_t>(j)] = static_cast<double>(j) / grid_points_;
  return x;
}

SpectralField::SpectralField(BasisPtr basis)
    : basis_(std::move(basis)), coeffs_(static_cast<std::size_t>(basis_->modes()), 0.0) {}

SpectralField::SpectralField(BasisPtr basis, std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != basis_->modes())
    throw std::invalid_argument("SpectralField: coefficient count does not match basis");
}

SpectralField SpectralField::mode(BasisPtr basis, int m, double amplitude) {
  SpectralField f(std::move(basis));
  f.coeffs_.at(static_cast<std::size_t>(m - 1)) = amplitude;
  return f;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return std::isfinite(c); });
}

SpectralField& SpectralField::operator+=(const SpectralField& rhs) {
  if (!same_basis(rhs)) throw std::invalid_argument("SpectralField: basis mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& rhs) {
  if (!same_basis(rhs)) throw std::invalid_argument("SpectralField: basis mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

bool SpectralField::operator==(const SpectralField& other) const {
  return same_basis(other) && coeffs_ == other.coeffs_;
}

double PhysicalField::mean() const {
  if (samples.empty()) return 0.0;
  double s = 0.0;
  for (double v : samples) s += v;
  return s / static_cast<double>(samples.size());
}

PhysicalField to_physical(const SpectralField& f) { return to_physical(f, f.basis().grid_points()); }

PhysicalField to_physical(const SpectralField& f, int grid_points) {
  if (grid_points < f.size() + 2) throw std::invalid_argument("to_physical: grid too coarse for the retained modes");
  PhysicalField g{std::vector<double>(static_cast<std::size_t>(grid_points))};
  thread_fft(grid_points).synthesize(f.coeffs(), g.samples);
  return g;
}

SpectralProjection to_spectral_with_mean(const PhysicalField& g, BasisPtr basis) {
  if (g.size() != basis->grid_points())
    throw std::invalid_argument("to_spectral: expected " + std::to_string(basis->grid_points()) + " samples, got " +
                                std::to_string(g.size()));
  SpectralField f(basis);
  const double mean = thread_fft(g.size()).analyze(g.samples, f.coeffs());
  double scale = 1.0;
  for (double v : g.samples) scale = std::max(scale, std::abs(v));
  if (std::abs(mean) > 1e-12 * scale)
    throw std::domain_error("to_spectral: sample mean " + std::to_string(mean) + " is not zero");
  return {std::move(f), mean};
}

SpectralField to_spectral(const PhysicalField& g, BasisPtr basis) {
  return to_spectral_with_mean(g, std::move(basis)).field;
}

double sobolev_norm_sq(std::span<const double> coeffs, std::span<const double> eigenvalues, double s) {
  double acc = 0.0;
  if (s == 0.0) {
    for (double c : coeffs) acc += c * c;
  } else if (s == 1.0) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) acc += -eigenvalues[i] * coeffs[i] * coeffs[i];
  } else if (s == 2.0) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) acc += eigenvalues[i] * eigenvalues[i] * coeffs[i] * coeffs[i];
  } else {
    for (std::size_t i = 0; i < coeffs.size(); ++i) acc += std::pow(-eigenvalues[i], s) * coeffs[i] * coeffs[i];
  }
  return acc;
}

double sobolev_norm(const SpectralField& f, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("sobolev_norm: s must be >= 0");
  return std::sqrt(sobolev_norm_sq(f.coeffs(), f.basis().eigenvalues(), s));
}

double lp_norm(const PhysicalField& g, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (g.samples.empty()) return 0.0;
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : g.samples) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  if (p == 1.0) {
    for (double v : g.samples) acc += std::abs(v);
  } else if (p == 2.0) {
    for (double v : g.samples) acc += v * v;
  } else {
    for (double v : g.samples) acc += std::pow(std::abs(v), p);
  }
  return std::pow(acc / static_cast<double>(g.samples.size()), 1.0 / p);
}

SpectralField heat_apply(const SpectralField& f, double nu, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat_apply: t must be >= 0");
  if (!(nu > 0.0)) throw std::invalid_argument("heat_apply: nu must be > 0");
  SpectralField out = f;
  const auto lambda = f.basis().eigenvalues();
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(nu * lambda[i] * t);
  return out;
}

void derivative_inplace(std::span<double> coeffs) {
  for (std::size_t k = 1; 2 * k <= coeffs.size(); ++k) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(k);
    const double a = coeffs[2 * k - 2];
    const double b = coeffs[2 * k - 1];
    coeffs[2 * k - 2] = -w * b;
    coeffs[2 * k - 1] = w * a;
  }
}

SpectralField spectral_derivative(const SpectralField& f) {
  SpectralField out = f;
  derivative_inplace(out.coeffs());
  return out;
}

}  // namespace sclaw
