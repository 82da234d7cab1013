#include "sclaw/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sclaw/errors.hpp"
#include "sclaw/fft.hpp"

namespace sclaw {

namespace {

int effective_degree(const std::vector<double>& coeffs) {
  int d = static_cast<int>(coeffs.size()) - 1;
  while (d > 0 && coeffs[static_cast<std::size_t>(d)] == 0.0) --d;
  return std::max(d, 0);
}

double horner(const std::vector<double>& c, double v) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * v + *it;
  return acc;
}

double horner_derivative(const std::vector<double>& c, double v) {
  double acc = 0.0;
  for (std::size_t j = c.size(); j-- > 1;) acc = acc * v + static_cast<double>(j) * c[j];
  return acc;
}

double derivative_coefficient_sum(std::span<const double> coeffs) {
  double s = 0.0;
  for (std::size_t j = 1; j < coeffs.size(); ++j) s += static_cast<double>(j) * std::abs(coeffs[j]);
  return s;
}

}  // namespace

FluxSpec FluxSpec::zero() { return FluxSpec(); }

FluxSpec FluxSpec::burgers() {
  FluxSpec f;
  f.kind_ = FluxKind::burgers;
  f.coeffs_ = {0.0, 0.0, 0.5};
  f.degree_ = 2;
  return f;
}

FluxSpec FluxSpec::polynomial(std::vector<double> coeffs) {
  const int degree = effective_degree(coeffs);
  const int p = std::max(1, degree - 1);
  const double c1 = std::max(1.0, derivative_coefficient_sum(coeffs));
  return polynomial(std::move(coeffs), p, c1);
}

FluxSpec FluxSpec::polynomial(std::vector<double> coeffs, int growth_exponent, double growth_constant) {
  for (double c : coeffs)
    if (!std::isfinite(c)) throw std::invalid_argument("polynomial flux: non-finite coefficient");
  if (growth_exponent < 1) throw std::invalid_argument("polynomial flux: p_A must be a positive integer");
  if (!(growth_constant > 0.0)) throw std::invalid_argument("polynomial flux: C_1 must be > 0");
  if (!growth_bound_holds(coeffs, growth_exponent, growth_constant))
    throw std::invalid_argument("polynomial flux: |A'(v)| <= C_1 (1 + |v|^p_A) does not hold for the declared C_1, p_A");
  FluxSpec f;
  f.kind_ = FluxKind::polynomial;
  f.degree_ = effective_degree(coeffs);
  coeffs.resize(static_cast<std::size_t>(f.degree_ + 1));
  f.coeffs_ = std::move(coeffs);
  f.growth_exponent_ = growth_exponent;
  f.growth_constant_ = growth_constant;
  return f;
}

FluxSpec FluxSpec::callback(ScalarFn value, ScalarFn derivative, int growth_exponent, double growth_constant,
                            int degree_hint) {
  if (!value || !derivative) throw std::invalid_argument("callback flux: value and derivative are required");
  if (growth_exponent < 1 || !(growth_constant > 0.0))
    throw std::invalid_argument("callback flux: need p_A >= 1 and C_1 > 0");
  FluxSpec f;
  f.kind_ = FluxKind::callback;
  f.value_fn_ = std::move(value);
  f.derivative_fn_ = std::move(derivative);
  f.growth_exponent_ = growth_exponent;
  f.growth_constant_ = growth_constant;
  f.degree_ = degree_hint > 0 ? degree_hint : growth_exponent + 1;
  return f;
}

bool FluxSpec::growth_bound_holds(std::span<const double> coeffs, int growth_exponent, double growth_constant) {
  // |A'(v)| <= sum_j j|a_j| |v|^{j-1} <= (sum_j j|a_j|)(1 + |v|^p) whenever j - 1 <= p.
  std::vector<double> c(coeffs.begin(), coeffs.end());
  const int degree = effective_degree(c);
  if (degree - 1 > growth_exponent) return false;
  return derivative_coefficient_sum(coeffs) <= growth_constant * (1.0 + 1e-12);
}

double FluxSpec::value(double v) const {
  double r = 0.0;
  switch (kind_) {
    case FluxKind::zero: return 0.0;
    case FluxKind::burgers: r = 0.5 * v * v; break;
    case FluxKind::polynomial: r = horner(coeffs_, v); break;
    case FluxKind::callback: r = value_fn_(v); break;
  }
  if (!std::isfinite(r)) throw BlowupError(BlowupKind::flux_overflow, std::numeric_limits<double>::quiet_NaN(), std::abs(v));
  return r;
}

double FluxSpec::derivative(double v) const {
  double r = 0.0;
  switch (kind_) {
    case FluxKind::zero: return 0.0;
    case FluxKind::burgers: r = v; break;
    case FluxKind::polynomial: r = horner_derivative(coeffs_, v); break;
    case FluxKind::callback: r = derivative_fn_(v); break;
  }
  if (!std::isfinite(r)) throw BlowupError(BlowupKind::flux_overflow, std::numeric_limits<double>::quiet_NaN(), std::abs(v));
  return r;
}

bool FluxSpec::operator==(const FluxSpec& other) const {
  if (kind_ == FluxKind::callback || other.kind_ == FluxKind::callback) return false;
  return kind_ == other.kind_ && coeffs_ == other.coeffs_ && growth_exponent_ == other.growth_exponent_ &&
         growth_constant_ == other.growth_constant_;
}

int dealiased_grid_points(int modes, int degree) {
  const int k = modes / 2;
  const int d = std::max(degree, 2);
  return fft_friendly_size(std::max((d + 1) * k + 1, modes + 2));
}

NonlinearTerm::NonlinearTerm(FluxSpec flux, BasisPtr basis)
    : flux_(std::move(flux)),
      basis_(std::move(basis)),
      grid_points_(dealiased_grid_points(basis_->modes(), flux_.degree())),
      samples_(static_cast<std::size_t>(grid_points_)) {}

void NonlinearTerm::evaluate(std::span<const double> u, std::span<double> out) {
  if (is_zero()) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  RealFft& fft = thread_fft(grid_points_);
  fft.synthesize(u, samples_);

  bool finite = true;
  switch (flux_.kind()) {
    case FluxKind::burgers:
      for (double& s : samples_) s = 0.5 * s * s;
      break;
    case FluxKind::polynomial: {
      const auto& c = flux_.coefficients();
      for (double& s : samples_) {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
        s = acc;
      }
      break;
    }
    case FluxKind::callback:
      for (double& s : samples_) s = flux_.value(s);
      break;
    case FluxKind::zero:
      break;
  }
  for (double s : samples_) finite = finite && std::isfinite(s);
  if (!finite)
    throw BlowupError(BlowupKind::flux_overflow, std::numeric_limits<double>::quiet_NaN(),
                      std::sqrt(sobolev_norm_sq(u, basis_->eigenvalues(), 1.0)));

  fft.analyze(samples_, out);
  derivative_inplace(out);
  for (double& c : out) c = -c;
}

SpectralField NonlinearTerm::operator()(const SpectralField& u) {
  SpectralField out(u.basis_ptr());
  evaluate(u.coeffs(), out.coeffs());
  return out;
}

SpectralField nonlinear_term(const FluxSpec& flux, const SpectralField& u) {
  NonlinearTerm term(flux, u.basis_ptr());
  return term(u);
}

double flux_energy_pairing(const FluxSpec& flux, const SpectralField& u, int p) {
  if (p < 2 || p % 2 != 0) throw std::invalid_argument("flux_energy_pairing: p must be an even integer >= 2");
  if (flux.kind() == FluxKind::zero) return 0.0;
  // u^{p-1} A'(u) u_x has polynomial degree (p - 1) + (deg - 1) + 1 in band-limited fields.
  const int n = dealiased_grid_points(u.size(), p - 1 + flux.degree());
  const PhysicalField values = to_physical(u, n);
  const PhysicalField slopes = to_physical(spectral_derivative(u), n);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double v = values.samples[static_cast<std::size_t>(j)];
    acc += std::pow(v, p - 1) * flux.derivative(v) * slopes.samples[static_cast<std::size_t>(j)];
  }
  return acc / n;
}

}  // namespace sclaw
