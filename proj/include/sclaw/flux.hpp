#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sclaw/spectral.hpp"

namespace sclaw {

enum class FluxKind { zero, burgers, polynomial, callback };

/// Flux function A with its declared growth |A'(v)| <= C_1 (1 + |v|^{p_A}).
///
/// Polynomial fluxes are stored as coefficient lists (A = sum_j a_j v^j) and
/// their growth declaration is checked at construction. Callback fluxes are
/// taken on trust.
class FluxSpec {
 public:
  using ScalarFn = std::function<double(double)>;

  static FluxSpec zero();
  /// A(v) = v^2 / 2, declared with p_A = 1, C_1 = 1.
  static FluxSpec burgers();
  /// Declared growth inferred as p_A = max(1, degree - 1), C_1 = max(1, sum_j j |a_j|).
  static FluxSpec polynomial(std::vector<double> coeffs);
  /// Throws std::invalid_argument if the declaration does not bound A'.
  static FluxSpec polynomial(std::vector<double> coeffs, int growth_exponent, double growth_constant);
  /// `degree_hint` sizes the dealiasing grid; defaults to p_A + 1.
  static FluxSpec callback(ScalarFn value, ScalarFn derivative, int growth_exponent, double growth_constant,
                           int degree_hint = 0);

  FluxKind kind() const { return kind_; }
  int growth_exponent() const { return growth_exponent_; }
  double growth_constant() const { return growth_constant_; }
  /// Coefficients a_0..a_d (burgers reports {0, 0, 0.5}; zero reports {}).
  const std::vector<double>& coefficients() const { return coeffs_; }
  /// Polynomial degree, or the callback's degree hint.
  int degree() const { return degree_; }

  /// A(v) and A'(v). Throw BlowupError (flux_overflow) on a non-finite result.
  double value(double v) const;
  double derivative(double v) const;

  /// Checks |A'(v)| <= C_1 (1 + |v|^{p_A}) from the coefficient list.
  static bool growth_bound_holds(std::span<const double> coeffs, int growth_exponent, double growth_constant);

  bool operator==(const FluxSpec& other) const;

 private:
  FluxSpec() = default;

  FluxKind kind_ = FluxKind::zero;
  std::vector<double> coeffs_;
  int degree_ = 0;
  int growth_exponent_ = 1;
  double growth_constant_ = 1.0;
  ScalarFn value_fn_;
  ScalarFn derivative_fn_;
};

/// Size of the padded grid on which degree-`degree` products of fields with
/// `modes` retained basis functions alias nothing back into those modes.
/// Never smaller than the 3/2 rule.
int dealiased_grid_points(int modes, int degree);

/// Evaluates -d/dx A(u) projected onto the retained modes.
///
/// u is synthesized on a zero-padded grid sized by the flux degree, A is
/// applied pointwise, the result is projected back, truncated and
/// differentiated spectrally. Owns its scratch; one instance per thread.
class NonlinearTerm {
 public:
  NonlinearTerm(FluxSpec flux, BasisPtr basis);

  const FluxSpec& flux() const { return flux_; }
  int grid_points() const { return grid_points_; }
  bool is_zero() const { return flux_.kind() == FluxKind::zero; }

  /// out = P_M(-d/dx A(u)). Throws BlowupError on flux overflow.
  void evaluate(std::span<const double> u, std::span<double> out);
  SpectralField operator()(const SpectralField& u);

 private:
  FluxSpec flux_;
  BasisPtr basis_;
  int grid_points_;
  std::vector<double> samples_;
};

SpectralField nonlinear_term(const FluxSpec& flux, const SpectralField& u);

/// Quadrature value of int u^{p-1} d/dx A(u) dx on a grid fine enough to
/// integrate the polynomial integrand exactly. Analytically zero for every
/// flux. Requires p even and >= 2.
double flux_energy_pairing(const FluxSpec& flux, const SpectralField& u, int p);

}  // namespace sclaw
