#pragma once

#include <memory>
#include <span>
#include <vector>

namespace sclaw {

/// Eigenvalue of the periodic Laplacian attached to the 1-based mode index m:
/// modes 2k-1 and 2k share -(2 pi k)^2.
double mode_eigenvalue(int m);

/// Wavenumber k of the 1-based mode index m (k = ceil(m / 2)).
inline int mode_wavenumber(int m) { return (m + 1) / 2; }

/// Real sine/cosine basis of the mean-zero functions on the unit torus,
/// truncated to the first `modes` elements:
///   e_{2k-1}(x) = sqrt(2) sin(2 pi k x),  e_{2k}(x) = sqrt(2) cos(2 pi k x).
/// The basis also fixes the equispaced sampling grid used for quadrature.
class ModeBasis {
 public:
  /// `grid_points == 0` selects the default grid of 2 * modes samples.
  explicit ModeBasis(int modes, int grid_points = 0);

  static std::shared_ptr<const ModeBasis> make(int modes, int grid_points = 0) {
    return std::make_shared<const ModeBasis>(modes, grid_points);
  }

  int modes() const { return modes_; }
  int grid_points() const { return grid_points_; }
  int max_wavenumber() const { return modes_ / 2; }

  /// lambda_m for 1 <= m <= modes(); throws std::out_of_range otherwise.
  double eigenvalue(int m) const;
  /// All eigenvalues, index i holding lambda_{i+1}.
  std::span<const double> eigenvalues() const { return eigenvalues_; }

  /// e_m(x); throws std::out_of_range for an invalid m.
  double eval(int m, double x) const;

  /// x_j = j / grid_points().
  std::vector<double> quadrature_points() const;

  bool operator==(const ModeBasis& other) const {
    return modes_ == other.modes_ && grid_points_ == other.grid_points_;
  }

 private:
  int modes_;
  int grid_points_;
  std::vector<double> eigenvalues_;
};

using BasisPtr = std::shared_ptr<const ModeBasis>;

/// Mean-zero field stored as coefficients on e_1..e_M. There is no constant
/// mode, so every operation on it preserves the zero mean exactly.
class SpectralField {
 public:
  explicit SpectralField(BasisPtr basis);
  SpectralField(BasisPtr basis, std::vector<double> coeffs);

  /// amplitude * e_m.
  static SpectralField mode(BasisPtr basis, int m, double amplitude = 1.0);

  const ModeBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  std::span<double> coeffs() { return coeffs_; }
  std::span<const double> coeffs() const { return coeffs_; }

  /// Coefficient of e_m, 1-based.
  double coeff(int m) const { return coeffs_.at(static_cast<std::size_t>(m - 1)); }
  double& coeff(int m) { return coeffs_.at(static_cast<std::size_t>(m - 1)); }

  bool all_finite() const;
  bool same_basis(const SpectralField& other) const { return *basis_ == *other.basis_; }

  SpectralField& operator+=(const SpectralField& rhs);
  SpectralField& operator-=(const SpectralField& rhs);
  SpectralField& operator*=(double s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }

  /// Bitwise coefficient equality on the same basis.
  bool operator==(const SpectralField& other) const;

 private:
  BasisPtr basis_;
  std::vector<double> coeffs_;
};

/// Samples of a field on an equispaced periodic grid x_j = j / N.
struct PhysicalField {
  std::vector<double> samples;

  int size() const { return static_cast<int>(samples.size()); }
  double mean() const;
};

/// Samples f on the basis grid.
PhysicalField to_physical(const SpectralField& f);
/// Samples f on a grid of `grid_points` points (must exceed modes + 1).
PhysicalField to_physical(const SpectralField& f, int grid_points);

struct SpectralProjection {
  SpectralField field;
  double discarded_mean;
};

/// Projects samples on the basis grid onto e_1..e_M. A sample mean up to
/// 1e-12 (relative to max |g|, floored at 1) is dropped silently; anything
/// larger throws std::domain_error. Throws std::invalid_argument on a grid
/// size mismatch.
SpectralProjection to_spectral_with_mean(const PhysicalField& g, BasisPtr basis);
SpectralField to_spectral(const PhysicalField& g, BasisPtr basis);

/// (sum_m (-lambda_m)^s <f, e_m>^2)^{1/2}; s = 0 is the L2 norm.
double sobolev_norm(const SpectralField& f, double s);
/// Squared H^s norm without the square root.
double sobolev_norm_sq(std::span<const double> coeffs, std::span<const double> eigenvalues, double s);

/// Equal-weight periodic trapezoid approximation of (int |g|^p dx)^{1/p};
/// p = +infinity gives max |g|. Throws std::invalid_argument for p < 1.
double lp_norm(const PhysicalField& g, double p);

/// Heat semigroup exp(t nu d_xx): coefficient m scaled by exp(nu lambda_m t).
SpectralField heat_apply(const SpectralField& f, double nu, double t);

/// Exact x-derivative of the band-limited field.
SpectralField spectral_derivative(const SpectralField& f);

/// In-place derivative on raw coefficients: (a_k, b_k) -> 2 pi k (-b_k, a_k).
void derivative_inplace(std::span<double> coeffs);

}  // namespace sclaw
