#pragma once

#include <fstream>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sclaw/spectral.hpp"

namespace sclaw {

struct LpValue {
  double order;
  double value;  // |u|_{L^p}^p
};

/// Diagnostics of one instant of a run. l1_dist is only meaningful for
/// coupled runs, energy_residual only once a previous record exists.
struct ObservableRecord {
  double t = 0.0;
  double l2_sq = 0.0;
  double h1_sq = 0.0;
  double h2_sq = 0.0;
  std::vector<LpValue> lp;
  double l1_dist = std::numeric_limits<double>::quiet_NaN();
  double energy_residual = std::numeric_limits<double>::quiet_NaN();
  double guard_margin = std::numeric_limits<double>::infinity();

  /// |u|_{L^p}^p for a configured order; throws std::out_of_range otherwise.
  double lp_p(double order) const;
};

/// Computes records on a quadrature grid finer than the basis grid (by
/// default the dealiased grid of a quadratic flux), since |u| and |u|^p are
/// not band-limited.
class Observer {
 public:
  Observer(BasisPtr basis, std::vector<double> lp_orders, int quadrature_points = 0);

  const std::vector<double>& lp_orders() const { return lp_orders_; }
  int quadrature_points() const { return quadrature_points_; }

  ObservableRecord observe(double t, const SpectralField& u, std::optional<double> guard_radius = std::nullopt);
  ObservableRecord observe_pair(double t, const SpectralField& u, const SpectralField& v,
                                std::optional<double> guard_radius = std::nullopt);

  double l1_distance(std::span<const double> a, std::span<const double> b);

 private:
  BasisPtr basis_;
  std::vector<double> lp_orders_;
  int quadrature_points_;
  std::vector<double> samples_;
  std::vector<double> diff_;
};

/// int |a - b| dx by quadrature. `quadrature_points == 0` uses the
/// dealiased grid. Throws std::invalid_argument on a basis mismatch.
double l1_distance(const SpectralField& a, const SpectralField& b, int quadrature_points = 0);

/// Time integral of a sampled series: composite Simpson on uniform grids
/// with an even number of intervals, trapezoid otherwise.
double time_integral(std::span<const double> t, std::span<const double> values);

/// Windowed residual of the p = 2 energy identity
///   (l2_sq(end) - l2_sq(start)) / T + 2 nu <h1_sq> - sum_k |g_k|_L2^2,
/// where <.> is the time average over the window. Throws
/// std::invalid_argument for fewer than two records.
double energy_balance_residual(std::span<const ObservableRecord> window, double nu, double noise_l2_trace);

struct MomentReport {
  double order = 2.0;
  double horizon = 0.0;
  double integral = 0.0;      // int_0^T |u|_{L^p}^p dt
  double time_average = 0.0;  // integral / T
  /// |R(T) - R(T/2)| / R(T) for the running average R.
  double late_drift = 0.0;
  /// For p = 2: (|u0|_L2^2 + trace T) / (2 nu), an upper bound on the mean
  /// of the integral.
  std::optional<double> p2_bound;
  std::vector<double> running_average;
};

/// Time integral and running-average stability of |u|_{L^p}^p over records
/// spanning [0, horizon]. `p` must be one of the recorded orders.
MomentReport moment_bound_check(std::span<const ObservableRecord> records, const SpectralField& u0, double p,
                                double horizon, double nu, double noise_l2_trace);

struct IncrementMoment {
  double separation;
  double order;
  double value;
};

/// S_q(l) = (1/N) sum_j |u(x_j + l) - u(x_j)|^q on the basis grid. Every
/// separation must be a multiple of the grid spacing.
std::vector<IncrementMoment> increment_moments(const SpectralField& u, std::span<const double> separations,
                                               std::span<const double> orders);

/// %.17g, with "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double v);

std::string csv_header(std::span<const double> lp_orders);
std::string csv_row(const ObservableRecord& record);

/// One CSV file per run; header written on open.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& file, std::span<const double> lp_orders);
  void write(const ObservableRecord& record);
  void flush();

 private:
  std::ofstream out_;
  std::filesystem::path file_;
};

}  // namespace sclaw
