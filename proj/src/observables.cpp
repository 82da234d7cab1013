#include "sclaw/observables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sclaw/fft.hpp"
#include "sclaw/flux.hpp"

namespace sclaw {

namespace {

std::string order_label(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

}  // namespace

double ObservableRecord::lp_p(double order) const {
  for (const auto& e : lp)
    if (e.order == order) return e.value;
  throw std::out_of_range("record has no L^" + order_label(order) + " entry");
}

Observer::Observer(BasisPtr basis, std::vector<double> lp_orders, int quadrature_points)
    : basis_(std::move(basis)),
      lp_orders_(std::move(lp_orders)),
      quadrature_points_(quadrature_points > 0 ? quadrature_points : dealiased_grid_points(basis_->modes(), 2)) {
  for (double p : lp_orders_)
    if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("Observer: L^p orders must be finite and >= 1");
  if (quadrature_points_ < basis_->modes() + 2 || quadrature_points_ % 2 != 0)
    throw std::invalid_argument("Observer: quadrature grid too coarse");
  samples_.resize(static_cast<std::size_t>(quadrature_points_));
  diff_.resize(static_cast<std::size_t>(basis_->modes()));
}

ObservableRecord Observer::observe(double t, const SpectralField& u, std::optional<double> guard_radius) {
  ObservableRecord r;
  r.t = t;
  const auto lambda = basis_->eigenvalues();
  r.l2_sq = sobolev_norm_sq(u.coeffs(), lambda, 0.0);
  r.h1_sq = sobolev_norm_sq(u.coeffs(), lambda, 1.0);
  r.h2_sq = sobolev_norm_sq(u.coeffs(), lambda, 2.0);
  if (guard_radius) r.guard_margin = *guard_radius - r.h1_sq;
  if (!lp_orders_.empty()) {
    thread_fft(quadrature_points_).synthesize(u.coeffs(), samples_);
    for (double p : lp_orders_) {
      double acc = 0.0;
      if (p == 2.0) {
        for (double s : samples_) acc += s * s;
      } else if (p == std::floor(p) && p <= 8.0) {
        const int ip = static_cast<int>(p);
        for (double s : samples_) {
          const double a = std::abs(s);
          double v = 1.0;
          for (int i = 0; i < ip; ++i) v *= a;
          acc += v;
        }
      } else {
        for (double s : samples_) acc += std::pow(std::abs(s), p);
      }
      r.lp.push_back({p, acc / quadrature_points_});
    }
  }
  return r;
}

ObservableRecord Observer::observe_pair(double t, const SpectralField& u, const SpectralField& v,
                                        std::optional<double> guard_radius) {
  ObservableRecord r = observe(t, u, guard_radius);
  r.l1_dist = l1_distance(u.coeffs(), v.coeffs());
  return r;
}

double Observer::l1_distance(std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < diff_.size(); ++i) diff_[i] = a[i] - b[i];
  thread_fft(quadrature_points_).synthesize(diff_, samples_);
  double acc = 0.0;
  for (double s : samples_) acc += std::abs(s);
  return acc / quadrature_points_;
}

double l1_distance(const SpectralField& a, const SpectralField& b, int quadrature_points) {
  if (!a.same_basis(b)) throw std::invalid_argument("l1_distance: basis mismatch");
  Observer obs(a.basis_ptr(), {}, quadrature_points);
  return obs.l1_distance(a.coeffs(), b.coeffs());
}

double time_integral(std::span<const double> t, std::span<const double> values) {
  if (t.size() != values.size()) throw std::invalid_argument("time_integral: size mismatch");
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  const std::size_t intervals = n - 1;
  const double h = (t.back() - t.front()) / static_cast<double>(intervals);
  bool uniform = h > 0.0;
  for (std::size_t i = 1; uniform && i < n; ++i)
    uniform = std::abs((t[i] - t[i - 1]) - h) <= 1e-9 * h;
  if (uniform && intervals % 2 == 0) {
    double acc = values.front() + values.back();
    for (std::size_t i = 1; i < intervals; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
    return acc * h / 3.0;
  }
  double acc = 0.0;
  for (std::size_t i = 1; i < n; ++i) acc += 0.5 * (t[i] - t[i - 1]) * (values[i] + values[i - 1]);
  return acc;
}

double energy_balance_residual(std::span<const ObservableRecord> window, double nu, double noise_l2_trace) {
  if (window.size() < 2) throw std::invalid_argument("energy_balance_residual: window too short");
  const double span = window.back().t - window.front().t;
  if (!(span > 0.0)) throw std::invalid_argument("energy_balance_residual: window has no duration");
  std::vector<double> t(window.size()), h1(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    t[i] = window[i].t;
    h1[i] = window[i].h1_sq;
  }
  const double mean_h1 = time_integral(t, h1) / span;
  return (window.back().l2_sq - window.front().l2_sq) / span + 2.0 * nu * mean_h1 - noise_l2_trace;
}

MomentReport moment_bound_check(std::span<const ObservableRecord> records, const SpectralField& u0, double p,
                                double horizon, double nu, double noise_l2_trace) {
  if (records.size() < 2) throw std::invalid_argument("moment_bound_check: need at least two records");
  MomentReport rep;
  rep.order = p;
  rep.horizon = horizon;
  std::vector<double> t, v;
  for (const auto& r : records) {
    if (r.t > horizon * (1.0 + 1e-12)) break;
    t.push_back(r.t);
    v.push_back(r.lp_p(p));
  }
  rep.integral = time_integral(t, v);
  const double span = t.back() - t.front();
  rep.time_average = span > 0.0 ? rep.integral / span : 0.0;

  // Running average by cumulative trapezoid.
  rep.running_average.assign(t.size(), v.front());
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    acc += 0.5 * (t[i] - t[i - 1]) * (v[i] + v[i - 1]);
    rep.running_average[i] = acc / (t[i] - t.front());
  }
  const double final_avg = rep.running_average.back();
  const auto half = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), t.front() + 0.5 * span) - t.begin());
  const double mid_avg = rep.running_average[std::min(half, t.size() - 1)];
  rep.late_drift = final_avg != 0.0 ? std::abs(final_avg - mid_avg) / std::abs(final_avg) : 0.0;

  if (p == 2.0) rep.p2_bound = (sobolev_norm_sq(u0.coeffs(), u0.basis().eigenvalues(), 0.0) + noise_l2_trace * horizon) / (2.0 * nu);
  return rep;
}

std::vector<IncrementMoment> increment_moments(const SpectralField& u, std::span<const double> separations,
                                               std::span<const double> orders) {
  const PhysicalField g = to_physical(u);
  const int n = g.size();
  std::vector<IncrementMoment> out;
  for (double ell : separations) {
    const double shift_real = ell * n;
    const double shift_round = std::round(shift_real);
    if (std::abs(shift_real - shift_round) > 1e-9)
      throw std::invalid_argument("increment_moments: separation is not a multiple of the grid spacing");
    const auto shift = static_cast<long>(shift_round);
    for (double q : orders) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        const long k = ((static_cast<long>(j) + shift) % n + n) % n;
        acc += std::pow(std::abs(g.samples[static_cast<std::size_t>(k)] - g.samples[static_cast<std::size_t>(j)]), q);
      }
      out.push_back({ell, q, acc / n});
    }
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_header(std::span<const double> lp_orders) {
  std::string h = "t,l2_sq,h1_sq,h2_sq";
  for (double p : lp_orders) h += ",lp" + order_label(p) + "_p";
  h += ",l1_dist,energy_residual,guard_margin";
  return h;
}

std::string csv_row(const ObservableRecord& r) {
  std::string row = format_double(r.t) + "," + format_double(r.l2_sq) + "," + format_double(r.h1_sq) + "," +
                    format_double(r.h2_sq);
  for (const auto& e : r.lp) row += "," + format_double(e.value);
  row += "," + format_double(r.l1_dist) + "," + format_double(r.energy_residual) + "," + format_double(r.guard_margin);
  return row;
}

CsvWriter::CsvWriter(const std::filesystem::path& file, std::span<const double> lp_orders)
    : out_(file, std::ios::trunc), file_(file) {
  if (!out_) throw std::runtime_error("cannot open " + file.string() + " for writing");
  out_ << csv_header(lp_orders) << '\n';
}

void CsvWriter::write(const ObservableRecord& record) {
  out_ << csv_row(record) << '\n';
  if (!out_) throw std::runtime_error("write failed for " + file_.string());
}

void CsvWriter::flush() {
  out_.flush();
  if (!out_) throw std::runtime_error("flush failed for " + file_.string());
}

}  // namespace sclaw
