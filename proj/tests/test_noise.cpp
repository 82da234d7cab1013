#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "sclaw/noise.hpp"
#include "support.hpp"

using namespace sclaw;

namespace {

constexpr double pi = std::numbers::pi;

std::shared_ptr<const NoiseSpec> share(NoiseSpec s) { return std::make_shared<const NoiseSpec>(std::move(s)); }

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i;
    else ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("traces of a single first-mode forcing") {
  std::vector<double> sigma(8, 0.0);
  sigma[0] = 1.0;
  const auto tr = trace_h2(NoiseSpec::diagonal(sigma));
  CHECK(tr.h2 == doctest::Approx(16 * std::pow(pi, 4)).epsilon(1e-14));
  CHECK(tr.h2 == doctest::Approx(1558.545).epsilon(1e-6));
  CHECK(tr.l2 == 1.0);
}

TEST_CASE("profile amplitudes") {
  const NoiseSpec s = NoiseSpec::from_profile(6, {0.5, 3.0});
  CHECK(s.sigma()[0] == doctest::Approx(0.5 / 8));
  CHECK(s.sigma()[1] == doctest::Approx(0.5 / 8));
  CHECK(s.sigma()[4] == doctest::Approx(0.5 / 64));
  CHECK(s.profile().has_value());
}

TEST_CASE("Wiener increments have variance sigma^2 dt") {
  auto basis = ModeBasis::make(2);
  NoisePath path(basis, share(NoiseSpec::diagonal({1.0, 0.0})), 1.0, 3, 0.1);
  const int n = 100000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const SpectralField dw = sample_wiener_increment(path, 0.1);
    acc += dw.coeff(1) * dw.coeff(1);
    REQUIRE(dw.coeff(2) == 0.0);
  }
  CHECK(acc / n == doctest::Approx(0.1).epsilon(0.02));
}

TEST_CASE("silent modes stay exactly zero") {
  auto basis = ModeBasis::make(8);
  NoisePath path(basis, share(NoiseSpec::diagonal({1, 0, 0.5, 0, 0, 0, 0.1, 0})), 0.2, 9, 0.01);
  for (int i = 0; i < 500; ++i) ou_convolution_step(path, 0.01);
  for (int m : {2, 4, 5, 6, 8}) CHECK(path.convolution()[m - 1] == 0.0);
  CHECK(path.convolution()[0] != 0.0);
}

TEST_CASE("OU one-step variance from zero") {
  // var = (1 - exp(-2 nu 4 pi^2 dt)) / (8 pi^2 nu), nu = 1, dt = 0.1.
  auto basis = ModeBasis::make(2);
  auto spec = share(NoiseSpec::diagonal({1.0, 1.0}));
  const int n = 40000;
  double acc = 0.0;
  for (int s = 0; s < n; ++s) {
    NoisePath path(basis, spec, 1.0, static_cast<std::uint64_t>(s), 0.1);
    const double w = ou_convolution_step(path, 0.1).coeff(1);
    acc += w * w;
  }
  const double expected = 0.012660;
  CHECK(expected == doctest::Approx(-std::expm1(-8 * pi * pi * 0.1) / (8 * pi * pi)).epsilon(1e-4));
  CHECK(std::abs(acc / n - expected) < 4.0 * expected * std::sqrt(2.0 / n));
}

TEST_CASE("OU stationary variance 1/(8 pi^2) by batch means") {
  auto basis = ModeBasis::make(2);
  NoisePath path(basis, share(NoiseSpec::diagonal({1.0, 0.0})), 1.0, 17, 0.01);
  const int burn = 1000, batches = 20, per = 10000;
  for (int i = 0; i < burn; ++i) ou_convolution_step(path, 0.01);
  std::vector<double> means;
  for (int b = 0; b < batches; ++b) {
    double acc = 0.0;
    for (int i = 0; i < per; ++i) {
      const double w = ou_convolution_step(path, 0.01).coeff(1);
      acc += w * w;
    }
    means.push_back(acc / per);
  }
  double mean = 0.0, var = 0.0;
  for (double m : means) mean += m / batches;
  for (double m : means) var += (m - mean) * (m - mean) / (batches - 1);
  const double se = std::sqrt(var / batches);
  CHECK(std::abs(mean - 1.0 / (8 * pi * pi)) < 4.0 * se);
}

TEST_CASE("n composed fine steps match one exact coarse step in law") {
  auto basis = ModeBasis::make(4);
  auto spec = share(NoiseSpec::diagonal({1.0, 0.7, 0.3, 0.2}));
  const double T = 0.05, nu = 0.5;
  const int N = 10000;
  std::vector<double> coarse, fine;
  for (int s = 0; s < N; ++s) {
    NoisePath a(basis, spec, nu, static_cast<std::uint64_t>(s), T);
    coarse.push_back(ou_convolution_step(a, T).coeff(3));
    NoisePath b(basis, spec, nu, static_cast<std::uint64_t>(s + N), T / 10);
    fine.push_back(ou_convolution_step(b, T).coeff(3));
  }
  // alpha = 0.001 two-sample critical value.
  CHECK(ks_statistic(coarse, fine) < 1.95 * std::sqrt(2.0 / N));
}

TEST_CASE("coarse steps reuse the fine Brownian path") {
  auto basis = ModeBasis::make(4);
  auto spec = share(NoiseSpec::from_profile(4, {1.0, 3.0}));
  NoisePath a(basis, spec, 0.3, 5, 1e-3);
  NoisePath b(basis, spec, 0.3, 5, 1e-3);
  std::vector<double> inc(4);
  for (int i = 0; i < 10; ++i) a.advance(1e-2, inc);
  for (int i = 0; i < 100; ++i) b.advance(1e-3, inc);
  CHECK(testing::max_abs_diff(a.convolution(), b.convolution()) < 1e-15);
  CHECK_THROWS(a.advance(1.5e-3, inc));
}

TEST_CASE("dense loadings reproduce the covariance G^T G") {
  auto basis = ModeBasis::make(2);
  // Two family members loading onto both modes.
  const std::vector<double> G = {1.0, 0.5, -0.3, 0.8};
  NoisePath path(basis, share(NoiseSpec::dense(2, 2, G)), 1.0, 2, 0.1);
  const int n = 100000;
  double c11 = 0, c12 = 0, c22 = 0;
  for (int i = 0; i < n; ++i) {
    const SpectralField dw = sample_wiener_increment(path, 0.1);
    c11 += dw.coeff(1) * dw.coeff(1);
    c12 += dw.coeff(1) * dw.coeff(2);
    c22 += dw.coeff(2) * dw.coeff(2);
  }
  const double e11 = 0.1 * (1.0 + 0.09), e12 = 0.1 * (0.5 - 0.24), e22 = 0.1 * (0.25 + 0.64);
  CHECK(c11 / n == doctest::Approx(e11).epsilon(0.03));
  CHECK(c12 / n == doctest::Approx(e12).epsilon(0.06));
  CHECK(c22 / n == doctest::Approx(e22).epsilon(0.03));
}

TEST_CASE("H2 increments of the convolution scale like sqrt(dt)") {
  auto basis = ModeBasis::make(8);
  auto spec = share(NoiseSpec::from_profile(8, {1.0, 3.0}));
  const double nu = 0.1;
  std::vector<double> log_dt, log_rms;
  for (double dt : {1e-5, 4e-5, 1.6e-4}) {
    NoisePath path(basis, spec, nu, 12, dt);
    double acc = 0.0;
    const int steps = 2000;
    for (int i = 0; i < steps; ++i) {
      const SpectralField before = path.convolution_field();
      const SpectralField after = ou_convolution_step(path, dt);
      acc += std::pow(sobolev_norm(after - before, 2.0), 2);
    }
    log_dt.push_back(std::log(dt));
    log_rms.push_back(0.5 * std::log(acc / steps));
  }
  const double slope = (log_rms.back() - log_rms.front()) / (log_dt.back() - log_dt.front());
  CHECK(slope == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("continuity scan flags injected spikes only") {
  auto basis = ModeBasis::make(8);
  auto spec = share(NoiseSpec::from_profile(8, {1.0, 3.0}));
  const double nu = 0.1, dt = 1e-3;
  NoisePath path(basis, spec, nu, 4, dt);
  std::vector<double> h2;
  for (int i = 0; i < 5000; ++i) h2.push_back(sobolev_norm(ou_convolution_step(path, dt), 2.0));
  const double sd = predicted_h2_step_stddev(*spec, *basis, nu, dt);
  CHECK(continuity_check(h2, sd).flagged.empty());
  h2[2500] += 20 * sd;
  const auto rep = continuity_check(h2, sd);
  CHECK(rep.flagged.size() == 2);
  CHECK(rep.flagged.front() == 2499);
}
