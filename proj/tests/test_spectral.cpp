#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "sclaw/fft.hpp"
#include "support.hpp"

using namespace sclaw;
using sclaw::testing::random_field;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("eigenvalues pair sine and cosine of one wavenumber") {
  CHECK(mode_eigenvalue(1) == doctest::Approx(-4.0 * pi * pi).epsilon(1e-15));
  CHECK(mode_eigenvalue(2) == mode_eigenvalue(1));
  CHECK(mode_eigenvalue(3) == doctest::Approx(-16.0 * pi * pi).epsilon(1e-15));
  CHECK(mode_eigenvalue(7) == mode_eigenvalue(8));
  CHECK_THROWS_AS(mode_eigenvalue(0), std::out_of_range);
}

TEST_CASE("basis functions match sqrt2 sin / cos") {
  ModeBasis b(8);
  for (double x : {0.0, 0.1, 0.37, 0.9}) {
    CHECK(b.eval(1, x) == doctest::Approx(std::sqrt(2.0) * std::sin(2 * pi * x)));
    CHECK(b.eval(2, x) == doctest::Approx(std::sqrt(2.0) * std::cos(2 * pi * x)));
    CHECK(b.eval(5, x) == doctest::Approx(std::sqrt(2.0) * std::sin(6 * pi * x)));
  }
  CHECK_THROWS(ModeBasis(7));
  CHECK_THROWS(ModeBasis(8, 9));
}

TEST_CASE("basis is orthonormal under fine quadrature") {
  ModeBasis b(8);
  const int n = 64;
  for (int i = 1; i <= 8; ++i)
    for (int j = 1; j <= 8; ++j) {
      double acc = 0.0;
      for (int q = 0; q < n; ++q) acc += b.eval(i, double(q) / n) * b.eval(j, double(q) / n);
      CHECK(acc / n == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13).scale(1.0));
    }
}

TEST_CASE("synthesis agrees with direct evaluation and round-trips") {
  std::mt19937_64 gen(11);
  for (int M : {2, 8, 32, 64}) {
    auto basis = ModeBasis::make(M);
    for (int trial = 0; trial < 5; ++trial) {
      const SpectralField f = random_field(basis, gen);
      const PhysicalField g = to_physical(f);
      for (int j = 0; j < g.size(); j += 3)
        CHECK(g.samples[j] == doctest::Approx(testing::direct_eval(f, double(j) / g.size())).epsilon(1e-12).scale(1.0));
      const SpectralField back = to_spectral(g, basis);
      CHECK(testing::max_abs_diff(back.coeffs(), f.coeffs()) < 1e-12);
    }
  }
}

TEST_CASE("nonzero mean is rejected, tiny mean is reported") {
  auto basis = ModeBasis::make(4);
  PhysicalField g{std::vector<double>(8, 0.5)};
  CHECK_THROWS_AS(to_spectral(g, basis), std::domain_error);
  PhysicalField h{std::vector<double>(8, 1e-14)};
  CHECK(to_spectral_with_mean(h, basis).discarded_mean == doctest::Approx(1e-14));
  PhysicalField wrong{std::vector<double>(10, 0.0)};
  CHECK_THROWS_AS(to_spectral(wrong, basis), std::invalid_argument);
}

TEST_CASE("Parseval: grid L2 equals coefficient sum") {
  std::mt19937_64 gen(3);
  auto basis = ModeBasis::make(32);
  for (int trial = 0; trial < 10; ++trial) {
    const SpectralField f = random_field(basis, gen);
    const PhysicalField g = to_physical(f);
    const double grid = std::pow(lp_norm(g, 2.0), 2);
    double coeff = 0.0;
    for (double c : f.coeffs()) coeff += c * c;
    CHECK(grid == doctest::Approx(coeff).epsilon(1e-12));
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(std::sqrt(coeff)).epsilon(1e-14));
  }
}

TEST_CASE("heat semigroup: closed form, semigroup law, contraction") {
  auto basis = ModeBasis::make(16);
  // e_1 with nu = 1, t = 0.01 decays to exp(-4 pi^2 / 100) = 0.67382545...
  CHECK(heat_apply(SpectralField::mode(basis, 1), 1.0, 0.01).coeff(1) ==
        doctest::Approx(std::exp(-4 * pi * pi * 0.01)).epsilon(1e-15));
  CHECK(heat_apply(SpectralField::mode(basis, 1), 1.0, 0.01).coeff(1) == doctest::Approx(0.6738254512).epsilon(1e-10));
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const SpectralField f = random_field(basis, gen);
    std::uniform_real_distribution<double> u(0.0, 0.2);
    const double s = u(gen), t = u(gen), nu = 0.05 + u(gen);
    const SpectralField a = heat_apply(heat_apply(f, nu, s), nu, t);
    const SpectralField b = heat_apply(f, nu, s + t);
    CHECK(testing::max_abs_diff(a.coeffs(), b.coeffs()) < 1e-13);
    // Contraction with the Poincare rate.
    CHECK(sobolev_norm(b, 0.0) <= std::exp(-4 * pi * pi * nu * (s + t)) * sobolev_norm(f, 0.0) * (1 + 1e-14));
  }
  CHECK_THROWS(heat_apply(SpectralField(basis), 0.1, -1.0));
  CHECK_THROWS(heat_apply(SpectralField(basis), 0.0, 1.0));
}

TEST_CASE("heat smoothing: |S_t f|_H1 <= |f|_L2 / sqrt(2 e nu t)") {
  auto basis = ModeBasis::make(64);
  std::mt19937_64 gen(8);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const SpectralField f = random_field(basis, gen, 1.0, 0.0);
    for (double t : {1e-4, 1e-3, 1e-2}) {
      const double nu = 0.1;
      const double ratio = sobolev_norm(heat_apply(f, nu, t), 1.0) * std::sqrt(2 * std::exp(1.0) * nu * t) /
                           sobolev_norm(f, 0.0);
      worst = std::max(worst, ratio);
    }
  }
  CHECK(worst <= 1.0);
}

TEST_CASE("Poincare: |f|_L2^2 <= |f|_H1^2 / (4 pi^2)") {
  auto basis = ModeBasis::make(32);
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    const SpectralField f = random_field(basis, gen);
    CHECK(4 * pi * pi * std::pow(sobolev_norm(f, 0.0), 2) <= std::pow(sobolev_norm(f, 1.0), 2) * (1 + 1e-14));
  }
}

TEST_CASE("spectral derivative matches finite differences of the direct sum") {
  auto basis = ModeBasis::make(8);
  std::mt19937_64 gen(10);
  const SpectralField f = random_field(basis, gen);
  const SpectralField df = spectral_derivative(f);
  const double h = 1e-6;
  for (double x : {0.05, 0.4, 0.77}) {
    const double fd = (testing::direct_eval(f, x + h) - testing::direct_eval(f, x - h)) / (2 * h);
    CHECK(testing::direct_eval(df, x) == doctest::Approx(fd).epsilon(1e-6));
  }
  // d/dx e_1 = 2 pi e_2.
  CHECK(spectral_derivative(SpectralField::mode(basis, 1)).coeff(2) == doctest::Approx(2 * pi));
}

TEST_CASE("fft sizes are 2^a 3^b 5^c and even") {
  for (int n : {7, 33, 97, 130, 1000}) {
    int m = fft_friendly_size(n);
    CHECK(m >= n);
    CHECK(m % 2 == 0);
    for (int p : {2, 3, 5})
      while (m % p == 0) m /= p;
    CHECK(m == 1);
  }
}
