#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "sclaw/errors.hpp"
#include "sclaw/flux.hpp"
#include "support.hpp"

using namespace sclaw;
using sclaw::testing::random_field;

namespace {

constexpr double pi = std::numbers::pi;

// <-d/dx A(u), e_m> = <A(u), d/dx e_m> by quadrature on a grid fine enough
// to integrate every product exactly; no FFT, no padding logic.
std::vector<double> projected_flux_oracle(const FluxSpec& flux, const SpectralField& u) {
  const int M = u.size();
  const int n = 8 * M + 16;
  std::vector<double> out(M, 0.0);
  for (int q = 0; q < n; ++q) {
    const double x = double(q) / n;
    const double a = flux.value(testing::direct_eval(u, x));
    for (int m = 1; m <= M; ++m) {
      const double k = 2 * pi * mode_wavenumber(m);
      const double de = m % 2 == 1 ? std::sqrt(2.0) * k * std::cos(k * x) : -std::sqrt(2.0) * k * std::sin(k * x);
      out[m - 1] += a * de / n;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("burgers flux values") {
  const FluxSpec b = FluxSpec::burgers();
  CHECK(b.value(2.0) == 2.0);
  CHECK(b.derivative(2.0) == 2.0);
  CHECK(b.growth_exponent() == 1);
  CHECK(b.growth_constant() == 1.0);
  CHECK(b.degree() == 2);
}

TEST_CASE("growth declarations are checked") {
  // Cubic v^3/3: A' = v^2 <= 1 (1 + |v|^2).
  CHECK_NOTHROW(FluxSpec::polynomial({0, 0, 0, 1.0 / 3.0}, 2, 1.0));
  CHECK_THROWS_AS(FluxSpec::polynomial({0, 0, 0, 1.0 / 3.0}, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FluxSpec::polynomial({0, 0, 3.0}, 1, 1.0), std::invalid_argument);
  const FluxSpec inferred = FluxSpec::polynomial({0, 1.0, 0, 2.0});
  CHECK(inferred.growth_exponent() == 2);
  CHECK(inferred.growth_constant() == doctest::Approx(7.0));
  // Random derivative samples against the declared bound.
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(gen);
    CHECK(std::abs(inferred.derivative(v)) <= 7.0 * (1 + v * v) + 1e-9);
  }
}

TEST_CASE("overflow raises a blowup") {
  const FluxSpec cubic = FluxSpec::polynomial({0, 0, 0, 1.0});
  CHECK_THROWS_AS(cubic.value(1e120), BlowupError);
}

TEST_CASE("nonlinear term of e_1 under burgers is -pi sqrt2 e_3") {
  auto basis = ModeBasis::make(8);
  const SpectralField n = nonlinear_term(FluxSpec::burgers(), SpectralField::mode(basis, 1));
  for (int m = 1; m <= 8; ++m)
    CHECK(n.coeff(m) == doctest::Approx(m == 3 ? -pi * std::sqrt(2.0) : 0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("dealiased nonlinear term equals exact projection") {
  std::mt19937_64 gen(21);
  const std::vector<FluxSpec> fluxes = {FluxSpec::burgers(), FluxSpec::polynomial({0, 0, 0, 1.0 / 3.0}),
                                        FluxSpec::polynomial({0.5, -1.0, 0.25, 0.1, 0.05})};
  for (int M : {2, 4, 6, 8}) {
    auto basis = ModeBasis::make(M);
    for (const auto& flux : fluxes)
      for (int trial = 0; trial < 4; ++trial) {
        const SpectralField u = random_field(basis, gen);
        const SpectralField n = nonlinear_term(flux, u);
        const auto oracle = projected_flux_oracle(flux, u);
        double scale = 1.0;
        for (double v : oracle) scale = std::max(scale, std::abs(v));
        CHECK(testing::max_abs_diff(n.coeffs(), oracle) < 1e-11 * scale);
      }
  }
}

TEST_CASE("dealiasing grid covers the degree rule") {
  for (int M : {2, 8, 32, 64})
    for (int deg : {2, 3, 5}) {
      const int n = dealiased_grid_points(M, deg);
      CHECK(n >= (deg + 1) * (M / 2) + 1);
      CHECK(n >= 3 * M / 2);
      CHECK(n % 2 == 0);
    }
}

TEST_CASE("flux energy pairing vanishes on periodic fields") {
  std::mt19937_64 gen(4);
  auto basis = ModeBasis::make(16);
  for (int trial = 0; trial < 20; ++trial) {
    const SpectralField u = random_field(basis, gen);
    for (int p : {2, 4, 6}) {
      CHECK(std::abs(flux_energy_pairing(FluxSpec::burgers(), u, p)) < 1e-10);
      CHECK(std::abs(flux_energy_pairing(FluxSpec::polynomial({0, 0, 0, 1.0 / 3.0}), u, p)) < 1e-9);
    }
  }
  CHECK_THROWS(flux_energy_pairing(FluxSpec::burgers(), SpectralField(basis), 3));
}

TEST_CASE("nonlinear term is locally Lipschitz in H1 with a stable constant") {
  // |N(u) - N(v)|_{H^-1} = |A(u) - A(v)|_L2 <= C |u - v|_H1 on bounded sets;
  // the H^-1 ratio stays bounded under mode refinement.
  std::mt19937_64 gen(7);
  double ratio_small = 0.0, ratio_large = 0.0;
  for (int M : {16, 64}) {
    auto basis = ModeBasis::make(M);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const SpectralField u = random_field(basis, gen, 1.0, 2.0);
      const SpectralField d = random_field(basis, gen, 1e-3, 2.0);
      const SpectralField diff = nonlinear_term(FluxSpec::burgers(), u + d) - nonlinear_term(FluxSpec::burgers(), u);
      double hm1 = 0.0;
      for (int m = 1; m <= M; ++m) hm1 += diff.coeff(m) * diff.coeff(m) / -mode_eigenvalue(m);
      worst = std::max(worst, std::sqrt(hm1) / sobolev_norm(d, 1.0));
    }
    (M == 16 ? ratio_small : ratio_large) = worst;
  }
  CHECK(ratio_large < 3.0 * ratio_small + 1e-12);
}
