#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "sclaw/observables.hpp"
#include "support.hpp"

using namespace sclaw;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("L1 norm of e_1 is 2 sqrt2 / pi") {
  auto basis = ModeBasis::make(8);
  const double d = l1_distance(SpectralField::mode(basis, 1), SpectralField(basis), 4096);
  CHECK(d == doctest::Approx(2 * std::sqrt(2.0) / pi).epsilon(1e-6));
  CHECK(d == doctest::Approx(0.900316).epsilon(1e-6));
}

TEST_CASE("L1 distance is a metric") {
  auto basis = ModeBasis::make(16);
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = testing::random_field(basis, gen), b = testing::random_field(basis, gen),
               c = testing::random_field(basis, gen);
    CHECK(l1_distance(a, a) == 0.0);
    CHECK(l1_distance(a, b) == doctest::Approx(l1_distance(b, a)).epsilon(1e-14));
    CHECK(l1_distance(a, c) <= l1_distance(a, b) + l1_distance(b, c) + 1e-12);
    CHECK(l1_distance(a, b) == doctest::Approx(l1_distance(-1.0 * a, -1.0 * b)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(l1_distance(SpectralField(basis), SpectralField(ModeBasis::make(8))), std::invalid_argument);
}

TEST_CASE("records carry Sobolev norms and L^p integrals") {
  auto basis = ModeBasis::make(8);
  Observer obs(basis, {2.0, 4.0});
  const auto r = obs.observe(0.5, SpectralField::mode(basis, 1), 100.0);
  CHECK(r.t == 0.5);
  CHECK(r.l2_sq == doctest::Approx(1.0));
  CHECK(r.h1_sq == doctest::Approx(4 * pi * pi));
  CHECK(r.h2_sq == doctest::Approx(16 * std::pow(pi, 4)));
  CHECK(r.lp_p(2.0) == doctest::Approx(1.0).epsilon(1e-12));
  // int (sqrt2 sin)^4 = 4 * 3/8.
  CHECK(r.lp_p(4.0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.guard_margin == doctest::Approx(100.0 - 4 * pi * pi));
  CHECK_THROWS_AS(r.lp_p(6.0), std::out_of_range);
  CHECK_THROWS(Observer(basis, {0.5}));
}

TEST_CASE("energy residual vanishes on exact heat solutions") {
  auto basis = ModeBasis::make(8);
  Observer obs(basis, {});
  const SpectralField u0 = SpectralField::mode(basis, 1, 1.0) + SpectralField::mode(basis, 4, 0.5);
  const double nu = 0.2, h = 1e-4;
  std::vector<ObservableRecord> recs;
  for (int n = 0; n <= 200; ++n) recs.push_back(obs.observe(n * h, heat_apply(u0, nu, n * h)));
  CHECK(std::abs(energy_balance_residual(recs, nu, 0.0)) < 1e-10);
}

TEST_CASE("energy residual of a frozen state") {
  auto basis = ModeBasis::make(4);
  Observer obs(basis, {});
  const SpectralField u = SpectralField::mode(basis, 2, 2.0);
  std::vector<ObservableRecord> recs{obs.observe(0.0, u), obs.observe(0.5, u), obs.observe(1.0, u)};
  const double nu = 0.3, trace = 0.7;
  CHECK(energy_balance_residual(recs, nu, trace) == doctest::Approx(2 * nu * 4 * 4 * pi * pi - trace));
  CHECK_THROWS(energy_balance_residual(std::span(recs).first(1), nu, trace));
}

TEST_CASE("moment integral matches the closed form for heat decay") {
  auto basis = ModeBasis::make(8);
  Observer obs(basis, {2.0});
  const SpectralField u0 = SpectralField::mode(basis, 1, 1.0) + SpectralField::mode(basis, 3, -0.4);
  const double nu = 0.1, T = 0.2;
  const int n = 2000;
  std::vector<ObservableRecord> recs;
  for (int i = 0; i <= n; ++i) recs.push_back(obs.observe(T * i / n, heat_apply(u0, nu, T * i / n)));
  const auto rep = moment_bound_check(recs, u0, 2.0, T, nu, 0.0);
  double exact = 0.0;
  for (int m : {1, 3}) {
    const double c = u0.coeff(m), rate = 2 * nu * mode_eigenvalue(m);
    exact += c * c * std::expm1(rate * T) / rate;
  }
  CHECK(rep.integral == doctest::Approx(exact).epsilon(1e-8));
  REQUIRE(rep.p2_bound.has_value());
  CHECK(rep.integral <= *rep.p2_bound);
}

TEST_CASE("time integral uses Simpson on even uniform grids") {
  std::vector<double> t{0, 0.5, 1.0}, v{0, 0.25, 1.0};
  CHECK(time_integral(t, v) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  std::vector<double> t2{0, 0.3, 1.0}, v2{0, 0.3, 1.0};
  CHECK(time_integral(t2, v2) == doctest::Approx(0.5));
}

TEST_CASE("increment moments") {
  auto basis = ModeBasis::make(8);
  const SpectralField u = SpectralField::mode(basis, 1);
  const std::vector<double> seps{0.0, 0.25}, orders{1.0, 2.0};
  const auto s = increment_moments(u, seps, orders);
  REQUIRE(s.size() == 4);
  for (const auto& e : s) {
    if (e.separation == 0.0) CHECK(e.value == 0.0);
    if (e.separation == 0.25 && e.order == 2.0) CHECK(e.value == doctest::Approx(2.0).epsilon(1e-12));
  }
  const std::vector<double> bad{0.1};
  CHECK_THROWS(increment_moments(u, bad, orders));
}

TEST_CASE("CSV rows round-trip doubles") {
  ObservableRecord r;
  r.t = 0.1;
  r.l2_sq = 1.0 / 3.0;
  r.lp = {{2.0, 0.25}};
  const std::vector<double> orders{2.0};
  CHECK(csv_header(orders) == "t,l2_sq,h1_sq,h2_sq,lp2_p,l1_dist,energy_residual,guard_margin");
  const std::string row = csv_row(r);
  CHECK(row.find("0.33333333333333331") != std::string::npos);
  CHECK(row.substr(row.size() - 12) == ",nan,nan,inf");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
