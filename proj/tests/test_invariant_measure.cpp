#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "sclaw/ensemble.hpp"
#include "sclaw/invariant_measure.hpp"
#include "support.hpp"

using namespace sclaw;

namespace {

std::vector<ObservableRecord> synthetic(std::size_t n, double dt, auto&& h1_of_index) {
  std::vector<ObservableRecord> recs(n);
  for (std::size_t i = 0; i < n; ++i) {
    recs[i].t = static_cast<double>(i) * dt;
    recs[i].h1_sq = h1_of_index(i);
    recs[i].l2_sq = 1.0;
  }
  return recs;
}

}  // namespace

TEST_CASE("constant observable has zero standard error") {
  const auto recs = synthetic(1000, 0.01, [](std::size_t) { return 3.0; });
  const auto e = ergodic_average(recs, "one", 1.0, 16);
  CHECK(e.value == 1.0);
  CHECK(e.std_error == 0.0);
  CHECK(e.samples <= 900);
  CHECK(ergodic_average(recs, "h1_sq", 0.0, 8).value == 3.0);
}

TEST_CASE("too few samples or batches are rejected") {
  const auto recs = synthetic(20, 0.1, [](std::size_t) { return 1.0; });
  CHECK_THROWS_WITH_AS(ergodic_average(recs, "l2_sq", 1.5, 16), doctest::Contains("insufficient samples"),
                       std::invalid_argument);
  CHECK_THROWS_AS(ergodic_average(recs, "l2_sq", 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(ergodic_average(recs, "no_such", 0.0, 8), std::invalid_argument);
}

TEST_CASE("batch means error covers the truth for iid draws") {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> n01;
  int covered = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> t(1600), v(1600);
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = static_cast<double>(i);
      v[i] = 2.0 + n01(gen);
    }
    const auto e = ergodic_average(t, v, "x", 0.0, 16);
    if (std::abs(e.value - 2.0) <= 3.0 * e.std_error) ++covered;
  }
  CHECK(covered >= 190);
}

TEST_CASE("agreement uses the combined error") {
  ErgodicEstimate a, b;
  a.value = 1.0;
  a.std_error = 0.1;
  b.value = 1.4;
  b.std_error = 0.1;
  CHECK(estimates_agree(a, b));
  b.value = 1.5;
  CHECK_FALSE(estimates_agree(a, b));
}

TEST_CASE("tightness fraction and bound") {
  // H1^2 = 200 on the first half of [0, 10), 0 afterwards.
  const auto recs = synthetic(1001, 0.01, [](std::size_t i) { return i < 500 ? 200.0 : 0.0; });
  const std::vector<double> eps{0.001, 0.01, 0.1};
  const auto rows = tightness_diagnostic(recs, eps, 1.0, 2.0, 0.5);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].fraction == 0.0);
  CHECK(rows[1].fraction == doctest::Approx(0.5));
  CHECK(rows[1].bound == doctest::Approx(0.01 * (2.0 + 0.5 * 10.0) / 20.0));
  CHECK_FALSE(rows[1].holds);
  CHECK(rows[2].fraction == doctest::Approx(0.5));
}

TEST_CASE("dissipation entry time and bound") {
  std::vector<CoupledSample> s{{0.0, 1, 5, 5}, {0.1, 1, 3, 3}, {0.2, 1, 1, 1}};
  CHECK(dissipation_entry_time(s, 6.0) == 0.1);
  CHECK_FALSE(dissipation_entry_time(s, 1.0).has_value());
  CHECK(dissipation_entry_bound(1.0, 1.0, 0.5, 4.0, 1.0) == doctest::Approx(2.0 / 2.0));
  CHECK(std::isinf(dissipation_entry_bound(1.0, 1.0, 0.5, 2.0, 1.0)));
}

TEST_CASE("OpenMP ensemble reproduces the serial reference bit for bit") {
  const int M = 16;
  ModelSpec model{0.1, FluxSpec::burgers(), NoiseSpec::from_profile(M, {0.5, 3.0})};
  SolverConfig cfg;
  cfg.modes = M;
  cfg.dt = 1e-3;
  auto basis = ModeBasis::make(M);
  ConfluenceOptions opts;
  opts.horizon = 0.2;
  opts.epsilons = {1e-2};
  const auto seeds = seed_range(100, 6);
  const auto u0 = SpectralField::mode(basis, 1, 1.0), v0 = SpectralField::mode(basis, 1, -1.0);
  const auto serial = confluence_ensemble(u0, v0, model, cfg, seeds, opts, Execution::serial);
  const auto parallel = confluence_ensemble(u0, v0, model, cfg, seeds, opts, Execution::openmp);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].seed == seeds[i]);
    CHECK(serial[i].final_distance == parallel[i].final_distance);
    CHECK(serial[i].series.size() == parallel[i].series.size());
  }

  const std::vector<SpectralField> starts(seeds.size(), u0);
  const auto rs = run_ensemble(starts, model, cfg, seeds, 0.1, 10, {2.0}, Execution::serial);
  const auto rp = run_ensemble(starts, model, cfg, seeds, 0.1, 10, {2.0}, Execution::openmp);
  for (std::size_t i = 0; i < rs.size(); ++i) CHECK(rs[i].final_state.u == rp[i].final_state.u);
}

TEST_CASE("ensemble member exceptions propagate") {
  CHECK_THROWS_AS(for_each_member(4, Execution::openmp,
                                  [](std::size_t i) {
                                    if (i == 2) throw std::runtime_error("member failed");
                                  }),
                  std::runtime_error);
}
