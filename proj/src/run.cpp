#include "sclaw/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "sclaw/invariant_measure.hpp"
#include "sclaw/observables.hpp"
#include "sclaw/snapshot.hpp"
#include "sclaw/validate.hpp"

namespace sclaw {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json estimate_json(const ErgodicEstimate& e) {
  return {{"observable", e.observable}, {"value", num(e.value)},   {"std_error", num(e.std_error)},
          {"burn_in", e.burn_in},       {"batches", e.batches},     {"samples", e.samples}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

std::uint64_t total_steps(const RunConfig& cfg, const Stepper& stepper) {
  return static_cast<std::uint64_t>(std::llround(cfg.horizon / stepper.dt()));
}

// Observes the state and fills the energy residual against the previous record.
ObservableRecord record_with_residual(Observer& obs, const State& s, const std::optional<ObservableRecord>& prev,
                                      const RunConfig& cfg, double trace) {
  ObservableRecord r = obs.observe(s.t, s.u, cfg.solver.guard_radius);
  if (prev) {
    const ObservableRecord window[2] = {*prev, r};
    r.energy_residual = energy_balance_residual(window, cfg.nu, trace);
  }
  return r;
}

void run_single(const RunConfig& cfg, std::ostream& log, RunOutcome& out) {
  const ModelSpec model = build_model(cfg);
  Stepper stepper(model, cfg.solver);
  NoisePath path = stepper.make_path(cfg.seed);
  const double trace = trace_h2(model.noise).l2;
  const fs::path dir(cfg.out);

  State state{0.0, 0, build_initial(cfg.initial_u, stepper.basis())};
  if (!cfg.resume.empty()) {
    state = restore_snapshot(read_snapshot(cfg.resume), stepper, path);
    log << "resumed from " << cfg.resume << " at t=" << format_double(state.t) << " step " << state.step << '\n';
  }

  Observer obs(stepper.basis(), cfg.observables);
  CsvWriter csv(dir / "observables.csv", cfg.observables);
  std::vector<ObservableRecord> records;
  std::optional<ObservableRecord> prev;
  const auto every = static_cast<std::uint64_t>(cfg.record_every);
  if (cfg.resume.empty()) {
    records.push_back(record_with_residual(obs, state, prev, cfg, trace));
    csv.write(records.back());
  } else {
    // The record at the snapshot was already written by the original run;
    // it is only needed as the left end of the next residual window.
    records.push_back(record_with_residual(obs, state, prev, cfg, trace));
  }
  prev = records.back();

  const std::uint64_t steps = total_steps(cfg, stepper);
  out.summary["steps_requested"] = steps;
  try {
    while (state.step < steps) {
      stepper.step(state, path);
      if (state.step % every == 0) {
        records.push_back(record_with_residual(obs, state, prev, cfg, trace));
        csv.write(records.back());
        prev = records.back();
      }
      if (cfg.snapshot_every > 0 && state.step % static_cast<std::uint64_t>(cfg.snapshot_every) == 0)
        write_snapshot(dir / ("snapshot_" + std::to_string(state.step) + ".bin"),
                       make_snapshot(state, path, stepper));
    }
  } catch (const BlowupError& e) {
    csv.flush();
    out.exit_code = exit_blowup;
    out.message = e.what();
    out.summary["status"] = "blowup";
    out.summary["blowup_kind"] = to_string(e.kind());
    out.summary["trip_time"] = num(e.time());
    out.summary["steps_completed"] = state.step;
    return;
  }
  csv.flush();
  write_snapshot(dir / "final.snap", make_snapshot(state, path, stepper));

  out.summary["status"] = "ok";
  out.summary["steps_completed"] = state.step;
  out.summary["final_time"] = state.t;
  out.summary["final"] = {{"l2_sq", records.back().l2_sq}, {"h1_sq", records.back().h1_sq},
                          {"h2_sq", records.back().h2_sq}};
  if (records.size() >= 2)
    out.summary["energy_balance_residual"] = num(energy_balance_residual(records, cfg.nu, trace));
  log << "single run: " << state.step << " steps to t=" << format_double(state.t) << '\n';
}

void run_coupled(const RunConfig& cfg, std::ostream& log, RunOutcome& out) {
  const ModelSpec model = build_model(cfg);
  auto basis = ModeBasis::make(cfg.solver.modes);
  const SpectralField u0 = build_initial(cfg.initial_u, basis);
  const SpectralField v0 = build_initial(cfg.initial_v, basis);
  const double trace = trace_h2(model.noise).l2;

  ConfluenceOptions opts;
  opts.horizon = cfg.horizon;
  opts.epsilons = cfg.epsilons;
  opts.tolerance = cfg.contraction_tolerance;
  opts.dissipation_radius = cfg.dissipation_radius;
  opts.stop_at_min_epsilon = false;
  const CouplingReport rep = confluence_experiment(u0, v0, model, cfg.solver, cfg.seed, opts);

  {
    std::ofstream csv(fs::path(cfg.out) / "coupled.csv", std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot open coupled.csv for writing");
    csv << "t,l1_dist,h1_sq_u,h1_sq_v\n";
    const auto every = static_cast<std::size_t>(cfg.record_every);
    for (std::size_t i = 0; i < rep.series.size(); ++i)
      if (i % every == 0 || i + 1 == rep.series.size()) {
        const auto& s = rep.series[i];
        csv << format_double(s.t) << ',' << format_double(s.l1) << ',' << format_double(s.h1_u) << ','
            << format_double(s.h1_v) << '\n';
      }
    if (!csv) throw std::runtime_error("write failed for coupled.csv");
  }

  json passages = json::array();
  for (std::size_t i = 0; i < rep.epsilons.size(); ++i)
    passages.push_back({{"epsilon", rep.epsilons[i]},
                        {"first_passage", rep.first_passage[i] ? json(*rep.first_passage[i]) : json(nullptr)}});
  out.summary["coupling"] = {{"initial_l1", rep.initial_distance},
                             {"final_l1", rep.final_distance},
                             {"first_passages", passages},
                             {"contraction_violations", rep.violations},
                             {"worst_relative_increase", rep.worst_relative_increase},
                             {"reached_min_epsilon", rep.reached}};
  if (cfg.dissipation_radius) {
    const double bound = dissipation_entry_bound(sobolev_norm_sq(u0.coeffs(), basis->eigenvalues(), 0.0),
                                                 sobolev_norm_sq(v0.coeffs(), basis->eigenvalues(), 0.0), cfg.nu,
                                                 *cfg.dissipation_radius, trace);
    out.summary["coupling"]["tau_r"] = rep.tau_r ? json(*rep.tau_r) : json(nullptr);
    out.summary["coupling"]["tau_r_mean_bound"] = num(bound);
  }
  if (rep.blowup) {
    out.exit_code = exit_blowup;
    out.message = *rep.blowup;
    out.summary["status"] = "blowup";
    return;
  }
  out.summary["status"] = "ok";
  log << "coupled run: L1 " << format_double(rep.initial_distance) << " -> " << format_double(rep.final_distance)
      << ", " << rep.violations << " contraction violations\n";
}

void run_ergodic(const RunConfig& cfg, std::ostream& log, RunOutcome& out) {
  const ModelSpec model = build_model(cfg);
  auto basis = ModeBasis::make(cfg.solver.modes);
  const SpectralField u0 = build_initial(cfg.initial_u, basis);
  const SpectralField v0 = build_initial(cfg.initial_v, basis);
  const double trace = trace_h2(model.noise).l2;
  const double burn_in = cfg.burn_in.value_or(default_burn_in(cfg.nu));

  // Independent noise for the second start so that the two averages are
  // independent estimates of the same stationary mean.
  const SampledRun a = sample_run(u0, model, cfg.solver, cfg.seed, cfg.horizon, cfg.record_every, cfg.observables);
  const SampledRun b = sample_run(v0, model, cfg.solver, cfg.seed + 1, cfg.horizon, cfg.record_every, cfg.observables);
  for (const auto* r : {&a, &b})
    if (r->blowup) {
      out.exit_code = exit_blowup;
      out.message = r->blowup->what();
      out.summary["status"] = "blowup";
      out.summary["trip_time"] = num(r->blowup->time());
      return;
    }
  {
    CsvWriter ca(fs::path(cfg.out) / "observables.csv", cfg.observables);
    for (const auto& r : a.records) ca.write(r);
    ca.flush();
    CsvWriter cb(fs::path(cfg.out) / "observables_v.csv", cfg.observables);
    for (const auto& r : b.records) cb.write(r);
    cb.flush();
  }

  std::vector<std::string> names{"l2_sq", "h1_sq"};
  for (double p : cfg.observables) names.push_back("lp" + format_double(p) + "_p");
  json estimates = json::array();
  bool all_agree = true;
  for (const auto& name : names) {
    const auto ea = ergodic_average(a.records, name, burn_in, cfg.batches);
    const auto eb = ergodic_average(b.records, name, burn_in, cfg.batches);
    const bool agree = estimates_agree(ea, eb);
    all_agree = all_agree && agree;
    estimates.push_back({{"from_u", estimate_json(ea)}, {"from_v", estimate_json(eb)}, {"agree_3se", agree}});
    log << name << ": " << format_double(ea.value) << " +- " << format_double(ea.std_error) << " vs "
        << format_double(eb.value) << " +- " << format_double(eb.std_error) << (agree ? "" : "  (disagree)") << '\n';
  }
  const auto h1 = ergodic_average(a.records, "h1_sq", burn_in, cfg.batches);
  json tight = json::array();
  for (const auto& row : tightness_diagnostic(a.records, cfg.tightness_epsilons, cfg.nu,
                                              sobolev_norm_sq(u0.coeffs(), basis->eigenvalues(), 0.0), trace))
    tight.push_back({{"epsilon", row.epsilon}, {"fraction", row.fraction}, {"bound", row.bound},
                     {"vacuous", row.vacuous}, {"holds", row.holds}});

  out.summary["status"] = "ok";
  out.summary["ergodic"] = {{"burn_in", burn_in},
                            {"estimates", estimates},
                            {"all_agree", all_agree},
                            {"dissipation_2nu_h1", 2.0 * cfg.nu * h1.value},
                            {"noise_l2_trace", trace},
                            {"tightness", tight}};
}

void run_validate(const RunConfig& cfg, std::ostream& log, RunOutcome& out) {
  const auto checks = validation_suite(cfg.seed);
  print_checks(checks, log);
  json arr = json::array();
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.passed;
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"value", num(c.value)}, {"threshold", c.threshold}});
  }
  out.summary["checks"] = arr;
  out.summary["status"] = ok ? "ok" : "check_failed";
  if (!ok) {
    out.exit_code = exit_check_failed;
    out.message = "validation checks failed";
  }
}

}  // namespace

std::string run_id(const RunConfig& cfg) {
  // Where the files go does not change what is computed.
  RunConfig key = cfg;
  key.out = "out";
  key.resume.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : echo_config(key)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunOutcome run_experiment(const RunConfig& cfg, std::ostream& log) {
  RunOutcome out;
  out.summary = {{"run_id", run_id(cfg)},
                 {"experiment", to_string(cfg.experiment)},
                 {"config", echo_config(cfg)},
                 {"metadata",
                  {{"created", utc_timestamp()},
                   {"note", "time averages are read as invariant-measure expectations only under uniqueness and "
                            "ergodicity of the stationary law"}}}};
  try {
    if (auto problems = validate_config(cfg); !problems.empty()) throw ConfigError(problems);
    const ModelSpec model = build_model(cfg);
    const auto traces = trace_h2(model.noise);
    out.summary["noise_traces"] = {{"h2", traces.h2}, {"l2", traces.l2}};
    out.summary["dt"] = cfg.solver.dt > 0.0 ? cfg.solver.dt : default_dt(cfg.nu, cfg.solver.modes);

    fs::create_directories(cfg.out);
    write_text(fs::path(cfg.out) / "config.ini", echo_config(cfg));
    switch (cfg.experiment) {
      case Experiment::single: run_single(cfg, log, out); break;
      case Experiment::coupled: run_coupled(cfg, log, out); break;
      case Experiment::ergodic: run_ergodic(cfg, log, out); break;
      case Experiment::validate: run_validate(cfg, log, out); break;
    }
  } catch (const ConfigError& e) {
    out.exit_code = exit_config;
    out.message = e.what();
  } catch (const BlowupError& e) {
    out.exit_code = exit_blowup;
    out.message = e.what();
    out.summary["trip_time"] = num(e.time());
  } catch (const std::invalid_argument& e) {
    out.exit_code = exit_config;
    out.message = e.what();
  } catch (const std::exception& e) {
    out.exit_code = exit_io;
    out.message = e.what();
  }
  if (out.exit_code != exit_ok) {
    if (!out.summary.contains("status")) out.summary["status"] = "error";
    out.summary["error"] = out.message;
  }
  out.summary["exit_code"] = out.exit_code;
  if (out.exit_code != exit_config) {
    try {
      write_text(fs::path(cfg.out) / "summary.json", out.summary.dump(2) + "\n");
    } catch (const std::exception& e) {
      out.exit_code = exit_io;
      out.message = e.what();
    }
  }
  return out;
}

}  // namespace sclaw
