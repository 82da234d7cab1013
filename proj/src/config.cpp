#include "sclaw/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "sclaw/observables.hpp"

namespace sclaw {

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(std::string_view text) {
  const std::string s = trim(text);
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

template <class Int>
std::optional<Int> to_int(std::string_view text) {
  const std::string s = trim(text);
  Int v{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::vector<double>> to_list(std::string_view text) {
  std::vector<double> out;
  const std::string s = trim(text);
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto v = to_double(item);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double x : v) parts.push_back(format_double(x));
  return join(parts, ",");
}

// Applies the key/value map onto a RunConfig, collecting problems.
class Assembler {
 public:
  Assembler(RunConfig& cfg, std::vector<std::string>& problems) : cfg_(cfg), problems_(problems) {}

  void apply(const std::map<std::string, std::string>& kv) {
    const bool has_sigma = kv.count("noise.sigma") > 0;
    const bool has_profile = kv.count("noise.profile_c") > 0 || kv.count("noise.profile_q") > 0;
    if (has_sigma && has_profile)
      problems_.push_back("noise: give either sigma or profile_c/profile_q, not both");
    for (const auto& [key, value] : kv) {
      auto it = handlers().find(key);
      if (it == handlers().end()) {
        problems_.push_back("unknown key '" + key + "'");
        continue;
      }
      it->second(*this, key, value);
    }
  }

 private:
  using Handler = std::function<void(Assembler&, const std::string&, const std::string&)>;

  void bad(const std::string& key, const std::string& value, const char* expected) {
    problems_.push_back(key + ": cannot parse '" + value + "' as " + expected);
  }

  static Handler real(double RunConfig::*field) {
    return [field](Assembler& a, const std::string& k, const std::string& v) {
      if (auto d = to_double(v)) a.cfg_.*field = *d;
      else a.bad(k, v, "a number");
    };
  }
  static Handler integer(int RunConfig::*field) {
    return [field](Assembler& a, const std::string& k, const std::string& v) {
      if (auto d = to_int<int>(v)) a.cfg_.*field = *d;
      else a.bad(k, v, "an integer");
    };
  }
  static Handler list(std::vector<double> RunConfig::*field) {
    return [field](Assembler& a, const std::string& k, const std::string& v) {
      if (auto d = to_list(v)) a.cfg_.*field = *d;
      else a.bad(k, v, "a comma-separated list of numbers");
    };
  }
  static Handler text(std::string RunConfig::*field) {
    return [field](Assembler& a, const std::string&, const std::string& v) { a.cfg_.*field = trim(v); };
  }
  static Handler maybe_real(std::optional<double> RunConfig::*field) {
    return [field](Assembler& a, const std::string& k, const std::string& v) {
      if (trim(v) == "none") a.cfg_.*field = std::nullopt;
      else if (auto d = to_double(v)) a.cfg_.*field = *d;
      else a.bad(k, v, "a number or 'none'");
    };
  }

  static const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table = {
        {"model.nu", real(&RunConfig::nu)},
        {"model.flux", text(&RunConfig::flux)},
        {"model.flux_coeffs", list(&RunConfig::flux_coeffs)},
        {"model.flux_growth_exponent",
         [](Assembler& a, const std::string& k, const std::string& v) {
           if (trim(v) == "none") a.cfg_.flux_growth_exponent = std::nullopt;
           else if (auto d = to_int<int>(v)) a.cfg_.flux_growth_exponent = *d;
           else a.bad(k, v, "an integer or 'none'");
         }},
        {"model.flux_growth_constant", maybe_real(&RunConfig::flux_growth_constant)},
        {"noise.profile_c",
         [](Assembler& a, const std::string& k, const std::string& v) {
           if (auto d = to_double(v)) a.cfg_.noise_profile.c = *d;
           else a.bad(k, v, "a number");
         }},
        {"noise.profile_q",
         [](Assembler& a, const std::string& k, const std::string& v) {
           if (auto d = to_double(v)) a.cfg_.noise_profile.q = *d;
           else a.bad(k, v, "a number");
         }},
        {"noise.sigma", list(&RunConfig::noise_sigma)},
        {"solver.modes",
         [](Assembler& a, const std::string& k, const std::string& v) {
           if (auto d = to_int<int>(v)) a.cfg_.solver.modes = *d;
           else a.bad(k, v, "an integer");
         }},
        {"solver.dt",
         [](Assembler& a, const std::string& k, const std::string& v) {
           if (auto d = to_double(v)) a.cfg_.solver.dt = *d;
           else a.bad(k, v, "a number");
         }},
        {"solver.scheme",
         [](Assembler& a, const std::string& k, const std::string& v) {
           if (auto s = parse_scheme(trim(v))) a.cfg_.solver.scheme = *s;
           else a.bad(k, v, "exp_euler or exp_midpoint_flux");
         }},
        {"solver.guard_radius",
         [](Assembler& a, const std::string& k, const std::string& v) {
           if (trim(v) == "none") a.cfg_.solver.guard_radius = std::nullopt;
           else if (auto d = to_double(v)) a.cfg_.solver.guard_radius = *d;
           else a.bad(k, v, "a number or 'none'");
         }},
        {"solver.picard_tol",
         [](Assembler& a, const std::string& k, const std::string& v) {
           if (auto d = to_double(v)) a.cfg_.solver.picard_tol = *d;
           else a.bad(k, v, "a number");
         }},
        {"solver.picard_max_iter",
         [](Assembler& a, const std::string& k, const std::string& v) {
           if (auto d = to_int<int>(v)) a.cfg_.solver.picard_max_iter = *d;
           else a.bad(k, v, "an integer");
         }},
        {"solver.picard_max_halvings",
         [](Assembler& a, const std::string& k, const std::string& v) {
           if (auto d = to_int<int>(v)) a.cfg_.solver.picard_max_halvings = *d;
           else a.bad(k, v, "an integer");
         }},
        {"run.experiment",
         [](Assembler& a, const std::string& k, const std::string& v) {
           if (auto e = parse_experiment(trim(v))) a.cfg_.experiment = *e;
           else a.bad(k, v, "single, coupled, ergodic or validate");
         }},
        {"run.horizon", real(&RunConfig::horizon)},
        {"run.seed",
         [](Assembler& a, const std::string& k, const std::string& v) {
           if (auto d = to_int<std::uint64_t>(v)) a.cfg_.seed = *d;
           else a.bad(k, v, "an unsigned 64-bit integer");
         }},
        {"run.out", text(&RunConfig::out)},
        {"run.observables", list(&RunConfig::observables)},
        {"run.record_every", integer(&RunConfig::record_every)},
        {"run.snapshot_every", integer(&RunConfig::snapshot_every)},
        {"run.initial_u", text(&RunConfig::initial_u)},
        {"run.initial_v", text(&RunConfig::initial_v)},
        {"run.resume", text(&RunConfig::resume)},
        {"coupled.epsilons", list(&RunConfig::epsilons)},
        {"coupled.tolerance", real(&RunConfig::contraction_tolerance)},
        {"coupled.dissipation_radius", maybe_real(&RunConfig::dissipation_radius)},
        {"ergodic.burn_in", maybe_real(&RunConfig::burn_in)},
        {"ergodic.batches", integer(&RunConfig::batches)},
        {"ergodic.tightness_epsilons", list(&RunConfig::tightness_epsilons)},
    };
    return table;
  }

  RunConfig& cfg_;
  std::vector<std::string>& problems_;
};

std::map<std::string, std::string> flatten_ini(std::string_view ini, std::vector<std::string>& problems) {
  std::map<std::string, std::string> kv;
  boost::property_tree::ptree tree;
  try {
    std::istringstream in{std::string(ini)};
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    problems.push_back(std::string("config syntax: ") + e.what());
    return kv;
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      problems.push_back("key '" + section + "' must live inside a [section]");
      continue;
    }
    for (const auto& [key, value] : body) kv[section + "." + key] = value.data();
  }
  return kv;
}

}  // namespace

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::single: return "single";
    case Experiment::coupled: return "coupled";
    case Experiment::ergodic: return "ergodic";
    case Experiment::validate: return "validate";
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  if (name == "single") return Experiment::single;
  if (name == "coupled") return Experiment::coupled;
  if (name == "ergodic") return Experiment::ergodic;
  if (name == "validate") return Experiment::validate;
  return std::nullopt;
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration:\n  " + join(problems, "\n  ")), problems_(std::move(problems)) {}

std::vector<std::string> validate_config(const RunConfig& c) {
  std::vector<std::string> p;
  auto num = [](double v) { return format_double(v); };
  if (!(c.nu > 0.0) || !std::isfinite(c.nu)) p.push_back("model.nu: violated ν > 0 (got " + num(c.nu) + ")");
  if (c.solver.modes < 2 || c.solver.modes % 2 != 0)
    p.push_back("solver.modes: violated modes even and >= 2 (got " + std::to_string(c.solver.modes) + ")");
  if (!(c.solver.dt >= 0.0) || !std::isfinite(c.solver.dt))
    p.push_back("solver.dt: violated dt > 0 (got " + num(c.solver.dt) + ")");
  if (c.solver.guard_radius && !(*c.solver.guard_radius > 0.0))
    p.push_back("solver.guard_radius: violated r > 0");
  if (!(c.solver.picard_tol > 0.0)) p.push_back("solver.picard_tol: violated tol > 0");
  if (c.solver.picard_max_iter < 1) p.push_back("solver.picard_max_iter: violated max_iter >= 1");
  if (c.solver.picard_max_halvings < 0) p.push_back("solver.picard_max_halvings: violated >= 0");

  if (c.noise_sigma.empty()) {
    if (!(c.noise_profile.c >= 0.0) || !std::isfinite(c.noise_profile.c))
      p.push_back("noise.profile_c: violated c >= 0");
    if (!(c.noise_profile.q > 2.5))
      p.push_back("noise.profile_q: q=" + num(c.noise_profile.q) +
                  " makes the H2 trace sum lambda_m^2 sigma_m^2 diverge under lambda_m^2 growth; q must exceed 2.5");
  } else {
    if (static_cast<int>(c.noise_sigma.size()) != c.solver.modes)
      p.push_back("noise.sigma: expected " + std::to_string(c.solver.modes) + " amplitudes, got " +
                  std::to_string(c.noise_sigma.size()));
    for (double s : c.noise_sigma)
      if (!std::isfinite(s)) {
        p.push_back("noise.sigma: amplitudes must be finite");
        break;
      }
  }

  try {
    (void)build_flux(c);
  } catch (const std::exception& e) {
    p.push_back(std::string("model.flux: ") + e.what());
  }

  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) p.push_back("run.horizon: violated horizon > 0");
  if (c.out.empty()) p.push_back("run.out: output directory must be set");
  for (double q : c.observables)
    if (!(q >= 1.0) || std::isinf(q)) {
      p.push_back("run.observables: L^p orders must be finite and >= 1");
      break;
    }
  if (c.record_every < 1) p.push_back("run.record_every: violated record_every >= 1");
  if (c.snapshot_every < 0) p.push_back("run.snapshot_every: violated snapshot_every >= 0");
  if (c.snapshot_every > 0 && c.record_every > 0 && c.snapshot_every % c.record_every != 0)
    p.push_back("run.snapshot_every: must be a multiple of record_every");
  if (c.solver.modes >= 2 && c.solver.modes % 2 == 0) {
    const auto basis = ModeBasis::make(c.solver.modes);
    for (const auto* d : {&c.initial_u, &c.initial_v}) {
      try {
        (void)build_initial(*d, basis);
      } catch (const std::exception& e) {
        p.push_back(std::string("run.initial: ") + e.what());
      }
    }
  }
  for (double e : c.epsilons)
    if (!(e > 0.0)) {
      p.push_back("coupled.epsilons: thresholds must be > 0");
      break;
    }
  if (!(c.contraction_tolerance >= 0.0)) p.push_back("coupled.tolerance: violated tolerance >= 0");
  if (c.dissipation_radius && !(*c.dissipation_radius > 0.0)) p.push_back("coupled.dissipation_radius: violated R > 0");
  if (c.burn_in && !(*c.burn_in >= 0.0)) p.push_back("ergodic.burn_in: violated burn_in >= 0");
  if (c.batches < 8) p.push_back("ergodic.batches: violated batches >= 8");
  for (double e : c.tightness_epsilons)
    if (!(e > 0.0)) {
      p.push_back("ergodic.tightness_epsilons: thresholds must be > 0");
      break;
    }
  return p;
}

RunConfig parse_config_text(std::string_view ini, const ConfigOverrides& overrides) {
  std::vector<std::string> problems;
  auto kv = flatten_ini(ini, problems);
  for (const auto& [key, value] : overrides) {
    kv[key] = value;
    // A profile given on the command line replaces an explicit sigma list.
    if (key == "noise.profile_c" || key == "noise.profile_q") kv.erase("noise.sigma");
  }
  RunConfig cfg;
  Assembler(cfg, problems).apply(kv);
  auto more = validate_config(cfg);
  problems.insert(problems.end(), more.begin(), more.end());
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file, const ConfigOverrides& overrides) {
  std::string text;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError({"cannot read config file " + file->string()});
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_config_text(text, overrides);
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream o;
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("none"); };
  o << "[model]\n";
  o << "nu = " << format_double(c.nu) << "\n";
  o << "flux = " << c.flux << "\n";
  if (!c.flux_coeffs.empty()) o << "flux_coeffs = " << list_text(c.flux_coeffs) << "\n";
  o << "flux_growth_exponent = " << (c.flux_growth_exponent ? std::to_string(*c.flux_growth_exponent) : "none")
    << "\n";
  o << "flux_growth_constant = " << opt(c.flux_growth_constant) << "\n";
  o << "\n[noise]\n";
  if (c.noise_sigma.empty()) {
    o << "profile_c = " << format_double(c.noise_profile.c) << "\n";
    o << "profile_q = " << format_double(c.noise_profile.q) << "\n";
  } else {
    o << "sigma = " << list_text(c.noise_sigma) << "\n";
  }
  o << "\n[solver]\n";
  o << "modes = " << c.solver.modes << "\n";
  o << "dt = " << format_double(c.solver.dt) << "\n";
  o << "scheme = " << to_string(c.solver.scheme) << "\n";
  o << "guard_radius = " << opt(c.solver.guard_radius) << "\n";
  o << "picard_tol = " << format_double(c.solver.picard_tol) << "\n";
  o << "picard_max_iter = " << c.solver.picard_max_iter << "\n";
  o << "picard_max_halvings = " << c.solver.picard_max_halvings << "\n";
  o << "\n[run]\n";
  o << "experiment = " << to_string(c.experiment) << "\n";
  o << "horizon = " << format_double(c.horizon) << "\n";
  o << "seed = " << c.seed << "\n";
  o << "out = " << c.out << "\n";
  o << "observables = " << list_text(c.observables) << "\n";
  o << "record_every = " << c.record_every << "\n";
  o << "snapshot_every = " << c.snapshot_every << "\n";
  o << "initial_u = " << c.initial_u << "\n";
  o << "initial_v = " << c.initial_v << "\n";
  o << "resume = " << c.resume << "\n";
  o << "\n[coupled]\n";
  o << "epsilons = " << list_text(c.epsilons) << "\n";
  o << "tolerance = " << format_double(c.contraction_tolerance) << "\n";
  o << "dissipation_radius = " << opt(c.dissipation_radius) << "\n";
  o << "\n[ergodic]\n";
  o << "burn_in = " << opt(c.burn_in) << "\n";
  o << "batches = " << c.batches << "\n";
  o << "tightness_epsilons = " << list_text(c.tightness_epsilons) << "\n";
  return o.str();
}

FluxSpec build_flux(const RunConfig& c) {
  if (c.flux == "burgers") return FluxSpec::burgers();
  if (c.flux == "zero") return FluxSpec::zero();
  if (c.flux == "cubic") return FluxSpec::polynomial({0.0, 0.0, 0.0, 1.0 / 3.0}, 2, 1.0);
  if (c.flux == "polynomial") {
    if (c.flux_coeffs.empty()) throw std::invalid_argument("polynomial flux needs flux_coeffs");
    if (c.flux_growth_exponent || c.flux_growth_constant) {
      const FluxSpec inferred = FluxSpec::polynomial(c.flux_coeffs);
      return FluxSpec::polynomial(c.flux_coeffs, c.flux_growth_exponent.value_or(inferred.growth_exponent()),
                                  c.flux_growth_constant.value_or(inferred.growth_constant()));
    }
    return FluxSpec::polynomial(c.flux_coeffs);
  }
  throw std::invalid_argument("unknown flux '" + c.flux + "' (burgers, zero, cubic, polynomial)");
}

NoiseSpec build_noise(const RunConfig& c) {
  if (!c.noise_sigma.empty()) return NoiseSpec::diagonal(c.noise_sigma);
  return NoiseSpec::from_profile(c.solver.modes, c.noise_profile);
}

ModelSpec build_model(const RunConfig& c) { return ModelSpec{c.nu, build_flux(c), build_noise(c)}; }

SpectralField build_initial(std::string_view descriptor, const BasisPtr& basis) {
  const std::string d = trim(descriptor);
  SpectralField f(basis);
  if (d == "zero" || d.empty()) return f;
  if (d.rfind("coeffs:", 0) == 0) {
    auto list = to_list(d.substr(7));
    if (!list || static_cast<int>(list->size()) > basis->modes())
      throw std::invalid_argument("initial condition '" + d + "': bad coefficient list");
    std::copy(list->begin(), list->end(), f.coeffs().begin());
    return f;
  }
  std::stringstream ss(d);
  std::string term;
  while (std::getline(ss, term, '+')) {
    term = trim(term);
    if (term.rfind("mode:", 0) != 0) throw std::invalid_argument("initial condition '" + d + "' not understood");
    const std::string rest = term.substr(5);
    const auto colon = rest.find(':');
    const auto m = to_int<int>(rest.substr(0, colon));
    const auto amp = colon == std::string::npos ? std::optional<double>(1.0) : to_double(rest.substr(colon + 1));
    if (!m || !amp || *m < 1 || *m > basis->modes())
      throw std::invalid_argument("initial condition '" + d + "': bad mode term '" + term + "'");
    f.coeff(*m) += *amp;
  }
  return f;
}

}  // namespace sclaw
