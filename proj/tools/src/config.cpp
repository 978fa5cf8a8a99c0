#include "manycopies/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "manycopies/cli/digest.hpp"

namespace manycopies::cli {

using nlohmann::json;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

const std::map<Experiment, std::string>& names() {
  static const std::map<Experiment, std::string> table = {
      {Experiment::povm_frontier, "povm-frontier"}, {Experiment::collapse_evolve, "collapse-evolve"},
      {Experiment::collapse_jump, "collapse-jump"},   {Experiment::bath_compare, "bath-compare"},
      {Experiment::seq_bound, "seq-bound"},           {Experiment::born_spectrum, "born-spectrum"},
      {Experiment::sorkin, "sorkin"}};
  return table;
}

ParamSpec number(std::string name, double def, double lo, double hi, std::string help, bool lo_open = false,
                 bool hi_open = false) {
  ParamSpec p{std::move(name), ParamType::number, def, lo, hi, lo_open, hi_open, {}, std::move(help)};
  return p;
}

ParamSpec integer(std::string name, std::int64_t def, double lo, double hi, std::string help) {
  return ParamSpec{std::move(name), ParamType::integer, def, lo, hi, false, false, {}, std::move(help)};
}

ParamSpec choice(std::string name, std::vector<std::string> options, std::string help) {
  const std::string def = options.front();
  return ParamSpec{std::move(name), ParamType::choice, def, 0, 0, false, false, std::move(options), std::move(help)};
}

ParamSpec number_list(std::string name, std::vector<double> def, double lo, double hi, std::string help) {
  return ParamSpec{std::move(name), ParamType::number_list, def, lo, hi, false, false, {}, std::move(help)};
}

std::vector<ParamSpec> collapse_common() {
  return {
      number("alpha", 0.5, 0.0, 10.0, "collapse amplitude (rate = alpha^2)", true),
      number("objective_gamma", 0.0, 0.0, 10.0, "per-copy objective collapse amplitude"),
      choice("initial", {"product", "basis"}, "product: (sum_m sqrt(w_m)|m>)^N; basis: k copies in pointer 1"),
      number_list("local_weights", {0.5, 0.5}, 0.0, 1.0, "local pointer weights w_m for the product state"),
      integer("minus_count", 1, 0, 12, "k, copies in pointer 1 for the basis initial state"),
  };
}

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(Experiment e) { return names().at(e); }

std::optional<Experiment> experiment_from_string(const std::string& name) {
  for (const auto& [e, n] : names()) {
    if (n == name) return e;
  }
  return std::nullopt;
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> list = {Experiment::povm_frontier, Experiment::collapse_evolve,
                                               Experiment::collapse_jump, Experiment::bath_compare,
                                               Experiment::seq_bound,     Experiment::born_spectrum,
                                               Experiment::sorkin};
  return list;
}

std::string ParamSpec::range_text() const {
  switch (type) {
    case ParamType::choice: {
      std::string out = name + " ∈ {";
      for (std::size_t i = 0; i < choices.size(); ++i) out += (i ? "," : "") + choices[i];
      return out + "}";
    }
    case ParamType::boolean:
      return name + " ∈ {true,false}";
    case ParamType::text:
      return name + " is a string";
    default:
      break;
  }
  const std::string lo = (min_open || std::isinf(min)) ? "(" : "[";
  const std::string hi = (max_open || std::isinf(max)) ? ")" : "]";
  std::string out = name + (type == ParamType::number_list ? " entries" : "") + " ∈ " + lo + format_number(min) +
                    "," + format_number(max) + hi;
  if (type == ParamType::integer) out += " (integer)";
  return out;
}

const std::vector<ParamSpec>& parameter_specs(Experiment e) {
  static const std::map<Experiment, std::vector<ParamSpec>> table = [] {
    std::map<Experiment, std::vector<ParamSpec>> t;
    t[Experiment::povm_frontier] = {
        choice("mode", {"unsharp", "faulty"}, "unsharp: (epsilon, delta); faulty: (lambda, eta)"),
        integer("grid", 100, 2, 2000, "points per axis on [0,1]"),
    };

    auto evolve = collapse_common();
    evolve.insert(evolve.begin(), {integer("n_copies", 3, 1, 6, "N"), integer("local_dim", 2, 2, 8, "d")});
    evolve.push_back(choice("engine", {"structured", "dense"}, "integrator"));
    evolve.push_back(number("t_final", 10.0, 0.0, 1e6, "evolution time"));
    evolve.push_back(number("dt", 0.0, 0.0, inf, "RK4 step; 0 picks the recommended step"));
    evolve.push_back(integer("record_stride", 1, 1, 1e9, "keep every k-th step"));
    evolve.push_back(number("local_energy", 0.0, -100.0, 100.0, "local H = local_energy * diag(0..d-1)"));
    t[Experiment::collapse_evolve] = evolve;

    auto jump = collapse_common();
    jump.insert(jump.begin(), {integer("n_copies", 2, 1, 12, "N"), integer("local_dim", 2, 2, 8, "d")});
    jump.push_back(integer("n_traj", 10000, 1, 1e7, "number of trajectories"));
    jump.push_back(number("lifetimes", 20.0, 0.0, 1e4, "t_final in units of 1/(total decay rate)", true));
    jump.push_back(integer("steps_per_lifetime", 20, 1, 1e6, "time steps per 1/(total decay rate)"));
    jump.push_back(number("local_energy", 0.0, -100.0, 100.0, "local H = local_energy * diag(0..d-1)"));
    t[Experiment::collapse_jump] = jump;

    t[Experiment::bath_compare] = {
        integer("n_copies", 2, 1, 4, "N"),
        number("alpha_squared", 0.05, 0.0, 1.0, "Lindblad rate alpha^2 to reproduce", true),
        integer("minus_count", 1, 0, 4, "k, copies in |-> for the initial |s,0>"),
        number_list("levels", {50, 100, 200, 400}, 2, 2000, "bath discretizations n_levels"),
        number("reference_e_max", 8.0, 0.0, 1e4, "band edge at reference_levels", true),
        integer("reference_levels", 50, 2, 2000, "level count at which e_max = reference_e_max"),
        number("fit_lifetimes", 2.0, 0.0, 100.0, "decay fit window in lifetimes", true),
        number("total_lifetimes", 4.0, 0.0, 100.0, "branching read-out time in lifetimes", true),
    };

    ParamSpec eps = number("epsilon", 0.0, 0.0, 1.0, "single sharpness value (overrides the grid)");
    eps.optional = true;
    eps.default_value = nullptr;
    t[Experiment::seq_bound] = {
        eps,
        integer("epsilon_steps", 11, 2, 100000, "grid points on [0,1] when epsilon is unset"),
        integer("n_copies", 2, 2, 6, "N for the many-copy run"),
        number("alpha", 0.5, 0.0, 10.0, "collapse amplitude for the many-copy run", true),
        number_list("delays", {0.0}, 0.0, 1e6, "inter-measurement times for the many-copy run"),
    };

    t[Experiment::born_spectrum] = {
        choice("source", {"harmonics", "rabi"}, "harmonics: p_t; rabi: damped cosines f1 + f2"),
        number("omega", 1.0, 0.0, 1e3, "Rabi angular frequency", true),
        ParamSpec{"xi", ParamType::text, "1:1", 0, 0, false, false, {}, "coefficients as m:value,m:value"},
        number("jitter_sigma", 0.0, 0.0, 1e6, "Gaussian timing jitter std"),
        integer("periods", 20, 1, 100000, "number of periods of p_t sampled"),
        integer("samples_per_period", 64, 16, 1000000, "samples per period pi/omega"),
        number("t_max", 60.0, 0.0, 1e6, "rabi time span", true),
        number("sample_dt", 0.01, 0.0, 10.0, "rabi sampling step", true),
        integer("pad_factor", 1, 1, 64, "zero padding factor"),
        choice("window", {"rectangular", "hann"}, "spectral window"),
        number("peak_floor", 1e-8, 0.0, 1.0, "relative peak floor", true),
    };

    t[Experiment::sorkin] = {
        number("epsilon", 0.1, -10.0, 10.0, "two-copy interaction strength"),
        choice("amplitudes", {"uniform", "basis", "random"}, "uniform (1,1,1)/sqrt3, basis (1,0,0), random"),
        integer("n_random", 10000, 1, 1e7, "random triples (amplitudes=random)"),
    };
    return t;
  }();
  return table.at(e);
}

namespace {

json validate_value(const ParamSpec& spec, const json& value, const std::string& path) {
  auto check_range = [&](double x, const std::string& where) {
    const bool lo_ok = spec.min_open ? x > spec.min : x >= spec.min;
    const bool hi_ok = spec.max_open ? x < spec.max : x <= spec.max;
    if (!std::isfinite(x) || !lo_ok || !hi_ok) {
      throw ConfigError(where, "value " + format_number(x) + " violates " + spec.range_text());
    }
  };
  switch (spec.type) {
    case ParamType::number: {
      if (!value.is_number()) throw ConfigError(path, "expected a number");
      check_range(value.get<double>(), path);
      return value.get<double>();
    }
    case ParamType::integer: {
      if (!value.is_number_integer()) {
        if (value.is_number_float() && std::floor(value.get<double>()) == value.get<double>()) {
          check_range(value.get<double>(), path);
          return static_cast<std::int64_t>(value.get<double>());
        }
        throw ConfigError(path, "expected an integer");
      }
      const auto x = value.get<std::int64_t>();
      check_range(static_cast<double>(x), path);
      return x;
    }
    case ParamType::boolean:
      if (!value.is_boolean()) throw ConfigError(path, "expected true or false");
      return value;
    case ParamType::choice: {
      if (!value.is_string()) throw ConfigError(path, "expected a string");
      const auto s = value.get<std::string>();
      for (const auto& c : spec.choices) {
        if (c == s) return value;
      }
      throw ConfigError(path, "'" + s + "' violates " + spec.range_text());
    }
    case ParamType::number_list: {
      if (!value.is_array() || value.empty()) throw ConfigError(path, "expected a non-empty array of numbers");
      json out = json::array();
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string where = path + "[" + std::to_string(i) + "]";
        if (!value[i].is_number()) throw ConfigError(where, "expected a number");
        check_range(value[i].get<double>(), where);
        out.push_back(value[i].get<double>());
      }
      return out;
    }
    case ParamType::text:
      if (!value.is_string()) throw ConfigError(path, "expected a string");
      return value;
  }
  throw ConfigError(path, "unsupported parameter type");
}

// Text from --set key=value, interpreted according to the parameter type.
json coerce_text(const ParamSpec& spec, const std::string& text, const std::string& path) {
  auto parse_double = [&](const std::string& s) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError(path, "'" + s + "' is not a number");
    }
    if (used != s.size()) throw ConfigError(path, "'" + s + "' is not a number");
    return x;
  };
  switch (spec.type) {
    case ParamType::number:
      return parse_double(text);
    case ParamType::integer: {
      std::size_t used = 0;
      long long x = 0;
      try {
        x = std::stoll(text, &used);
      } catch (const std::exception&) {
        throw ConfigError(path, "'" + text + "' is not an integer");
      }
      if (used != text.size()) throw ConfigError(path, "'" + text + "' is not an integer");
      return static_cast<std::int64_t>(x);
    }
    case ParamType::boolean:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw ConfigError(path, "'" + text + "' is not a boolean");
    case ParamType::number_list: {
      json out = json::array();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
      return out;
    }
    case ParamType::choice:
    case ParamType::text:
      return text;
  }
  return text;
}

std::uint64_t parse_seed(const json& value, const std::string& path) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(value.get<std::int64_t>());
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    std::size_t used = 0;
    unsigned long long x = 0;
    try {
      x = std::stoull(s, &used);
    } catch (const std::exception&) {
      throw ConfigError(path, "expected an unsigned 64-bit integer");
    }
    if (used != s.size() || s.front() == '-') throw ConfigError(path, "expected an unsigned 64-bit integer");
    return x;
  }
  throw ConfigError(path, "expected an unsigned 64-bit integer");
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "experiment" && key != "parameters" && key != "seed" && key != "output_dir") {
      throw ConfigError(key, "unknown key");
    }
  }
  if (!doc.contains("experiment")) throw ConfigError("experiment", "required key missing");
  if (!doc["experiment"].is_string()) throw ConfigError("experiment", "expected a string");
  const auto experiment = experiment_from_string(doc["experiment"].get<std::string>());
  if (!experiment) {
    std::string known;
    for (auto e : all_experiments()) known += (known.empty() ? "" : ", ") + to_string(e);
    throw ConfigError("experiment", "unknown experiment '" + doc["experiment"].get<std::string>() +
                                        "' (expected one of " + known + ")");
  }

  RunConfig config;
  config.experiment = *experiment;
  if (doc.contains("seed")) config.seed = parse_seed(doc["seed"], "seed");
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string() || doc["output_dir"].get<std::string>().empty()) {
      throw ConfigError("output_dir", "expected a non-empty string");
    }
    config.output_dir = doc["output_dir"].get<std::string>();
  }

  const json given = doc.contains("parameters") ? doc["parameters"] : json::object();
  if (!given.is_object()) throw ConfigError("parameters", "expected an object");
  const auto& specs = parameter_specs(config.experiment);
  for (const auto& [key, value] : given.items()) {
    const bool known = std::any_of(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.name == key; });
    if (!known) throw ConfigError("parameters." + key, "unknown parameter for " + to_string(config.experiment));
  }
  for (const auto& spec : specs) {
    const std::string path = "parameters." + spec.name;
    if (given.contains(spec.name) && !given[spec.name].is_null()) {
      config.parameters[spec.name] = validate_value(spec, given[spec.name], path);
    } else if (!spec.optional) {
      config.parameters[spec.name] = spec.default_value;
    }
  }
  return config;
}

RunConfig parse_config_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"manycopies"};
  std::string experiment;
  std::string config_file;
  std::vector<std::string> sets;
  std::string seed;
  std::string out;
  app.add_option("experiment", experiment, "experiment name");
  app.add_option("--config", config_file, "JSON config file");
  app.add_option("--set", sets, "parameter override key=value")->allow_extra_args(false);
  app.add_option("--seed", seed, "64-bit seed");
  app.add_option("--out", out, "output root directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError("", std::string("command line: ") + e.what());
  }

  json doc = json::object();
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw ConfigError("--config", "cannot read " + config_file);
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("--config", "config must be a JSON object");
  }
  if (!experiment.empty()) doc["experiment"] = experiment;
  if (!seed.empty()) doc["seed"] = seed;
  if (!out.empty()) doc["output_dir"] = out;

  if (!sets.empty()) {
    if (!doc.contains("experiment") || !doc["experiment"].is_string()) {
      throw ConfigError("experiment", "required key missing");
    }
    const auto e = experiment_from_string(doc["experiment"].get<std::string>());
    if (!e) throw ConfigError("experiment", "unknown experiment '" + doc["experiment"].get<std::string>() + "'");
    if (!doc.contains("parameters")) doc["parameters"] = json::object();
    const auto& specs = parameter_specs(*e);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set", "expected key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      const std::string path = "parameters." + key;
      const auto it = std::find_if(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.name == key; });
      if (it == specs.end()) throw ConfigError(path, "unknown parameter for " + to_string(*e));
      doc["parameters"][key] = coerce_text(*it, kv.substr(eq + 1), path);
    }
  }
  return parse_config(doc);
}

json serialize(const RunConfig& config) {
  json doc;
  doc["experiment"] = to_string(config.experiment);
  doc["parameters"] = config.parameters;
  doc["seed"] = config.seed;
  doc["output_dir"] = config.output_dir;
  return doc;
}

std::string config_digest(const RunConfig& config) {
  json doc = serialize(config);
  doc.erase("output_dir");
  return sha256_hex(doc.dump());
}

double RunConfig::number(const std::string& key) const { return parameters.at(key).get<double>(); }
std::int64_t RunConfig::integer(const std::string& key) const { return parameters.at(key).get<std::int64_t>(); }
bool RunConfig::flag(const std::string& key) const { return parameters.at(key).get<bool>(); }
std::string RunConfig::text(const std::string& key) const { return parameters.at(key).get<std::string>(); }
std::vector<double> RunConfig::numbers(const std::string& key) const {
  return parameters.at(key).get<std::vector<double>>();
}
bool RunConfig::has(const std::string& key) const { return parameters.contains(key); }

std::string parameter_help() {
  std::ostringstream os;
  for (auto e : all_experiments()) {
    os << to_string(e) << "\n";
    for (const auto& p : parameter_specs(e)) {
      os << "  " << p.name << " = " << (p.optional ? std::string("(unset)") : p.default_value.dump()) << "  ("
         << p.range_text() << ") " << p.help << "\n";
    }
  }
  return os.str();
}

}  // namespace manycopies::cli
