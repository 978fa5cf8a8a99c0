#include "manycopies/cli/run.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "manycopies/cli/digest.hpp"
#include "manycopies/manycopies.hpp"

#ifndef MANYCOPIES_VERSION
#define MANYCOPIES_VERSION "unknown"
#endif

namespace manycopies::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : columns_(header.size()) { line(header); }

  Csv& row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    return line(cells);
  }
  Csv& line(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
    return *this;
  }
  const std::string& text() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

// Files produced by an experiment, in emission order.
struct Artifacts {
  std::vector<std::pair<std::string, std::string>> files;
  json summary = json::object();

  void add(std::string name, const Csv& csv) { files.emplace_back(std::move(name), csv.text()); }
};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Box-Muller from the portable uniform draw.
double gaussian(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---- povm-frontier --------------------------------------------------------

Artifacts run_povm(const RunConfig& cfg) {
  const auto n = static_cast<std::size_t>(cfg.integer("grid"));
  const bool faulty = cfg.text("mode") == "faulty";
  auto axis_value = [n](std::size_t i) { return static_cast<double>(i) / static_cast<double>(n - 1); };

  Artifacts out;
  std::size_t feasible_count = 0;
  std::size_t formula_mismatch = 0;
  double worst_feasible_eigenvalue = std::numeric_limits<double>::infinity();
  if (!faulty) {
    Csv csv({"epsilon", "delta", "feasible", "min_eigenvalue_of_M_pp"});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double eps = axis_value(i), delta = axis_value(j);
        const povm::UnsharpPair pair(eps, delta);
        const bool ok = povm::unsharp_feasible(pair);
        double lo = 0.0;
        if (ok) {
          const povm::JointPOVM joint = povm::construct_joint_unsharp(pair);
          lo = min_eigenvalue(joint.at(+1, +1).matrix());
          worst_feasible_eigenvalue = std::min(worst_feasible_eigenvalue, joint.min_eigenvalue());
          ++feasible_count;
        } else {
          // Same unbiased family beyond the frontier, to show where positivity fails.
          const ComplexMatrix m = 0.25 * ComplexMatrix::Identity(2, 2) + (eps / 4.0) * pauli(Axis::z).matrix() +
                                  (delta / 4.0) * pauli(Axis::x).matrix();
          lo = min_eigenvalue(m);
        }
        if (ok != (eps * eps + delta * delta <= 1.0 + 1e-12)) ++formula_mismatch;
        csv.row({eps, delta, ok ? 1.0 : 0.0, lo});
      }
    }
    out.add("frontier.csv", csv);
    const povm::NoGoCertificate cert = povm::sharp_nogo_certificate();
    out.summary["sharp_nogo"] = {{"infeasible", cert.infeasible}, {"residual", cert.residual}, {"chain", cert.chain}};
    out.summary["min_eigenvalue_feasible"] = worst_feasible_eigenvalue;
  } else {
    Csv csv({"lambda", "eta", "feasible", "min_eigenvalue_of_remainder"});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double lambda = axis_value(i), eta = axis_value(j);
        const povm::FaultyPair pair(lambda, eta);
        const bool ok = povm::faulty_feasible(pair);
        const double lo = min_eigenvalue(povm::faulty_remainder(pair).matrix());
        if (ok) ++feasible_count;
        if (ok != (lo >= -1e-12)) ++formula_mismatch;
        csv.row({lambda, eta, ok ? 1.0 : 0.0, lo});
      }
    }
    out.add("frontier.csv", csv);
    out.summary["symmetric_slice_boundary"] = 2.0 - std::numbers::sqrt2;
  }
  out.summary["grid"] = n;
  out.summary["feasible_points"] = feasible_count;
  out.summary["formula_mismatches"] = formula_mismatch;
  return out;
}

// ---- collapse models ------------------------------------------------------

struct CollapseSetup {
  CopySpace space;
  CollapseDynamics dyn;
  std::vector<double> expected;  // pointer weights predicted by the Born rule
  ComplexVector psi0;
};

CollapseSetup collapse_setup(const RunConfig& cfg) {
  const auto n = static_cast<std::size_t>(cfg.integer("n_copies"));
  const auto d = static_cast<std::size_t>(cfg.integer("local_dim"));
  const CopySpace space(n, d);
  space.require_ket_fits();
  const CollapseModel model(space, cfg.number("alpha"));
  ComplexMatrix h = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t m = 0; m < d; ++m) {
    h(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) = cfg.number("local_energy") * static_cast<double>(m);
  }
  CollapseDynamics dyn(model, Operator::hermitian(h), cfg.number("objective_gamma"));

  std::vector<double> expected(d, 0.0);
  ComplexVector psi;
  if (cfg.text("initial") == "product") {
    const auto w = cfg.numbers("local_weights");
    if (w.size() != d) {
      throw ConfigError("parameters.local_weights", "needs exactly local_dim = " + std::to_string(d) + " entries");
    }
    double sum = 0.0;
    for (double x : w) sum += x;
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("parameters.local_weights", "entries must sum to 1");
    ComplexVector local(static_cast<Eigen::Index>(d));
    for (std::size_t m = 0; m < d; ++m) local(static_cast<Eigen::Index>(m)) = std::sqrt(w[m]);
    psi = product_ket(Ket::normalized(local), space).amplitudes();
    expected = w;
  } else {
    const auto k = static_cast<std::size_t>(cfg.integer("minus_count"));
    if (k > n) throw ConfigError("parameters.minus_count", "minus_count ∈ [0,n_copies]");
    std::vector<std::size_t> symbols(n, 0);
    for (std::size_t j = n - k; j < n; ++j) symbols[j] = 1;
    const BasisLabel label(space, symbols);
    psi = Ket::basis(space.dimension(), label.index(space)).amplitudes();
    for (std::size_t m = 0; m < d; ++m) expected[m] = static_cast<double>(occupation(label, m)) / static_cast<double>(n);
  }
  return CollapseSetup{space, std::move(dyn), std::move(expected), std::move(psi)};
}

json vector_json(const std::vector<double>& v) { return json(v); }

Artifacts run_collapse_evolve(const RunConfig& cfg) {
  const CollapseSetup setup = collapse_setup(cfg);
  setup.space.require_operator_fits();
  const DensityMatrix rho0 = DensityMatrix::pure(Ket(setup.psi0));
  const bool dense = cfg.text("engine") == "dense";
  const double dt = cfg.number("dt") > 0.0 ? cfg.number("dt") : recommended_dt(setup.dyn);
  EvolveOptions options;
  options.record_stride = static_cast<std::size_t>(cfg.integer("record_stride"));

  const EvolutionResult result =
      dense ? evolve_dense(to_lindblad(setup.dyn), rho0, cfg.number("t_final"), dt, options)
            : evolve_structured(setup.dyn, rho0, cfg.number("t_final"), dt, options);

  const std::size_t d = setup.space.local_dim();
  std::vector<std::string> header = {"time"};
  for (std::size_t m = 0; m < d; ++m) header.push_back("pointer_" + std::to_string(m));
  if (d >= 2) header.push_back("coherence_0_1");
  header.push_back("trace");
  Csv csv(header);
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    const ComplexMatrix& rho = result.states[i];
    std::vector<double> row = {result.times[i]};
    for (double p : pointer_populations(setup.dyn.collapse, rho)) row.push_back(p);
    if (d >= 2) row.push_back(pointer_coherence(setup.dyn.collapse, rho, 0, 1));
    row.push_back(rho.trace().real());
    csv.row(row);
  }

  FinalStateOptions fopts;
  fopts.engine = dense ? Engine::dense : Engine::structured;
  fopts.dt = dt;
  const FinalState fin = final_state(setup.dyn, rho0, fopts);
  double worst = 0.0;
  for (std::size_t m = 0; m < d; ++m) worst = std::max(worst, std::abs(fin.pointer_weights[m] - setup.expected[m]));

  Artifacts out;
  out.add("evolution.csv", csv);
  out.summary["dt"] = result.dt;
  out.summary["steps"] = result.steps;
  out.summary["trace_drift"] = result.trace_drift;
  out.summary["min_eigenvalue"] = std::isfinite(result.min_eigenvalue) ? json(result.min_eigenvalue) : json(nullptr);
  out.summary["final_pointer_weights"] = vector_json(fin.pointer_weights);
  out.summary["expected_pointer_weights"] = vector_json(setup.expected);
  out.summary["max_weight_error"] = worst;
  out.summary["final_time"] = fin.time;
  out.summary["total_decay_rate"] = setup.dyn.total_decay_rate();
  return out;
}

Artifacts run_collapse_jump(const RunConfig& cfg, const RunOptions& options) {
  const CollapseSetup setup = collapse_setup(cfg);
  const double gamma = setup.dyn.total_decay_rate();
  const double t_final = cfg.number("lifetimes") / gamma;
  const double dt = 1.0 / (gamma * static_cast<double>(cfg.integer("steps_per_lifetime")));
  const auto n_traj = static_cast<std::size_t>(cfg.integer("n_traj"));
  const TrajectoryHistogram hist =
      jump_trajectories(setup.dyn, Ket(setup.psi0), t_final, dt, n_traj, cfg.seed, options.workers);

  Csv csv({"pointer", "count", "frequency", "expected", "mean_population", "stderr_population"});
  double worst_z = 0.0;
  for (std::size_t m = 0; m < hist.counts.size(); ++m) {
    const double freq = static_cast<double>(hist.counts[m]) / static_cast<double>(n_traj);
    const double p = setup.expected[m];
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n_traj));
    if (sigma > 0.0) worst_z = std::max(worst_z, std::abs(freq - p) / sigma);
    csv.row({static_cast<double>(m), static_cast<double>(hist.counts[m]), freq, p, hist.mean_pointer_populations[m],
             hist.stderr_pointer_populations[m]});
  }
  Artifacts out;
  out.add("histogram.csv", csv);
  out.summary["n_traj"] = n_traj;
  out.summary["unresolved"] = hist.unresolved;
  out.summary["total_jumps"] = hist.total_jumps;
  out.summary["t_final"] = t_final;
  out.summary["dt"] = dt;
  out.summary["max_z_score"] = worst_z;
  out.summary["expected_pointer_weights"] = vector_json(setup.expected);
  return out;
}

// ---- bath-compare ---------------------------------------------------------

Artifacts run_bath(const RunConfig& cfg) {
  const auto n = static_cast<std::size_t>(cfg.integer("n_copies"));
  const auto k = static_cast<std::size_t>(cfg.integer("minus_count"));
  if (k > n) throw ConfigError("parameters.minus_count", "minus_count ∈ [0,n_copies]");
  const CopySpace space(n, 2);
  std::vector<std::size_t> symbols(n, 0);
  for (std::size_t j = n - k; j < n; ++j) symbols[j] = 1;
  const BasisLabel label(space, symbols);
  const std::int64_t spin = spin_sum(label);
  if (static_cast<std::size_t>(std::abs(spin)) == n) {
    throw ConfigError("parameters.minus_count", "pointer states do not decay; need 0 < minus_count < n_copies");
  }
  const double alpha = std::sqrt(cfg.number("alpha_squared"));
  BathComparisonOptions options;
  options.fit_lifetimes = cfg.number("fit_lifetimes");
  options.total_lifetimes = cfg.number("total_lifetimes");

  Csv table({"n_levels", "e_max", "e_c", "bath_rate", "lindblad_rate", "rate_error", "bath_branching",
             "lindblad_branching", "branching_error", "max_survival_deviation"});
  json rows = json::array();
  std::vector<double> errors, branching_errors;
  const auto levels = cfg.numbers("levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] != std::floor(levels[i])) {
      throw ConfigError("parameters.levels[" + std::to_string(i) + "]", "must be an integer");
    }
  }
  for (double lv : levels) {
    const auto m = static_cast<std::size_t>(lv);
    const BathModel bath = centered_bath(space, alpha, spin, m, cfg.number("reference_e_max"),
                                         static_cast<std::size_t>(cfg.integer("reference_levels")));
    const BathComparison c = compare_bath_to_lindblad(bath, label, options);
    table.row({lv, bath.e_max, bath.e_c, c.bath_rate, c.lindblad_rate, c.rate_error, c.bath_branching,
               c.lindblad_branching, c.branching_error, c.max_survival_deviation});
    errors.push_back(c.rate_error);
    branching_errors.push_back(c.branching_error);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < errors.size(); ++i) monotone = monotone && errors[i] < errors[i - 1];

  // Time series for the finest discretization.
  const BathModel finest = centered_bath(space, alpha, spin, static_cast<std::size_t>(levels.back()),
                                         cfg.number("reference_e_max"),
                                         static_cast<std::size_t>(cfg.integer("reference_levels")));
  const double gamma = 2.0 * static_cast<double>(n) * alpha * alpha;
  const double t_total = std::max(options.total_lifetimes, options.fit_lifetimes) / gamma;
  const BathSeries probe = bath_evolve(finest, label, t_total, 0.0, 1);
  const std::size_t stride = std::max<std::size_t>(1, probe.times.size() / 1000);
  const BathSeries series = bath_evolve(finest, label, t_total, 0.0, stride);
  Csv ts({"time", "initial", "plus_family", "minus_family"});
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    ts.row({series.times[i], series.initial[i], series.plus_family[i], series.minus_family[i]});
  }

  Artifacts out;
  out.add("bath.csv", table);
  out.add("series.csv", ts);
  out.summary["rate_errors"] = errors;
  out.summary["branching_errors"] = branching_errors;
  out.summary["rate_error_monotone_decreasing"] = monotone;
  out.summary["spin_sum"] = spin;
  out.summary["expected_branching_plus"] = static_cast<double>(static_cast<std::int64_t>(n) + spin) / (2.0 * n);
  return out;
}

// ---- seq-bound ------------------------------------------------------------

Artifacts run_seq(const RunConfig& cfg) {
  std::vector<double> grid;
  if (cfg.has("epsilon")) {
    grid.push_back(cfg.number("epsilon"));
  } else {
    const auto steps = static_cast<std::size_t>(cfg.integer("epsilon_steps"));
    for (std::size_t i = 0; i < steps; ++i) grid.push_back(static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  const DensityMatrix up = DensityMatrix::pure(Ket::pauli_eigenstate(Axis::z, +1));
  Csv single({"epsilon", "bound", "p_plus", "p_minus"});
  Csv many({"epsilon", "delay", "p_plus", "p_minus", "bound", "violated"});
  double worst_saturation = 0.0;
  std::size_t single_violations = 0, many_violations = 0, many_rows = 0;
  const auto n = static_cast<std::size_t>(cfg.integer("n_copies"));
  for (double eps : grid) {
    const auto s = experiments::sequential_single_copy(eps, up);
    worst_saturation = std::max(worst_saturation, std::abs(s.contrast() - s.bound));
    single_violations += s.violated;
    single.row({eps, s.bound, s.p_plus, s.p_minus});
    for (double delay : cfg.numbers("delays")) {
      const auto r = experiments::sequential_many_copy(eps, n, cfg.number("alpha"), delay);
      many_violations += r.violated;
      ++many_rows;
      many.row({eps, delay, r.p_plus, r.p_minus, r.bound, r.violated ? 1.0 : 0.0});
    }
  }
  Artifacts out;
  out.add("seq_bound.csv", single);
  out.add("many_copy.csv", many);
  out.summary["max_saturation_error"] = worst_saturation;
  out.summary["single_copy_violations"] = single_violations;
  out.summary["many_copy_violations"] = many_violations;
  out.summary["many_copy_runs"] = many_rows;
  return out;
}

// ---- born-spectrum --------------------------------------------------------

std::map<int, double> parse_xi(const std::string& text) {
  std::map<int, double> xi;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("parameters.xi", "expected m:value pairs, got '" + item + "'");
    try {
      std::size_t used_m = 0, used_v = 0;
      const std::string ms = item.substr(0, colon), vs = item.substr(colon + 1);
      const int m = std::stoi(ms, &used_m);
      const double v = std::stod(vs, &used_v);
      if (used_m != ms.size() || used_v != vs.size()) throw std::invalid_argument("trailing characters");
      if (xi.count(m)) throw ConfigError("parameters.xi", "duplicate harmonic " + ms);
      xi[m] = v;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("parameters.xi", "cannot parse '" + item + "'");
    }
  }
  if (xi.empty()) throw ConfigError("parameters.xi", "needs at least one m:value pair");
  return xi;
}

void add_spectrum(Artifacts& out, const std::string& name, const experiments::Spectrum& s) {
  Csv csv({"omega", "re", "im", "abs"});
  for (std::size_t k = 0; k < s.frequencies.size(); ++k) {
    csv.row({s.frequencies[k], s.values[k].real(), s.values[k].imag(), std::abs(s.values[k])});
  }
  out.add(name, csv);
}

json peaks_json(const std::vector<experiments::Peak>& peaks) {
  json arr = json::array();
  for (const auto& p : peaks) arr.push_back({{"omega", p.frequency}, {"magnitude", p.magnitude}, {"re", p.value.real()}});
  return arr;
}

experiments::Window window_of(const RunConfig& cfg) {
  return cfg.text("window") == "hann" ? experiments::Window::hann : experiments::Window::rectangular;
}

Artifacts run_born_harmonics(const RunConfig& cfg) {
  std::map<int, double> xi = parse_xi(cfg.text("xi"));
  std::optional<experiments::HarmonicModel> model;
  try {
    model.emplace(cfg.number("omega"), xi, cfg.number("jitter_sigma"));
  } catch (const InvalidArgument& e) {
    throw ConfigError("parameters.xi", e.what());
  }
  const double omega = cfg.number("omega");
  const auto per = static_cast<std::size_t>(cfg.integer("samples_per_period"));
  const auto periods = static_cast<std::size_t>(cfg.integer("periods"));
  const double dt = std::numbers::pi / omega / static_cast<double>(per);
  std::vector<double> grid(per * periods);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i) * dt;
  const std::vector<double> signal = experiments::jittered_signal(*model, grid);
  const auto s = experiments::spectrum(signal, dt, window_of(cfg), static_cast<std::size_t>(cfg.integer("pad_factor")));
  const auto peaks = experiments::find_peaks(s, cfg.number("peak_floor"));

  // Largest |X| off the harmonic grid 2 m omega, relative to the maximum.
  double top = 0.0, stray = 0.0;
  for (const auto& v : s.values) top = std::max(top, std::abs(v));
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    const double harmonic = s.frequencies[k] / (2.0 * omega);
    if (std::abs(harmonic - std::round(harmonic)) > 1e-9) stray = std::max(stray, std::abs(s.values[k]) / top);
  }

  Csv series({"time", "signal"});
  for (std::size_t i = 0; i < grid.size(); ++i) series.row({grid[i], signal[i]});
  Artifacts out;
  out.add("series.csv", series);
  add_spectrum(out, "spectrum.csv", s);
  out.summary["peaks"] = peaks_json(peaks);
  out.summary["harmonic_amplitudes"] = experiments::harmonic_amplitudes(*model);
  out.summary["period_mean"] = experiments::period_mean(*model);
  out.summary["max_relative_off_harmonic"] = stray;
  out.summary["resolution"] = s.resolution();
  return out;
}

Artifacts run_born_rabi(const RunConfig& cfg) {
  const double dt = cfg.number("sample_dt");
  const auto n = static_cast<std::size_t>(std::llround(cfg.number("t_max") / dt));
  if (n < 16) throw ConfigError("parameters.t_max", "needs at least 16 samples (t_max / sample_dt >= 16)");
  std::vector<double> f1(n), f2(n), sum(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    f1[i] = std::exp(-t / 10.0) * std::cos(t);
    f2[i] = 0.1 * std::exp(-t / 5.0) * std::cos(2.0 * t);
    sum[i] = f1[i] + f2[i];
  }
  const auto pad = static_cast<std::size_t>(cfg.integer("pad_factor"));
  const auto w = window_of(cfg);
  const auto s = experiments::spectrum(sum, dt, w, pad);
  const auto s1 = experiments::spectrum(f1, dt, w, pad);
  const auto s2 = experiments::spectrum(f2, dt, w, pad);

  // Widths and positions of the single-copy terms on the absorptive part.
  const auto p1 = experiments::real_peak(s1, 0.5, 1.5);
  const auto p2 = experiments::real_peak(s2, 1.5, 2.5);
  const auto q1 = experiments::real_peak(s, 0.5, 1.5);
  const auto q2 = experiments::real_peak(s, 1.5, 2.5);

  auto lorentz = [](double amp, double gamma, double w0, double omega) {
    const std::complex<double> i(0.0, 1.0);
    return 0.5 * amp * (1.0 / (gamma - i * (omega - w0)) + 1.0 / (gamma - i * (omega + w0)));
  };
  auto closed = [&](double omega) { return (lorentz(1.0, 0.1, 1.0, omega) + lorentz(0.1, 0.2, 2.0, omega)).real(); };

  Csv series({"time", "signal"});
  for (std::size_t i = 0; i < n; ++i) series.row({static_cast<double>(i) * dt, sum[i]});
  Artifacts out;
  out.add("series.csv", series);
  add_spectrum(out, "spectrum.csv", s);
  out.summary["peaks"] = peaks_json(experiments::find_peaks(s, cfg.number("peak_floor")));
  out.summary["f1"] = {{"peak_omega", p1.frequency}, {"half_width", experiments::half_width(s1, p1)}};
  out.summary["f2"] = {{"peak_omega", p2.frequency}, {"half_width", experiments::half_width(s2, p2)}};
  out.summary["peak_ratio"] = q2.value.real() / q1.value.real();
  out.summary["closed_form_peak_ratio"] = closed(2.0) / closed(1.0);
  out.summary["resolution"] = s.resolution();
  return out;
}

// ---- sorkin ---------------------------------------------------------------

Artifacts run_sorkin(const RunConfig& cfg) {
  const double eps = cfg.number("epsilon");
  std::vector<std::array<Complex, 3>> triples;
  const std::string mode = cfg.text("amplitudes");
  if (mode == "uniform") {
    const double a = 1.0 / std::sqrt(3.0);
    triples.push_back({a, a, a});
  } else if (mode == "basis") {
    triples.push_back({1.0, 0.0, 0.0});
  } else {
    std::mt19937_64 rng(derive_stream_seed(cfg.seed, 0));
    const auto count = static_cast<std::size_t>(cfg.integer("n_random"));
    for (std::size_t i = 0; i < count; ++i) {
      std::array<Complex, 3> c;
      double norm = 0.0;
      for (auto& x : c) {
        x = Complex(gaussian(rng), gaussian(rng));
        norm += std::norm(x);
      }
      for (auto& x : c) x /= std::sqrt(norm);
      triples.push_back(c);
    }
  }
  Csv csv({"index", "c1_re", "c1_im", "c2_re", "c2_im", "c3_re", "c3_im", "single_copy", "two_copy", "closed_form"});
  double worst_single = 0.0, worst_two = 0.0;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const experiments::ThreeStateConfig config(triples[i], eps);
    const double one = experiments::sorkin_functional(config, 1);
    const double two = experiments::sorkin_functional(config, 2);
    const double closed = experiments::sorkin_closed_form(config);
    worst_single = std::max(worst_single, std::abs(one));
    worst_two = std::max(worst_two, std::abs(two - closed));
    const auto& c = triples[i];
    csv.row({static_cast<double>(i), c[0].real(), c[0].imag(), c[1].real(), c[1].imag(), c[2].real(), c[2].imag(),
             one, two, closed});
  }
  Artifacts out;
  out.add("sorkin.csv", csv);
  out.summary["samples"] = triples.size();
  out.summary["max_abs_single_copy"] = worst_single;
  out.summary["max_abs_two_copy_minus_closed_form"] = worst_two;
  return out;
}

Artifacts dispatch(const RunConfig& cfg, const RunOptions& options) {
  switch (cfg.experiment) {
    case Experiment::povm_frontier: return run_povm(cfg);
    case Experiment::collapse_evolve: return run_collapse_evolve(cfg);
    case Experiment::collapse_jump: return run_collapse_jump(cfg, options);
    case Experiment::bath_compare: return run_bath(cfg);
    case Experiment::seq_bound: return run_seq(cfg);
    case Experiment::born_spectrum:
      return cfg.text("source") == "rabi" ? run_born_rabi(cfg) : run_born_harmonics(cfg);
    case Experiment::sorkin: return run_sorkin(cfg);
  }
  throw std::logic_error("unhandled experiment");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

json RunManifest::to_json() const {
  json files_json = json::array();
  for (const auto& f : files) files_json.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return {{"config", config},          {"version", version},           {"started", started},
          {"finished", finished},      {"directory", directory.string()}, {"files", files_json}};
}

RunManifest run(const RunConfig& config, const RunOptions& options) {
  RunManifest manifest;
  manifest.config = serialize(config);
  manifest.version = MANYCOPIES_VERSION;
  manifest.started = utc_now();

  Artifacts artifacts = dispatch(config, options);
  artifacts.summary["experiment"] = to_string(config.experiment);
  artifacts.summary["seed"] = config.seed;
  artifacts.files.emplace_back("summary.json", artifacts.summary.dump(2) + "\n");

  manifest.directory = fs::path(config.output_dir) / (to_string(config.experiment) + "-" + config_digest(config).substr(0, 12));
  fs::create_directories(manifest.directory);
  for (const auto& [name, text] : artifacts.files) {
    const fs::path path = manifest.directory / name;
    write_file(path, text);
    manifest.files.push_back(OutputFile{name, sha256_file(path), fs::file_size(path)});
  }
  manifest.finished = utc_now();
  write_file(manifest.directory / "manifest.json", manifest.to_json().dump(2) + "\n");
  return manifest;
}

json error_json(const std::exception& e) {
  json err = {{"message", e.what()}};
  if (const auto* c = dynamic_cast<const ConfigError*>(&e)) {
    err["type"] = "config";
    err["field"] = c->field();
  } else if (const auto* cap = dynamic_cast<const CapExceeded*>(&e)) {
    err["type"] = "cap_exceeded";
    err["requested"] = cap->requested();
    err["cap"] = cap->cap();
  } else if (dynamic_cast<const IntegrationError*>(&e)) {
    err["type"] = "integration";
  } else if (dynamic_cast<const ConvergenceError*>(&e)) {
    err["type"] = "convergence";
  } else if (const auto* fv = dynamic_cast<const FrontierViolation*>(&e)) {
    err["type"] = "frontier_violation";
    err["value"] = fv->value();
  } else if (dynamic_cast<const DimensionMismatch*>(&e)) {
    err["type"] = "dimension_mismatch";
  } else if (dynamic_cast<const InvariantViolation*>(&e)) {
    err["type"] = "invariant_violation";
  } else if (dynamic_cast<const Error*>(&e)) {
    err["type"] = "invalid_argument";
  } else {
    err["type"] = "internal";
  }
  return {{"error", err}};
}

int cli_main(const std::vector<std::string>& args, std::size_t workers) {
  if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
    std::cout << "usage: manycopies <experiment> [--config file.json] [--set key=value ...] [--seed N] [--out dir]\n"
                 "       manycopies recipes\n\n"
                 "environment: MANYCOPIES_WORKERS sets the trajectory worker count\n\n"
              << parameter_help();
    return args.empty() ? 2 : 0;
  }
  if (args[0] == "recipes") {
    std::cout << list_recipes();
    return 0;
  }
  try {
    const RunConfig config = parse_args(args);
    RunOptions options;
    options.workers = workers;
    const RunManifest manifest = run(config, options);
    std::cout << manifest.to_json().dump(2) << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cout << error_json(e).dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << error_json(e).dump(2) << "\n";
    return 1;
  }
}

}  // namespace manycopies::cli
