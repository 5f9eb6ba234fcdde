#include "hybridlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hybridlab/error.hpp"
#include "hybridlab/phase_space.hpp"

namespace hybridlab::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// Configuration problems map to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

const std::map<std::string, Mode> kModes = {{"classical-classical", Mode::classical_classical},
                                            {"quantum-quantum", Mode::quantum_quantum},
                                            {"hybrid", Mode::hybrid}};
const std::map<std::string, Engine> kEngines = {
    {"moments", Engine::moments}, {"grid", Engine::grid}, {"both", Engine::both}};

ExactComplex exact_value(const std::string& text, const std::string& what) {
  try {
    return ExactComplex(parse_decimal(text));
  } catch (const InvalidArgument&) {
    throw ConfigError(what + ": expected a decimal number, got '" + text + "'");
  }
}

expr::ParameterBinding bindings(const std::string& k_text, const std::vector<std::string>& extra) {
  expr::ParameterBinding params;
  params.bind("k", exact_value(k_text, "--k"));
  for (const auto& item : extra) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--param expects name=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    try {
      params.bind(key, exact_value(item.substr(eq + 1), "--param " + key));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  return params;
}

std::string generator_column(Mode mode) { return mode == Mode::hybrid ? "K" : "H"; }

double relative_drift(const std::vector<double>& series) {
  if (series.empty()) return 0.0;
  const double ref = series.front();
  double worst = 0.0;
  for (double v : series) worst = std::max(worst, std::abs(v - ref));
  return ref != 0.0 ? worst / std::abs(ref) : worst;
}

void attach_envelope(EngineRun& run) {
  try {
    run.envelope = fit_envelope(run.table.values("t"), run.table.values("sqrt(<q^2>)"));
  } catch (const InsufficientData& e) {
    run.envelope_note = e.what();
  }
}

std::size_t step_count(double t_final, double dt) {
  const double ratio = t_final / dt;
  const auto n = static_cast<std::size_t>(std::llround(ratio));
  if (n == 0 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError("t-final must be a positive integer multiple of dt");
  }
  return n;
}

std::vector<OperatorPolynomial> lowered_observers(const RunConfig& config) {
  const auto params = bindings(config.k, {});
  std::vector<OperatorPolynomial> out;
  for (const auto& text : config.observers) out.push_back(expr::compile(text, params));
  return out;
}

std::string slug(const std::string& text) {
  std::string out;
  for (char c : text) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json config_json(const RunConfig& c) {
  return {{"mode", to_string(c.mode)},
          {"k", c.k},
          {"hamiltonian", c.hamiltonian},
          {"engine", to_string(c.engine)},
          {"grid", {{"points", c.points}, {"half_extent", c.half_extent}}},
          {"dt", c.dt},
          {"t_final", c.t_final},
          {"observers", c.observers},
          {"stride", c.stride},
          {"deterministic", c.deterministic},
          {"threads", effective_threads(c)}};
}

json engine_json(const EngineRun& run, const std::string& csv, Mode mode) {
  json j = {{"csv", csv},
            {"generator", generator_column(mode)},
            {"generator_relative_drift", run.generator_drift},
            {"seconds", run.seconds}};
  if (run.envelope) {
    j["envelope_sqrt_q2"] = io::to_json(*run.envelope);
  } else {
    j["envelope_sqrt_q2"] = nullptr;
    j["envelope_note"] = run.envelope_note;
  }
  return j;
}

void write_two_column(const fs::path& dir, const std::string& engine, const io::Table& table,
                      const std::vector<std::string>& observers, json& files) {
  for (std::size_t o = 0; o < observers.size(); ++o) {
    io::Table two{{"t", observers[o]}, {}};
    const std::size_t col = table.column(observers[o]);
    for (const auto& row : table.rows) two.rows.push_back({row[0], row[col]});
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "%02zu", o);
    const std::string file = engine + "_obs" + prefix + "_" + slug(observers[o]) + ".csv";
    io::write_atomic(dir / file, io::to_csv(two));
    files.push_back(file);
  }
}

void add_common_run_options(CLI::App& cmd, RunConfig& config) {
  cmd.add_option("--mode", config.mode, "classical-classical | quantum-quantum | hybrid")
      ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
  cmd.add_option("--k", config.k, "coupling constant (decimal)");
  cmd.add_option("--hamiltonian", config.hamiltonian, "total Hamiltonian, parameter k bound from --k");
}

void add_simulation_options(CLI::App& cmd, RunConfig& config) {
  add_common_run_options(cmd, config);
  cmd.add_option("--engine", config.engine, "moments | grid | both")
      ->transform(CLI::CheckedTransformer(kEngines, CLI::ignore_case));
  cmd.add_option("--n", config.points, "grid points per axis (power of two)");
  cmd.add_option("--L", config.half_extent, "grid half extent");
  cmd.add_option("--dt", config.dt, "time step");
  cmd.add_option("--t-final", config.t_final, "final time (integer multiple of dt)");
  cmd.add_option("--observer", config.observers, "observable expression (repeatable)");
  cmd.add_option("--out", config.output_dir, "output directory");
  cmd.add_option("--threads", config.threads, "FFT worker threads (capped by HYBRIDLAB_THREADS)");
  cmd.add_flag("--deterministic,!--parallel", config.deterministic, "single-threaded deterministic mode");
  cmd.add_option("--stride", config.stride, "grid sampling stride in steps");
  cmd.add_flag("--snapshots", config.snapshots, "write binary |psi|^2 marginal snapshots");
}

int cmd_derive(const std::string& koopmanian, const std::string& hamiltonian_text, const std::string& k,
               const std::vector<std::string>& params, std::ostream& out) {
  const auto binding = bindings(k, params);
  OperatorPolynomial generator;
  if (!hamiltonian_text.empty()) {
    generator = hybridize(expr::compile(hamiltonian_text, binding));
    out << "K = " << to_string(generator) << '\n';
  } else {
    generator = expr::compile(koopmanian, binding);
  }
  for (Generator g : kBasisOrder) {
    out << "d" << name(g) << "/dt = " << to_string(heisenberg_rhs(g, generator)) << '\n';
  }
  return 0;
}

int cmd_nogo(const std::string& k, std::ostream& out) {
  const OperatorPolynomial w = nogo_witness(exact_value(k, "--k"));
  if (w.is_zero()) {
    out << "witness = 0: OK\n";
  } else {
    out << "witness = " << to_string(w)
        << ": FAIL (-i*k != 0: no Koopmanian yields both [p,K_i] = -k*x and [y,K_i] = -k*q while [y,p] = 0)\n";
  }
  return 0;
}

GeneratorMatrix generator_matrix(const RunConfig& config) {
  const OperatorPolynomial h = hamiltonian(config);
  return config.mode == Mode::hybrid ? derive_generator(hybridize(h)) : derive_hamilton_generator(h);
}

int cmd_spectrum(const RunConfig& config, double tol, const std::string& json_path, std::ostream& out) {
  const GeneratorMatrix g = generator_matrix(config);
  const SpectrumReport report = classify_spectrum(g, tol);
  json j = io::to_json(report);
  j["mode"] = to_string(config.mode);
  j["k"] = config.k;
  json basis = json::array();
  for (Generator b : g.basis) basis.push_back(std::string(name(b)));
  j["basis"] = basis;
  std::vector<std::vector<double>> rows;
  for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
    rows.emplace_back(g.matrix.row(r).data(), g.matrix.row(r).data() + g.matrix.cols());
    for (Eigen::Index c = 0; c < g.matrix.cols(); ++c) rows.back()[static_cast<std::size_t>(c)] = g.matrix(r, c);
  }
  j["generator_matrix"] = rows;
  out << io::describe(report);
  if (json_path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    io::write_atomic(json_path, j.dump(2) + "\n");
    out << "spectrum written to " << json_path << '\n';
  }
  return 0;
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(config.output_dir);
  json report = {{"config", config_json(config)}};
  json files = json::array();
  json engines = json::object();

  if (config.engine != Engine::grid) {
    EngineRun run = run_moments(config);
    io::write_atomic(config.output_dir / "moments.csv", io::to_csv(run.table));
    files.push_back("moments.csv");
    write_two_column(config.output_dir, "moments", run.table, config.observers, files);
    engines["moments"] = engine_json(run, "moments.csv", config.mode);
    const SpectrumReport spectrum = classify_spectrum(generator_matrix(config));
    report["spectrum"] = io::to_json(spectrum);
    out << "moments: <" << generator_column(config.mode) << "> relative drift " << io::format_double(run.generator_drift);
    if (run.envelope) out << ", envelope degree of sqrt(<q^2>) = " << run.envelope->degree;
    out << '\n';
  }
  if (config.engine != Engine::moments) {
    EngineRun run = run_grid(config);
    io::write_atomic(config.output_dir / "grid.csv", io::to_csv(run.table));
    files.push_back("grid.csv");
    write_two_column(config.output_dir, "grid", run.table, config.observers, files);
    json g = engine_json(run, "grid.csv", config.mode);
    g["norm_drift"] = run.norm_drift;
    const DensityMatrix rho = reduced_quantum_density(*run.final_state);
    g["reduced_density"] = io::to_json(rho.validate());
    g["reduced_density"]["purity"] = rho.purity();
    engines["grid"] = g;

    json manifest = {{"grid", {{"axes", {"x", "y", "q"}}, {"points", config.points}, {"half_extent", config.half_extent}}},
                     {"dt", config.dt},
                     {"k", config.k},
                     {"t_final", config.t_final},
                     {"durations", {{"grid_seconds", run.seconds}}},
                     {"norm_drift", run.norm_drift}};
    io::write_atomic(config.output_dir / "manifest.json", manifest.dump(2) + "\n");
    files.push_back("manifest.json");
    if (config.snapshots) {
      const std::vector<std::pair<std::string, std::vector<Axis>>> cuts = {{"marginal_xy.bin", {Axis::x, Axis::y}},
                                                                           {"marginal_q.bin", {Axis::q}}};
      for (const auto& [file, axes] : cuts) {
        std::ostringstream bin;
        write_snapshot(bin, marginal_density(*run.final_state, axes));
        io::write_atomic(config.output_dir / file, bin.str());
        files.push_back(file);
      }
    }
    out << "grid: norm drift " << io::format_double(run.norm_drift) << ", <" << generator_column(config.mode)
        << "> relative drift " << io::format_double(run.generator_drift) << '\n';
  }
  report["engines"] = engines;
  report["files"] = files;
  report["wall_clock_seconds"] = seconds_since(start);
  io::write_atomic(config.output_dir / "report.json", report.dump(2) + "\n");
  out << "report written to " << (config.output_dir / "report.json").string() << '\n';
  return 0;
}

int cmd_compare(RunConfig config, std::ostream& out) {
  fs::create_directories(config.output_dir);
  auto moments = std::async(std::launch::async, [&] { return run_moments(config); });
  auto grid = std::async(effective_threads(config) > 1 ? std::launch::async : std::launch::deferred,
                         [&] { return run_grid(config); });
  const EngineRun m = moments.get();
  const EngineRun g = grid.get();

  std::vector<std::string> names = config.observers;
  names.push_back(generator_column(config.mode));
  json rows = json::array();
  out << "observable,max_abs_deviation\n";
  for (const auto& name_ : names) {
    const auto gv = g.table.values(name_);
    const auto gt = g.table.values("t");
    const auto mv = m.table.values(name_);
    double worst = 0.0;
    for (std::size_t j = 0; j < gv.size(); ++j) {
      const auto idx = static_cast<std::size_t>(std::llround(gt[j] / config.dt));
      worst = std::max(worst, std::abs(gv[j] - mv.at(idx)));
    }
    rows.push_back({{"observable", name_}, {"max_abs_deviation", worst}});
    out << name_ << ',' << io::format_double(worst) << '\n';
  }
  const json doc = {{"config", config_json(config)}, {"deviations", rows}, {"grid_norm_drift", g.norm_drift}};
  io::write_atomic(config.output_dir / "compare.json", doc.dump(2) + "\n");
  io::write_atomic(config.output_dir / "moments.csv", io::to_csv(m.table));
  io::write_atomic(config.output_dir / "grid.csv", io::to_csv(g.table));
  return 0;
}

int cmd_report(const std::vector<std::string>& runs, const fs::path& out_dir, std::ostream& out) {
  json summary = json::array();
  std::ostringstream md;
  md << "| run | mode | k | engine | generator drift | envelope degree | grid norm drift | reduced density |\n";
  md << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& dir : runs) {
    const json r = json::parse(io::read_file(fs::path(dir) / "report.json"));
    summary.push_back({{"run", dir}, {"report", r}});
    for (const auto& [engine, e] : r.at("engines").items()) {
      md << "| " << dir << " | " << r["config"]["mode"].get<std::string>() << " | " << r["config"]["k"].get<std::string>()
         << " | " << engine << " | " << io::format_double(e["generator_relative_drift"].get<double>()) << " | "
         << (e["envelope_sqrt_q2"].is_null() ? std::string("-") : std::to_string(e["envelope_sqrt_q2"]["degree"].get<int>()))
         << " | " << (e.contains("norm_drift") ? io::format_double(e["norm_drift"].get<double>()) : std::string("-"))
         << " | "
         << (e.contains("reduced_density") ? (e["reduced_density"]["passed"].get<bool>() ? "pass" : "fail") : "-")
         << " |\n";
    }
  }
  fs::create_directories(out_dir);
  io::write_atomic(out_dir / "summary.json", summary.dump(2) + "\n");
  io::write_atomic(out_dir / "summary.md", md.str());
  out << md.str();
  return 0;
}

}  // namespace

std::string to_string(Mode m) {
  for (const auto& [k, v] : kModes) {
    if (v == m) return k;
  }
  return "?";
}

std::string to_string(Engine e) {
  for (const auto& [k, v] : kEngines) {
    if (v == e) return k;
  }
  return "?";
}

unsigned effective_threads(const RunConfig& config) {
  if (config.deterministic) return 1;
  unsigned n = std::max(1U, config.threads);
  if (const char* cap = std::getenv("HYBRIDLAB_THREADS")) {
    const long v = std::strtol(cap, nullptr, 10);
    if (v > 0) n = std::min(n, static_cast<unsigned>(v));
  }
  return n;
}

OperatorPolynomial hamiltonian(const RunConfig& config) {
  return expr::compile(config.hamiltonian, bindings(config.k, {}));
}

OperatorPolynomial conserved_generator(const RunConfig& config) {
  const OperatorPolynomial h = hamiltonian(config);
  return config.mode == Mode::hybrid ? hybridize(h) : h;
}

void validate(const RunConfig& config) {
  if (!(config.dt > 0.0)) throw ConfigError("dt must be positive");
  step_count(config.t_final, config.dt);
  const OperatorPolynomial h = hamiltonian(config);
  if (h.has_shift()) throw ConfigError("the Hamiltonian must not contain p_x or p_y");
  if (h.degree() > 2) throw ConfigError("the Hamiltonian must be at most quadratic");
  if (config.engine != Engine::moments) {
    if (config.mode != Mode::hybrid) throw ConfigError("the grid engine runs the hybrid mode only");
    GridSpec::hybrid(config.points, config.half_extent);
    if (config.stride == 0) throw ConfigError("stride must be positive");
  }
  const auto observers = lowered_observers(config);
  for (std::size_t o = 0; o < observers.size(); ++o) {
    if (observers[o].degree() > 2) throw ConfigError("observer '" + config.observers[o] + "' has degree above 2");
    if (config.mode != Mode::hybrid && observers[o].has_shift()) {
      throw ConfigError("observer '" + config.observers[o] + "' uses p_x/p_y outside the hybrid mode");
    }
  }
  if (config.mode != Mode::hybrid && (h.uses(Generator::p_x) || h.uses(Generator::p_y))) {
    throw ConfigError("classical Hamiltonians cannot contain p_x or p_y");
  }
}

EngineRun run_moments(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const OperatorPolynomial gen = conserved_generator(config);
  const GeneratorMatrix g = config.mode == Mode::hybrid ? derive_generator(gen) : derive_hamilton_generator(gen);
  const MomentState s0 = default_moment_state(g.basis);
  const auto observers = lowered_observers(config);
  const std::size_t steps = step_count(config.t_final, config.dt);

  EngineRun run;
  run.table.columns = {"t"};
  for (const auto& o : config.observers) run.table.columns.push_back(o);
  run.table.columns.push_back(generator_column(config.mode));
  run.table.columns.push_back("sqrt(<q^2>)");
  for (std::size_t j = 0; j <= steps; ++j) {
    const double t = static_cast<double>(j) * config.dt;
    const MomentState s = propagate_moments(g, s0, t);
    std::vector<double> row{t};
    for (const auto& o : observers) row.push_back(quadratic_expectation(o, s));
    row.push_back(quadratic_expectation(gen, s));
    row.push_back(std::sqrt(s.second_of(Generator::q, Generator::q)));
    run.table.rows.push_back(std::move(row));
  }
  run.generator_drift = relative_drift(run.table.values(generator_column(config.mode)));
  attach_envelope(run);
  run.seconds = seconds_since(start);
  return run;
}

EngineRun run_grid(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.mode != Mode::hybrid) throw ConfigError("the grid engine runs the hybrid mode only");
  const OperatorPolynomial k_op = conserved_generator(config);
  const GridSpec spec = GridSpec::hybrid(config.points, config.half_extent);
  const std::vector<double> means(3, 0.0);
  const std::vector<double> widths(3, 1.0 / std::numbers::sqrt2);
  const GridState initial = gaussian_state(spec, means, widths);
  const PropagatorPlan plan = compile_splitting(k_op, spec, config.dt);

  std::vector<OperatorPolynomial> observers = lowered_observers(config);
  observers.push_back(k_op);
  observers.push_back(OperatorPolynomial::term(Monomial::of(Generator::q, 2), ExactComplex(1)));
  EvolveOptions opts;
  opts.stride = config.stride;
  opts.threads = effective_threads(config);
  const EvolutionResult result = evolve(initial, plan, config.t_final, observers, opts);

  EngineRun run;
  run.table.columns = {"t"};
  for (const auto& o : config.observers) run.table.columns.push_back(o);
  run.table.columns.push_back(generator_column(config.mode));
  run.table.columns.push_back("sqrt(<q^2>)");
  run.table.columns.push_back("norm");
  const std::size_t n_obs = config.observers.size();
  for (std::size_t j = 0; j < result.times.size(); ++j) {
    std::vector<double> row{result.times[j]};
    for (std::size_t o = 0; o <= n_obs; ++o) row.push_back(result.series[o][j]);
    row.push_back(std::sqrt(result.series[n_obs + 1][j]));
    row.push_back(result.norms[j]);
    run.table.rows.push_back(std::move(row));
  }
  run.generator_drift = relative_drift(run.table.values(generator_column(config.mode)));
  const auto norms = run.table.values("norm");
  for (double n : norms) run.norm_drift = std::max(run.norm_drift, std::abs(n - norms.front()));
  attach_envelope(run);
  run.final_state = result.final_state;
  run.seconds = seconds_since(start);
  return run;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hybridlab: hybrid classical-quantum dynamics laboratory", "hybridlab"};
  app.set_config("--config", "", "key = value file with [subcommand] sections; flags override it");
  app.require_subcommand(1);

  std::string koopmanian;
  std::string derive_h;
  std::string derive_k = "0";
  std::vector<std::string> derive_params;
  auto* derive = app.add_subcommand("derive", "print the Heisenberg equations of a Koopmanian")->configurable();
  auto* opt_k = derive->add_option("--koopmanian", koopmanian, "Koopmanian expression");
  auto* opt_h = derive->add_option("--hamiltonian", derive_h, "total Hamiltonian, hybridized before deriving");
  opt_k->excludes(opt_h);
  derive->add_option("--k", derive_k, "value bound to parameter k");
  derive->add_option("--param", derive_params, "name=value parameter binding (repeatable)");

  std::string nogo_k = "0.2";
  auto* nogo = app.add_subcommand("nogo", "Jacobi no-go certificate for the coupling k")->configurable();
  nogo->add_option("--k", nogo_k, "coupling constant");

  RunConfig spectrum_config;
  double tol = kDefaultSpectralTolerance;
  std::string spectrum_json;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and Jordan structure of the dynamics")->configurable();
  add_common_run_options(*spectrum, spectrum_config);
  spectrum->add_option("--tol", tol, "eigenvalue clustering tolerance");
  spectrum->add_option("--out", spectrum_json, "write the JSON report to this file instead of stdout");

  RunConfig sim_config;
  auto* simulate = app.add_subcommand("simulate", "run the moment and/or grid engine")->configurable();
  add_simulation_options(*simulate, sim_config);

  RunConfig cmp_config;
  cmp_config.engine = Engine::both;
  cmp_config.output_dir = "hybridlab-compare";
  auto* compare = app.add_subcommand("compare", "run both engines and tabulate their deviation")->configurable();
  add_simulation_options(*compare, cmp_config);

  std::vector<std::string> report_runs;
  std::string report_out = "hybridlab-report";
  auto* report = app.add_subcommand("report", "aggregate run directories")->configurable();
  report->add_option("--runs", report_runs, "run directories containing report.json")->required();
  report->add_option("--out", report_out, "output directory");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  // Validation stage: every failure here is a configuration error.
  try {
    if (*derive && koopmanian.empty() && derive_h.empty()) throw ConfigError("derive needs --koopmanian or --hamiltonian");
    if (*nogo) exact_value(nogo_k, "--k");
    if (*spectrum) {
      if (!(tol > 0.0)) throw ConfigError("--tol must be positive");
      generator_matrix(spectrum_config);
    }
    if (*simulate) validate(sim_config);
    if (*compare) {
      if (cmp_config.mode != Mode::hybrid) throw ConfigError("compare runs the hybrid mode only");
      cmp_config.engine = Engine::both;
      validate(cmp_config);
    }
    if (*derive) {
      std::ostringstream tmp;
      cmd_derive(koopmanian, derive_h, derive_k, derive_params, tmp);
    }
  } catch (const expr::ParseError& e) {
    err << "error: expression: " << e.what() << '\n';
    return 2;
  } catch (const expr::LowerError& e) {
    err << "error: expression: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*derive) return cmd_derive(koopmanian, derive_h, derive_k, derive_params, out);
    if (*nogo) return cmd_nogo(nogo_k, out);
    if (*spectrum) return cmd_spectrum(spectrum_config, tol, spectrum_json, out);
    if (*simulate) return cmd_simulate(sim_config, out);
    if (*compare) return cmd_compare(cmp_config, out);
    if (*report) return cmd_report(report_runs, report_out, out);
  } catch (const BoxOverflow& e) {
    err << "error: box overflow: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace hybridlab::cli
