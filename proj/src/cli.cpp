#include "padicq/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "padicq/acceptance.hpp"
#include "padicq/dynamics.hpp"
#include "padicq/error.hpp"
#include "padicq/evolution.hpp"
#include "padicq/measurement.hpp"
#include "padicq/operators.hpp"
#include "padicq/transform.hpp"

namespace padicq::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string trim(std::string s) {
  const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) return s.substr(1, s.size() - 2);
  return s;
}

struct GridOpts {
  std::uint32_t p = 2;
  int N = 1;
  int M = 1;
  int d = 1;
  std::size_t cell_limit = kDefaultCellLimit;

  GridSpec make() const { return GridSpec::make(BaseConfig(p, std::max(1, N + M)), N, M, d, cell_limit); }
};

void add_grid(CLI::App* sub, GridOpts& g) {
  sub->add_option("--p", g.p, "prime base")->capture_default_str();
  sub->add_option("--N", g.N, "support exponent: domain B_{p^N}(0)")->capture_default_str();
  sub->add_option("--M", g.M, "resolution exponent: cells of radius p^-M")->capture_default_str();
  sub->add_option("--d", g.d, "number of axes")->capture_default_str();
  sub->add_option("--cell-limit", g.cell_limit, "maximum number of cells")->capture_default_str();
}

struct StateOpts {
  std::string preset = "uniform";
  std::string file;
  std::int64_t xi = 1;
  int xi_valuation = 0;
};

void add_state(CLI::App* sub, StateOpts& s) {
  sub->add_option("--state", s.preset, "initial state: uniform|omega|plane|random|file")
      ->check(CLI::IsMember({"uniform", "omega", "plane", "random", "file"}))
      ->capture_default_str();
  sub->add_option("--state-file", s.file, "state file for --state file");
  sub->add_option("--xi", s.xi, "plane wave frequency: integer unit part")->capture_default_str();
  sub->add_option("--xi-valuation", s.xi_valuation, "plane wave frequency: xi = p^v * unit")->capture_default_str();
}

StateVector read_state_file(const std::string& path, std::size_t limit) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open state file '" + path + "'");
  try {
    return read_state(in, limit);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

StateVector make_state(const StateOpts& s, const GridSpec& g, PlanckConstant h, std::uint64_t seed) {
  if (s.preset == "file") {
    if (s.file.empty()) throw Error(ErrorKind::invalid_input, "--state file needs --state-file");
    auto phi = read_state_file(s.file, g.cell_limit());
    require_same_grid(phi.grid, g);
    return phi;
  }
  if (s.preset == "uniform") return uniform_state(g);
  if (s.preset == "omega") {
    const std::vector<Ball> balls(static_cast<std::size_t>(g.dim()), Ball{PadicNumber::zero(g.config()), 0});
    return normalized(indicator_state(g, balls));
  }
  if (s.preset == "plane") {
    const auto unit = PadicNumber::from_integer(s.xi, g.config());
    const auto scale = PadicNumber::from_digits(g.config(), s.xi_valuation, std::vector<std::uint32_t>{1});
    const std::vector<PadicNumber> xi(static_cast<std::size_t>(g.dim()), unit * scale);
    return normalized(plane_wave(xi, g, h));
  }
  Rng rng(derive_seed(seed, "state.random"));
  std::vector<cplx> c(g.total_cells());
  for (auto& z : c) z = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
  return normalized(StateVector(g, std::move(c), "random"));
}

std::vector<double> load_potential(const std::string& preset, const std::string& file, const GridSpec& g) {
  switch (parse_potential(preset)) {
    case PotentialPreset::none: return std::vector<double>(g.total_cells(), 0.0);
    case PotentialPreset::abs2: return potential_abs2(g);
    case PotentialPreset::custom: break;
  }
  if (file.empty()) throw Error(ErrorKind::invalid_input, "--potential custom needs --potential-file");
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open potential file '" + file + "'");
  // One value per cell in cell order; blank lines and '#' comments ignored.
  std::vector<double> v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    std::size_t used = 0;
    try {
      v.push_back(std::stod(line, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != line.size()) throw Error(ErrorKind::invalid_input, file + ": line " + std::to_string(lineno) + ": not a number");
  }
  if (v.size() != g.total_cells()) {
    throw Error(ErrorKind::invalid_input, file + ": expected " + std::to_string(g.total_cells()) + " values, got " +
                                              std::to_string(v.size()));
  }
  return v;
}

OperatorMatrix make_observable(const std::string& name, const GridSpec& g, PlanckConstant h, double alpha,
                               const std::vector<double>& V) {
  if (name == "Mq") return position_magnitude(g);
  if (name == "Mxi") return motivation_magnitude(g, h);
  if (name == "A") return neuron_activation(g);
  if (name == "D") return vladimirov_multiplier(g, alpha);
  if (name == "H") return hamiltonian(g, h, V);
  throw Error(ErrorKind::invalid_input, "unknown observable '" + name + "' (Mq|Mxi|A|D|H)");
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::invalid_input, "cannot write '" + path.string() + "'");
  os << std::setprecision(17);
  return os;
}

std::string cell_digits(const GridSpec& g, std::size_t flat) {
  std::ostringstream t;
  const auto idx = g.axis_indices(flat);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (a) t << '|';
    const auto digits = g.axis_digits(idx[a]);
    for (std::size_t k = 0; k < digits.size(); ++k) t << (k ? " " : "") << digits[k];
  }
  return t.str();
}

struct Options {
  std::string out_dir = "padicq_out";
  std::uint64_t seed = 0;

  GridOpts grid;
  double alpha = 1.0;
  int h_exp = 0;
  std::string potential = "none";
  std::string potential_file;
  std::string op = "D";
  double tau = kDefaultDegeneracyTol;

  StateOpts state;
  double t0 = 0.0;
  double t1 = 10.0;
  std::size_t samples = 101;
  std::string sign = "positive";

  std::string input;
  std::string output;
  std::string method = "fast";
  bool inverse = false;

  std::string observable = "Mq";
  std::size_t trials = 10000;

  std::string family = "Mq,A,Mxi";
  std::size_t subset_size = 2;
  std::size_t steps = 20;
  std::size_t memory_depth = 1;
  double decay = 0.5;

  int K = 32;
  int n = 2;
  std::string x0 = "3";
  std::string fixed_point = "1";
  int noise_depth = 0;
  double noise_rate = 0.5;

  double window_ms = 100.0;
  bool quick = false;
};

// --- subcommands ------------------------------------------------------------

int cmd_spectrum(const Options& o, std::ostream& out) {
  const auto g = o.grid.make();
  const PlanckConstant h{o.h_exp};
  const auto V = load_potential(o.potential, o.potential_file, g);
  const auto op = make_observable(o.op, g, h, o.alpha, V);
  const auto spec = spectrum(op, o.tau);

  const fs::path dir(o.out_dir);
  auto csv = open_out(dir / "spectrum.csv");
  csv << "eigenvalue,multiplicity\n";
  for (const auto& row : degeneracy_report(spec)) csv << row.eigenvalue << ',' << row.multiplicity << '\n';

  json report;
  report["operator"] = op.label;
  report["cells"] = g.total_cells();
  report["levels"] = spec.groups.size();
  report["tau_deg"] = spec.tolerance;
  report["max_residual"] = spec.max_residual;
  report["orthonormality_defect"] = spec.orthonormality_defect;
  report["hermitian_defect"] = op.hermitian_defect();
  auto js = open_out(dir / "spectrum.json");
  js << report.dump(2) << '\n';
  out << "levels: " << spec.groups.size() << "  residual: " << spec.max_residual << '\n';
  return kOk;
}

int cmd_transform(const Options& o, std::ostream& out) {
  if (o.input.empty()) throw Error(ErrorKind::invalid_input, "transform needs --in");
  const auto phi = read_state_file(o.input, o.grid.cell_limit);
  const auto method = o.method == "dense" ? FourierMethod::dense : FourierMethod::fast;
  const auto res = o.inverse ? inverse_fourier(phi, method) : fourier(phi, method);
  const fs::path path = o.output.empty() ? fs::path(o.out_dir) / "transformed.csv" : fs::path(o.output);
  auto os = open_out(path);
  write_state(os, res);
  out << "wrote " << path.string() << "  norm: " << std::sqrt(norm2(res)) << '\n';
  return kOk;
}

int cmd_evolve(const Options& o, std::ostream& out) {
  const auto g = o.grid.make();
  const PlanckConstant h{o.h_exp};
  const auto H = hamiltonian(g, h, load_potential(o.potential, o.potential_file, g));
  const auto phi0 = make_state(o.state, g, h, o.seed);
  const auto times = uniform_times(o.t0, o.t1, o.samples);
  const auto run = evolve(phi0, H, h, times, o.sign == "conventional" ? PhaseSign::conventional : PhaseSign::positive);
  const auto cm = times.size() >= 2 ? consciousness_measure(run) : std::vector<double>(times.size(), 0.0);
  const auto mq = position_magnitude(g);
  const auto mxi = motivation_magnitude_multiplier(g, h);

  const fs::path dir(o.out_dir);
  auto csv = open_out(dir / "evolution.csv");
  csv << "t,norm,energy,consciousness,mean_Mq,mean_Mxi\n";
  auto pcsv = open_out(dir / "probabilities.csv");
  pcsv << "t,cell_digits,P\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto& s = run.states[k];
    csv << times[k] << ',' << run.norms[k] << ',' << run.energies[k] << ',' << cm[k] << ',' << average(mq, s) << ','
        << average(mxi, s) << '\n';
    const auto P = s.probabilities();
    for (std::size_t i = 0; i < P.size(); ++i) pcsv << times[k] << ',' << cell_digits(g, i) << ',' << P[i] << '\n';
  }
  double drift = 0.0;
  for (const double n : run.norms) drift = std::max(drift, std::abs(n - 1.0));
  out << "samples: " << times.size() << "  max norm drift: " << drift << '\n';
  return kOk;
}

int cmd_measure(const Options& o, std::ostream& out) {
  const auto g = o.grid.make();
  const PlanckConstant h{o.h_exp};
  const auto V = load_potential(o.potential, o.potential_file, g);
  const auto obs = Observable::make(make_observable(o.observable, g, h, o.alpha, V), o.tau);
  const auto phi = make_state(o.state, g, h, o.seed);
  const auto born = born_distribution(phi, obs.spectral);
  Rng rng(derive_seed(o.seed, "measure"));
  std::vector<std::size_t> hist(born.size(), 0);
  for (std::size_t t = 0; t < o.trials; ++t) ++hist[projective_measure(phi, obs.spectral, rng).group];

  auto csv = open_out(fs::path(o.out_dir) / "histogram.csv");
  csv << "eigenvalue,born_probability,count,frequency\n";
  for (std::size_t k = 0; k < born.size(); ++k) {
    csv << obs.spectral.groups[k].eigenvalue << ',' << born[k] << ',' << hist[k] << ','
        << (o.trials ? static_cast<double>(hist[k]) / static_cast<double>(o.trials) : 0.0) << '\n';
  }
  out << "levels: " << born.size() << "  trials: " << o.trials << '\n';
  return kOk;
}

int cmd_rds(const Options& o, std::ostream& out) {
  const auto g = o.grid.make();
  const PlanckConstant h{o.h_exp};
  const auto V = load_potential(o.potential, o.potential_file, g);
  std::vector<Observable> family;
  std::istringstream names(o.family);
  for (std::string name; std::getline(names, name, ',');) {
    family.push_back(Observable::make(make_observable(trim(name), g, h, o.alpha, V), o.tau));
  }
  RdsConfig cfg;
  cfg.subset_size = o.subset_size;
  cfg.memory_depth = o.memory_depth;
  cfg.decay = o.decay;
  cfg.seed = o.seed;
  const auto records = rds_stream(make_state(o.state, g, h, o.seed), family, cfg, o.steps);
  auto os = open_out(fs::path(o.out_dir) / "records.jsonl");
  write_records_jsonl(os, records);
  out << "records: " << records.size() << '\n';
  return kOk;
}

PadicNumber parse_point(const std::string& text, const BaseConfig& cfg) {
  if (text.find('^') != std::string::npos) {
    const auto x = PadicNumber::parse(text);
    if (x.config().p() != cfg.p()) throw Error(ErrorKind::invalid_input, "point '" + text + "' uses a different prime");
    return x.is_zero() ? PadicNumber::zero(cfg) : PadicNumber::from_digits(cfg, x.valuation(), x.digits(), x.precision());
  }
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw Error(ErrorKind::invalid_input, "point '" + text + "' is neither an integer nor 'p^v * (digits)_p'");
  }
  return PadicNumber::from_integer(v, cfg);
}

int cmd_dynamics(const Options& o, std::ostream& out) {
  const BaseConfig cfg(o.grid.p, o.K);
  DynSpec spec{cfg, o.n, parse_point(o.x0, cfg), o.steps, parse_point(o.fixed_point, cfg)};
  OrbitReport report;
  StabilityVerdict verdict{true, "no noise"};
  if (o.noise_depth > 0) {
    auto r = perturbed_iterate(spec, NoiseSpec{o.noise_depth, o.noise_rate, o.seed});
    report = std::move(r.report);
    verdict = r.verdict;
  } else {
    report = iterate(spec);
  }

  const fs::path dir(o.out_dir);
  auto csv = open_out(dir / "orbit.csv");
  csv << "step,distance_exponent,digits\n";
  for (std::size_t k = 0; k < report.points.size(); ++k) {
    const auto& v = report.distance_valuations[k];
    csv << k << ',' << (v ? std::to_string(-*v) : std::string("-inf")) << ',' << report.points[k].to_string() << '\n';
  }
  json summary;
  summary["classification"] = to_string(report.classification);
  summary["observed"] = to_string(report.observed);
  summary["steps"] = report.points.size() - 1;
  summary["precision_exhausted"] = report.precision_exhausted;
  summary["perturbed_steps"] = report.perturbed_steps;
  summary["stable"] = verdict.stable;
  summary["verdict"] = verdict.detail;
  auto js = open_out(dir / "orbit.json");
  js << summary.dump(2) << '\n';
  out << "fixed point: " << to_string(report.classification) << "  observed: " << to_string(report.observed)
      << (report.precision_exhausted ? "  (precision exhausted)" : "") << '\n';
  return kOk;
}

int cmd_ingest(const Options& o, std::ostream& out) {
  if (o.input.empty()) throw Error(ErrorKind::invalid_input, "ingest needs a spike CSV file");
  std::ifstream in(o.input);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open '" + o.input + "'");
  std::vector<SpikeRecord> records;
  try {
    records = read_spike_csv(in);
  } catch (const Error& e) {
    throw Error(e.kind(), o.input + ": " + e.what());
  }
  if (records.empty()) throw Error(ErrorKind::invalid_input, o.input + ": no spike records");
  const auto trains = spike_trains(records, o.window_ms);
  const int L = static_cast<int>(trains.front().counts.size());
  // Mental states are L-digit p-adic integers: the grid Z_p / p^L Z_p.
  const auto g = GridSpec::make(BaseConfig(o.grid.p, L), 0, L, 1, o.grid.cell_limit);

  std::vector<double> counts(g.total_cells(), 0.0);
  const fs::path dir(o.out_dir);
  auto states = open_out(dir / "mental_states.csv");
  states << "window,state,cell_digits\n";
  std::size_t w = 0;
  for (const auto& t : trains) {
    const auto x = encode_spike_train(t, g.config());
    const auto cell = g.axis_cell_of(x);
    counts[cell] += 1.0;
    states << w++ << ',' << x.to_string() << ',' << cell_digits(g, cell) << '\n';
  }
  auto phi = from_empirical(g, counts);
  phi.label = fs::path(o.input).filename().string();
  auto sf = open_out(dir / "state.csv");
  write_state(sf, phi);

  json summary;
  summary["p"] = g.p();
  summary["neurons"] = L;
  summary["windows"] = trains.size();
  summary["window_ms"] = o.window_ms;
  summary["distinct_states"] = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; });
  summary["entropy"] = entropy(g, phi.probabilities());
  summary["mean_A"] = average(neuron_activation(g), phi);
  auto js = open_out(dir / "summary.json");
  js << summary.dump(2) << '\n';
  out << "windows: " << trains.size() << "  entropy: " << summary["entropy"].get<double>() << '\n';
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto results = acceptance::run_suite(o.quick);
  acceptance::print_table(out, results);
  const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  out << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
  return all ? kOk : kFailed;
}

// --- config files ------------------------------------------------------------

void write_resolved(const CLI::App& sub, std::ostream& echo, const fs::path& dir, bool to_disk) {
  std::ostringstream cfg;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    const auto& name = opt->get_lnames().front();
    std::string value;
    if (opt->count() > 0) {
      const auto res = opt->results();
      value = res.empty() ? "true" : res.back();
      if (opt->get_type_size() == 0 && res.size() == 1 && res.back().empty()) value = "true";
    } else {
      value = opt->get_type_size() == 0 ? "false" : opt->get_default_str();
    }
    cfg << name << " = " << value << '\n';
  }
  echo << "# resolved config: " << sub.get_name() << '\n' << cfg.str();
  if (to_disk) {
    fs::create_directories(dir);
    std::ofstream os(dir / "config.ini");
    os << "# padicq " << sub.get_name() << '\n' << cfg.str();
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_flat_config(std::istream& is) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') continue;  // section headers are tolerated and ignored
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::invalid_input, "config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::invalid_input, "config line " + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), unquote(trim(line.substr(eq + 1))));
  }
  return out;
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"p-adic mental space toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.footer("Every subcommand also accepts --config FILE with flat 'key = value' lines;\n"
             "keys are option names without dashes and flags given later override them.");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "master seed")->capture_default_str();
  };
  auto spectral = [&](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha, "order of D^alpha")->capture_default_str();
    sub->add_option("--h-exp", o.h_exp, "Planck constant h = p^-m")->capture_default_str();
    sub->add_option("--potential", o.potential, "none|abs2|custom")->capture_default_str();
    sub->add_option("--potential-file", o.potential_file, "one value per cell for --potential custom");
    sub->add_option("--tau", o.tau, "relative degeneracy tolerance")->capture_default_str();
  };

  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues and degeneracies of an observable");
  add_grid(spectrum_cmd, o.grid);
  spectral(spectrum_cmd);
  spectrum_cmd->add_option("--operator", o.op, "D|H|Mq|Mxi|A")->capture_default_str();
  common(spectrum_cmd);

  auto* transform_cmd = app.add_subcommand("transform", "Fourier transform of a state file");
  transform_cmd->add_option("--in", o.input, "input state file")->required();
  transform_cmd->add_option("--output", o.output, "output state file (default <out>/transformed.csv)");
  transform_cmd->add_option("--method", o.method, "dense|fast")->check(CLI::IsMember({"dense", "fast"}))->capture_default_str();
  transform_cmd->add_flag("--inverse", o.inverse, "apply the inverse transform");
  transform_cmd->add_option("--cell-limit", o.grid.cell_limit, "maximum number of cells")->capture_default_str();
  common(transform_cmd);

  auto* evolve_cmd = app.add_subcommand("evolve", "Schroedinger evolution under h^2 D^2 + V");
  add_grid(evolve_cmd, o.grid);
  spectral(evolve_cmd);
  add_state(evolve_cmd, o.state);
  evolve_cmd->add_option("--t0", o.t0)->capture_default_str();
  evolve_cmd->add_option("--t1", o.t1)->capture_default_str();
  evolve_cmd->add_option("--samples", o.samples)->capture_default_str();
  evolve_cmd->add_option("--sign", o.sign, "positive|conventional")->check(CLI::IsMember({"positive", "conventional"}))->capture_default_str();
  common(evolve_cmd);

  auto* measure_cmd = app.add_subcommand("measure", "repeated projective measurement");
  add_grid(measure_cmd, o.grid);
  spectral(measure_cmd);
  add_state(measure_cmd, o.state);
  measure_cmd->add_option("--observable", o.observable, "Mq|Mxi|A|D|H")->capture_default_str();
  measure_cmd->add_option("--trials", o.trials)->capture_default_str();
  common(measure_cmd);

  auto* rds_cmd = app.add_subcommand("rds", "random self-measurement stream");
  add_grid(rds_cmd, o.grid);
  spectral(rds_cmd);
  add_state(rds_cmd, o.state);
  rds_cmd->add_option("--family", o.family, "comma-separated observables")->capture_default_str();
  rds_cmd->add_option("--subset-size", o.subset_size)->capture_default_str();
  rds_cmd->add_option("--steps", o.steps)->capture_default_str();
  rds_cmd->add_option("--memory-depth", o.memory_depth)->capture_default_str();
  rds_cmd->add_option("--decay", o.decay)->capture_default_str();
  common(rds_cmd);

  auto* dynamics_cmd = app.add_subcommand("dynamics", "orbits of x -> x^n on Z_p");
  dynamics_cmd->add_option("--p", o.grid.p)->capture_default_str();
  dynamics_cmd->add_option("--K", o.K, "digit precision")->capture_default_str();
  dynamics_cmd->add_option("--n", o.n, "exponent")->capture_default_str();
  dynamics_cmd->add_option("--x0", o.x0, "integer or 'p^v * (d0 d1 ...)_p'")->capture_default_str();
  dynamics_cmd->add_option("--fixed-point", o.fixed_point)->capture_default_str();
  dynamics_cmd->add_option("--steps", o.steps)->capture_default_str();
  dynamics_cmd->add_option("--noise-depth", o.noise_depth, "flip digits at positions >= depth (0 = off)")->capture_default_str();
  dynamics_cmd->add_option("--noise-rate", o.noise_rate)->capture_default_str();
  common(dynamics_cmd);

  auto* ingest_cmd = app.add_subcommand("ingest", "spike CSV to an empirical mental state");
  ingest_cmd->add_option("csv,--csv", o.input, "neuron_index,window_index,count")->required();
  ingest_cmd->add_option("--p", o.grid.p)->capture_default_str();
  ingest_cmd->add_option("--window-ms", o.window_ms, "window length (metadata)")->capture_default_str();
  ingest_cmd->add_option("--cell-limit", o.grid.cell_limit)->capture_default_str();
  common(ingest_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
  verify_cmd->add_flag("--quick", o.quick, "closed-form checks only");
  verify_cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();

  std::vector<std::string> args = args_in;
  try {
    // --config FILE expands to --key=value tokens right after the subcommand,
    // so explicit flags that follow take precedence.
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      std::size_t erase = 0;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
        erase = 2;
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
        erase = 1;
      } else {
        continue;
      }
      if (args.empty()) break;
      CLI::App* sub = nullptr;
      for (auto* s : app.get_subcommands({})) {
        if (s->get_name() == args[0]) sub = s;
      }
      if (!sub) throw Error(ErrorKind::invalid_input, "--config must follow a subcommand");
      std::ifstream in(path);
      if (!in) throw Error(ErrorKind::invalid_input, "cannot open config file '" + path + "'");
      std::vector<std::string> tokens;
      for (const auto& [key, value] : read_flat_config(in)) {
        if (key == "config" || sub->get_option_no_throw("--" + key) == nullptr) {
          throw Error(ErrorKind::invalid_input, "config key '" + key + "' is not an option of '" + sub->get_name() + "'");
        }
        tokens.push_back("--" + key + "=" + value);
      }
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + erase));
      args.insert(args.begin() + 1, tokens.begin(), tokens.end());
      i = 0;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    if (name == "spectrum") parse_potential(o.potential);
    write_resolved(*sub, out, o.out_dir, name != "verify");
    out << "seed: " << o.seed << '\n';
    if (name == "spectrum") return cmd_spectrum(o, out);
    if (name == "transform") return cmd_transform(o, out);
    if (name == "evolve") return cmd_evolve(o, out);
    if (name == "measure") return cmd_measure(o, out);
    if (name == "rds") return cmd_rds(o, out);
    if (name == "dynamics") return cmd_dynamics(o, out);
    if (name == "ingest") return cmd_ingest(o, out);
    return cmd_verify(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::size_limit: return kSizeLimit;
      case ErrorKind::invalid_input:
      case ErrorKind::config_mismatch: return kInvalidConfig;
      default: return kFailed;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailed;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace padicq::cli
