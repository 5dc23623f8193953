#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "skiorder/ensemble.hpp"
#include "skiorder/error.hpp"
#include "skiorder/io.hpp"
#include "skiorder/lambda_ca.hpp"
#include "skiorder/metrics.hpp"
#include "skiorder/random.hpp"
#include "skiorder/swarmsim.hpp"
#include "skiorder/svknee.hpp"
#include "skiorder/trajmat.hpp"

namespace skiorder::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string model_list() {
  std::string s;
  for (Model m : kAllModels) {
    if (!s.empty()) s += ", ";
    s += to_string(m);
  }
  return s;
}

Model parse_model(const std::string& name) {
  const auto m = model_from_string(name);
  if (!m) throw UsageError("unknown model '" + name + "'; expected one of: " + model_list());
  return *m;
}

unsigned resolve_threads(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("SKIORDER_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return 0;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::io, "failed writing '" + path + "'");
}

// Accepts either a flat object of config keys or a sidecar manifest.
json load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  if (j.contains("config") && j["config"].is_object()) j = j["config"];
  if (!j.is_object()) throw UsageError("config file '" + path + "' must hold a JSON object");
  return j;
}

template <typename T>
void take(const json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config key '") + key + "': " + e.what());
  }
}

void check_keys(const json& j, std::initializer_list<const char*> known) {
  for (const auto& [key, value] : j.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) throw UsageError("unknown config key '" + key + "'");
  }
}

json to_json(const SimConfig& c) {
  return json{{"model", to_string(c.model)},
              {"n_agents", c.n_agents},
              {"n_steps", c.n_steps},
              {"dt", c.dt},
              {"seed", c.seed},
              {"mu", c.mu},
              {"K", c.K},
              {"beta", c.beta},
              {"radius", c.radius},
              {"speed", c.speed},
              {"box_size", c.box_size},
              {"freq_f", c.freq_f},
              {"init_extent", c.init_extent},
              {"spiral_t_max", c.spiral_t_max},
              {"measurement_noise", c.measurement_noise},
              {"noise_fraction", c.noise_fraction}};
}

void apply_config(const json& j, SimConfig& c) {
  check_keys(j, {"model", "n_agents", "n_steps", "dt", "seed", "mu", "K", "beta", "radius",
                 "speed", "box_size", "freq_f", "init_extent", "spiral_t_max",
                 "measurement_noise", "noise_fraction"});
  if (j.contains("model")) c.model = parse_model(j.at("model").get<std::string>());
  take(j, "n_agents", c.n_agents);
  take(j, "n_steps", c.n_steps);
  take(j, "dt", c.dt);
  take(j, "seed", c.seed);
  take(j, "mu", c.mu);
  take(j, "K", c.K);
  take(j, "beta", c.beta);
  take(j, "radius", c.radius);
  take(j, "speed", c.speed);
  take(j, "box_size", c.box_size);
  take(j, "freq_f", c.freq_f);
  take(j, "init_extent", c.init_extent);
  take(j, "spiral_t_max", c.spiral_t_max);
  take(j, "measurement_noise", c.measurement_noise);
  take(j, "noise_fraction", c.noise_fraction);
}

json to_json(const CAConfig& c) {
  return json{{"lambda", c.lambda},
              {"n_cells", c.n_cells},
              {"n_steps", c.n_steps},
              {"states", c.states},
              {"neighbors", c.neighbors},
              {"isotropic", c.isotropic},
              {"dead_probability", c.dead_probability},
              {"world_seed", c.world_seed},
              {"rule_seed", c.rule_seed}};
}

void apply_config(const json& j, CAConfig& c) {
  check_keys(j, {"lambda", "n_cells", "n_steps", "states", "neighbors", "isotropic",
                 "dead_probability", "world_seed", "rule_seed"});
  take(j, "lambda", c.lambda);
  take(j, "n_cells", c.n_cells);
  take(j, "n_steps", c.n_steps);
  take(j, "states", c.states);
  take(j, "neighbors", c.neighbors);
  take(j, "isotropic", c.isotropic);
  take(j, "dead_probability", c.dead_probability);
  take(j, "world_seed", c.world_seed);
  take(j, "rule_seed", c.rule_seed);
}

std::string summary_path_for(const std::string& output) {
  std::string stem = output;
  if (stem.size() > 4 && stem.ends_with(".csv")) stem.resize(stem.size() - 4);
  return stem + ".summary.csv";
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text(path, text);
  }
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string config_path;
  std::string model;
  std::size_t agents = 0;
  std::size_t steps = 0;
  double dt = 0, mu = 0, K = 0, beta = 0, radius = 0, speed = 0, box_size = 0, freq_f = 0;
  double noise_fraction = 0;
  std::uint64_t seed = 0;
  bool noise = false;
  std::string output;
  std::string sidecar;
  bool labels = false;
};

struct CaArgs {
  std::string config_path;
  double lambda = 0;
  std::size_t cells = 0, steps = 0;
  int states = 0, neighbors = 0;
  bool anisotropic = false;
  double dead_probability = 0;
  std::uint64_t seed = 0, world_seed = 0, rule_seed = 0;
  std::string output, pgm, sidecar;
};

struct AnalyzeArgs {
  std::string input;
  std::string output;
  std::string curve;
  std::string format = "json";
  std::string angle_plane = "index_sigma";
  double variance_floor = kDefaultVarianceFloor;
  double rank_tolerance = -1.0;
};

struct EnsembleArgs {
  bool full_defaults = false;
  bool ca = false;
  std::vector<std::string> models;
  std::size_t trials = 25;
  std::size_t agents = 50, steps = 500;
  double mu = 0.3;
  std::size_t ca_seeds = 5;
  std::uint64_t base_seed = 0;
  int threads = 0;
  std::string angle_plane = "index_sigma";
  std::string output, summary, sidecar;
};

struct BoundsArgs {
  std::size_t rows = 0, cols = 0;
  std::string format = "json";
};

AnglePlane parse_plane(const std::string& name) {
  const auto p = angle_plane_from_string(name);
  if (!p) throw UsageError("unknown angle plane '" + name + "'; expected index_sigma or normalized");
  return *p;
}

int cmd_simulate(const SimulateArgs& a, const CLI::App& sub, std::ostream& out) {
  SimConfig cfg;
  if (!a.config_path.empty()) apply_config(load_config(a.config_path), cfg);
  const auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };
  if (given("--model")) cfg.model = parse_model(a.model);
  if (given("--agents")) cfg.n_agents = a.agents;
  if (given("--steps")) cfg.n_steps = a.steps;
  if (given("--dt")) cfg.dt = a.dt;
  if (given("--seed")) cfg.seed = a.seed;
  if (given("--mu")) cfg.mu = a.mu;
  if (given("--K")) cfg.K = a.K;
  if (given("--beta")) cfg.beta = a.beta;
  if (given("--radius")) cfg.radius = a.radius;
  if (given("--speed")) cfg.speed = a.speed;
  if (given("--box-size")) cfg.box_size = a.box_size;
  if (given("--freq-f")) cfg.freq_f = a.freq_f;
  if (given("--noise-fraction")) cfg.noise_fraction = a.noise_fraction;
  if (given("--noise")) cfg.measurement_noise = a.noise;

  const SignalMatrix x = simulate(cfg);
  std::ostringstream csv;
  write_matrix_csv(csv, x, a.labels);
  emit(a.output, csv.str(), out);

  const std::string sidecar =
      !a.sidecar.empty() ? a.sidecar : (a.output.empty() || a.output == "-" ? "" : a.output + ".config.json");
  if (!sidecar.empty()) {
    RunManifest m{"simulate", "", a.output, OutputFormat::csv, cfg.seed, to_json(cfg)};
    write_text(sidecar, m.to_json().dump(2) + "\n");
  }
  return kSuccess;
}

int cmd_ca(const CaArgs& a, const CLI::App& sub, std::ostream& out) {
  CAConfig cfg;
  if (!a.config_path.empty()) apply_config(load_config(a.config_path), cfg);
  const auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };
  if (given("--lambda")) cfg.lambda = a.lambda;
  if (given("--cells")) cfg.n_cells = a.cells;
  if (given("--steps")) cfg.n_steps = a.steps;
  if (given("--states")) cfg.states = a.states;
  if (given("--neighbors")) cfg.neighbors = a.neighbors;
  if (given("--anisotropic")) cfg.isotropic = !a.anisotropic;
  if (given("--dead-probability")) cfg.dead_probability = a.dead_probability;
  if (given("--seed")) {
    // Same split as the lambda sweep: world from the seed, rules from its successor.
    cfg.world_seed = a.seed;
    cfg.rule_seed = splitmix64(a.seed);
  }
  if (given("--world-seed")) cfg.world_seed = a.world_seed;
  if (given("--rule-seed")) cfg.rule_seed = a.rule_seed;

  const CATrace trace = run(cfg);
  std::ostringstream csv;
  const auto& g = trace.grid;
  for (Eigen::Index c = 0; c < g.rows(); ++c) {
    for (Eigen::Index t = 0; t < g.cols(); ++t) {
      if (t) csv << ',';
      csv << static_cast<int>(g(c, t));
    }
    csv << '\n';
  }
  emit(a.output, csv.str(), out);

  if (!a.pgm.empty()) {
    std::ofstream pgm(a.pgm, std::ios::binary);
    if (!pgm) throw Error(ErrorCode::io, "cannot open '" + a.pgm + "' for writing");
    write_pgm(pgm, trace);
  }
  const std::string sidecar =
      !a.sidecar.empty() ? a.sidecar : (a.output.empty() || a.output == "-" ? "" : a.output + ".config.json");
  if (!sidecar.empty()) {
    json cfg_json = to_json(cfg);
    cfg_json["rules_used"] = trace.rules.rules_used;
    cfg_json["lambda_ct"] = trace.rules.lambda_ct;
    RunManifest m{"ca", "", a.output, OutputFormat::csv, cfg.world_seed, cfg_json};
    json doc = m.to_json();
    // rules_used / lambda_ct are derived; keep them out of the replayable config.
    doc["derived"] = {{"rules_used", trace.rules.rules_used}, {"lambda_ct", trace.rules.lambda_ct}};
    doc["config"].erase("rules_used");
    doc["config"].erase("lambda_ct");
    write_text(sidecar, doc.dump(2) + "\n");
  }
  return kSuccess;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  MetricsOptions opts;
  opts.angle_plane = parse_plane(a.angle_plane);
  if (a.rank_tolerance >= 0.0) opts.rank_tolerance = a.rank_tolerance;

  const SignalMatrix x = read_matrix_csv_file(a.input);
  const PreprocessedMatrix p = preprocess(x, a.variance_floor);
  const SingularCurve curve = singular_curve(p, opts.rank_tolerance);
  const MetricsReport report = compute_all(curve, opts);

  std::string text;
  if (a.format == "json") {
    text = metrics_json(report) + "\n";
  } else {
    std::ostringstream csv;
    bool first = true;
    for (const auto& key : metric_keys()) {
      csv << (first ? "" : ",") << key;
      first = false;
    }
    csv << '\n';
    first = true;
    for (const auto& key : metric_keys()) {
      csv << (first ? "" : ",");
      first = false;
      if (auto v = metric_value(report, key)) csv << format_double(*v);
    }
    csv << '\n';
    text = csv.str();
  }
  emit(a.output, text, out);

  if (!a.curve.empty()) {
    std::ostringstream c;
    write_curve_csv(c, curve);
    write_text(a.curve, c.str());
  }
  return kSuccess;
}

int cmd_ensemble(const EnsembleArgs& a, const CLI::App& sub, std::ostream& out) {
  const unsigned threads = resolve_threads(a.threads);
  const AnglePlane plane = parse_plane(a.angle_plane);
  const auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };
  std::ostringstream runs;
  std::ostringstream summary;
  json config;

  if (a.ca) {
    CASweepSpec spec;
    spec.base_seed = a.base_seed;
    spec.seeds_per_lambda = a.ca_seeds;
    spec.metrics.angle_plane = plane;
    const auto rows = run_ca_sweep(spec, threads);
    write_ca_sweep_csv(runs, rows);
    write_summary_csv(summary, summarize_ca_sweep(rows));
    config = {{"mode", "ca"}, {"lambdas", spec.lambdas}, {"seeds_per_lambda", spec.seeds_per_lambda},
              {"base_seed", spec.base_seed}, {"angle_plane", to_string(plane)},
              {"ca_defaults", to_json(spec.ca_defaults)}};
  } else {
    EnsembleSpec spec;
    spec.base_seed = a.base_seed;
    spec.metrics.angle_plane = plane;
    if (!a.full_defaults) {
      if (given("--models")) {
        spec.models.clear();
        for (const auto& label : a.models) {
          const auto v = ModelVariant::parse(label);
          if (!v) throw UsageError("unknown model '" + label + "'; expected one of: " + model_list() +
                                   " (optionally suffixed with +noise)");
          spec.models.push_back(*v);
        }
      }
      spec.trials_per_model = a.trials;
      spec.sim_defaults.n_agents = a.agents;
      spec.sim_defaults.n_steps = a.steps;
      spec.sim_defaults.mu = a.mu;
    }
    validate(spec.sim_defaults);
    if (spec.trials_per_model < 1) throw UsageError("--trials must be >= 1");
    const auto rows = run_ensemble(spec, threads);
    write_ensemble_csv(runs, rows);
    write_summary_csv(summary, summarize_ensemble(rows));
    std::vector<std::string> labels;
    for (const auto& m : spec.models) labels.push_back(m.label());
    config = {{"mode", "swarm"}, {"models", labels}, {"trials_per_model", spec.trials_per_model},
              {"base_seed", spec.base_seed}, {"angle_plane", to_string(plane)},
              {"sim_defaults", to_json(spec.sim_defaults)}};
  }

  emit(a.output, runs.str(), out);
  const bool to_file = !a.output.empty() && a.output != "-";
  const std::string summary_path = !a.summary.empty() ? a.summary : (to_file ? summary_path_for(a.output) : "");
  if (!summary_path.empty()) write_text(summary_path, summary.str());
  const std::string sidecar = !a.sidecar.empty() ? a.sidecar : (to_file ? a.output + ".config.json" : "");
  if (!sidecar.empty()) {
    RunManifest m{"ensemble", "", a.output, OutputFormat::csv, a.base_seed, config};
    write_text(sidecar, m.to_json().dump(2) + "\n");
  }
  return kSuccess;
}

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  if (a.rows == 0 || a.cols == 0) throw UsageError("--rows and --cols must be >= 1");
  const NoiseBounds b = noise_bounds(a.rows, a.cols);
  if (a.format == "json") {
    out << "{\"kappa\":" << format_double(b.kappa) << ",\"bound_lower\":" << format_double(b.lower)
        << ",\"bound_upper\":" << format_double(b.upper) << "}\n";
  } else {
    out << "kappa,bound_lower,bound_upper\n"
        << format_double(b.kappa) << ',' << format_double(b.lower) << ','
        << format_double(b.upper) << '\n';
  }
  return kSuccess;
}

}  // namespace

json RunManifest::to_json() const {
  return json{{"command", command},
              {"input_path", input_path},
              {"output_path", output_path},
              {"format", format == OutputFormat::csv ? "csv" : "json"},
              {"seed", seed},
              {"config", config}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Singular-value knee analysis of multi-agent trajectories", "skiorder"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a simulated swarm trajectory CSV");
  simulate_cmd->add_option("--config", sim.config_path, "JSON config (SimConfig keys or a sidecar)");
  simulate_cmd->add_option("--model", sim.model, "Motion model: " + model_list());
  simulate_cmd->add_option("--agents", sim.agents, "Number of agents");
  simulate_cmd->add_option("--steps", sim.steps, "Number of timesteps");
  simulate_cmd->add_option("--dt", sim.dt, "Time step");
  simulate_cmd->add_option("--seed", sim.seed, "RNG seed");
  simulate_cmd->add_option("--mu", sim.mu, "Kinematic/acceleration noise gain");
  simulate_cmd->add_option("--K", sim.K, "Cucker-Smale coupling");
  simulate_cmd->add_option("--beta", sim.beta, "Cucker-Smale decay exponent");
  simulate_cmd->add_option("--radius", sim.radius, "Vicsek interaction radius");
  simulate_cmd->add_option("--speed", sim.speed, "Vicsek speed");
  simulate_cmd->add_option("--box-size", sim.box_size, "Vicsek periodic box side");
  simulate_cmd->add_option("--freq-f", sim.freq_f, "Spiral base frequency");
  simulate_cmd->add_option("--noise-fraction", sim.noise_fraction, "Measurement noise fraction of range");
  simulate_cmd->add_flag("--noise", sim.noise, "Add measurement noise");
  simulate_cmd->add_flag("--labels", sim.labels, "Write a label header and label column");
  simulate_cmd->add_option("-o,--output", sim.output, "Output CSV (default stdout)");
  simulate_cmd->add_option("--sidecar", sim.sidecar, "Resolved-config JSON path (default <output>.config.json)");

  CaArgs ca;
  auto* ca_cmd = app.add_subcommand("ca", "Run the lambda-parameterized 1D cellular automaton");
  ca_cmd->add_option("--config", ca.config_path, "JSON config (CAConfig keys or a sidecar)");
  ca_cmd->add_option("--lambda", ca.lambda, "Fraction of non-dead rule classes enabled");
  ca_cmd->add_option("--cells", ca.cells, "World size");
  ca_cmd->add_option("--steps", ca.steps, "Generations recorded");
  ca_cmd->add_option("--states", ca.states, "Cell states");
  ca_cmd->add_option("--neighbors", ca.neighbors, "Neighbourhood width (odd)");
  ca_cmd->add_flag("--anisotropic", ca.anisotropic, "Disable mirror symmetry of the rule table");
  ca_cmd->add_option("--dead-probability", ca.dead_probability, "Initial probability a cell is dead");
  ca_cmd->add_option("--seed", ca.seed, "Seed for the world; the rule table uses a derived seed");
  ca_cmd->add_option("--world-seed", ca.world_seed, "World seed (overrides --seed)");
  ca_cmd->add_option("--rule-seed", ca.rule_seed, "Rule seed (overrides --seed)");
  ca_cmd->add_option("-o,--output", ca.output, "Grid CSV, cells x steps (default stdout)");
  ca_cmd->add_option("--pgm", ca.pgm, "Also write a PGM image of the grid");
  ca_cmd->add_option("--sidecar", ca.sidecar, "Resolved-config JSON path");

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute knee metrics for a trajectory CSV");
  analyze_cmd->add_option("input,-i,--input", an.input, "Trajectory CSV")->required();
  analyze_cmd->add_option("-o,--output", an.output, "Metrics output (default stdout)");
  analyze_cmd->add_option("--curve", an.curve, "Write the singular value curve CSV");
  analyze_cmd->add_option("--format", an.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  analyze_cmd->add_option("--angle-plane", an.angle_plane, "index_sigma or normalized");
  analyze_cmd->add_option("--variance-floor", an.variance_floor, "Drop rows with std <= floor");
  analyze_cmd->add_option("--rank-tol", an.rank_tolerance, "Override the numerical rank tolerance");

  EnsembleArgs en;
  auto* ensemble_cmd = app.add_subcommand("ensemble", "Batch simulations (or a CA lambda sweep) with statistics");
  ensemble_cmd->add_flag("--paper-defaults", en.full_defaults, "11 models x 25 trials, 50 agents, 500 steps, mu 0.3");
  ensemble_cmd->add_flag("--ca", en.ca, "Run the cellular-automaton lambda sweep instead");
  ensemble_cmd->add_option("--models", en.models, "Model labels, e.g. vicsek+noise")->delimiter(',');
  ensemble_cmd->add_option("--trials", en.trials, "Trials per model");
  ensemble_cmd->add_option("--agents", en.agents, "Agents per simulation");
  ensemble_cmd->add_option("--steps", en.steps, "Timesteps per simulation");
  ensemble_cmd->add_option("--mu", en.mu, "Kinematic/acceleration noise gain");
  ensemble_cmd->add_option("--ca-seeds", en.ca_seeds, "Rule seeds per lambda for --ca");
  ensemble_cmd->add_option("--base-seed", en.base_seed, "Base seed for per-trial seeds");
  ensemble_cmd->add_option("--threads", en.threads, "Worker threads (default SKIORDER_THREADS or all cores)");
  ensemble_cmd->add_option("--angle-plane", en.angle_plane, "index_sigma or normalized");
  ensemble_cmd->add_option("-o,--output", en.output, "Per-trial CSV (default stdout)");
  ensemble_cmd->add_option("--summary", en.summary, "Summary CSV (default <output>.summary.csv)");
  ensemble_cmd->add_option("--sidecar", en.sidecar, "Resolved-config JSON path");

  BoundsArgs bo;
  auto* bounds_cmd = app.add_subcommand("bounds", "Print Marcenko-Pastur singular value bounds");
  bounds_cmd->add_option("--rows", bo.rows, "Matrix rows")->required();
  bounds_cmd->add_option("--cols", bo.cols, "Matrix columns")->required();
  bounds_cmd->add_option("--format", bo.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(sim, *simulate_cmd, out);
    if (*ca_cmd) return cmd_ca(ca, *ca_cmd, out);
    if (*analyze_cmd) return cmd_analyze(an, out);
    if (*ensemble_cmd) return cmd_ensemble(en, *ensemble_cmd, out);
    if (*bounds_cmd) return cmd_bounds(bo, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return e.code() == ErrorCode::config ? kUsageError : kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace skiorder::cli
