#include "oureflect/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "oureflect/ctmc.hpp"
#include "oureflect/errors.hpp"
#include "oureflect/graph.hpp"
#include "oureflect/harness.hpp"
#include "oureflect/io.hpp"
#include "oureflect/model.hpp"
#include "oureflect/sde.hpp"
#include "oureflect/skorohod.hpp"
#include "oureflect/stationary.hpp"

#ifndef OUREFLECT_VERSION
#define OUREFLECT_VERSION "0.0.0"
#endif

namespace oureflect::cli {

namespace {

using json = nlohmann::ordered_json;

enum class ValueType { Real, Integer, RealList, IntegerList, Text, Mode, Scheme };

ValueType key_type(const std::string& key) {
  static const std::map<std::string, ValueType> types = {
      {"graph", ValueType::Text},          {"path", ValueType::Text},
      {"output_dir", ValueType::Text},     {"alpha", ValueType::Real},
      {"beta", ValueType::Real},           {"dt", ValueType::Real},
      {"horizon", ValueType::Real},        {"gamma", ValueType::Real},
      {"ks_threshold", ValueType::Real},   {"burn_in_fraction", ValueType::Real},
      {"sample_interval", ValueType::Real}, {"level", ValueType::Real},
      {"tol", ValueType::Real},            {"N", ValueType::Integer},
      {"n", ValueType::Integer},           {"replicas", ValueType::Integer},
      {"seed", ValueType::Integer},        {"event_cap", ValueType::Integer},
      {"x0", ValueType::RealList},         {"state", ValueType::RealList},
      {"beta_grid", ValueType::RealList},  {"n_values", ValueType::IntegerList},
      {"mode", ValueType::Mode},           {"scheme", ValueType::Scheme},
  };
  return types.at(key);
}

KeySpec req(std::string name, std::string help) { return {std::move(name), true, std::nullopt, std::move(help)}; }
KeySpec opt(std::string name, std::string help) { return {std::move(name), false, std::nullopt, std::move(help)}; }
KeySpec def(std::string name, std::string value, std::string help) {
  return {std::move(name), false, std::move(value), std::move(help)};
}

const KeySpec kGraph = req("graph", "edge-list file");
const KeySpec kAlpha = req("alpha", "self-interaction alpha");
const KeySpec kBeta = req("beta", "neighbour interaction beta");
const KeySpec kMode = def("mode", "arrival", "rate mode: arrival or death");
const KeySpec kSeed = def("seed", "1", "master random seed");
const KeySpec kOutput = def("output_dir", ".", "directory for output files");

bool parse_real(std::string_view text, double& value) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), value);
  return r.ec == std::errc() && r.ptr == text.data() + text.size() && std::isfinite(value);
}

bool parse_integer(std::string_view text, long long& value) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), value);
  if (r.ec == std::errc() && r.ptr == text.data() + text.size()) return true;
  // Accept integral reals written in exponent form, e.g. 1e4.
  double real = 0.0;
  if (!parse_real(text, real) || real != std::floor(real) || std::abs(real) > 9.0e18) return false;
  value = static_cast<long long>(real);
  return true;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) items.push_back(item);
  return items;
}

[[noreturn]] void type_error(const std::string& key, const RawValue& raw, const std::string& expected) {
  throw UsageError("key '" + key + "' (" + raw.origin + "): expected " + expected + ", got '" + raw.text + "'");
}

void check_type(const std::string& key, const RawValue& raw) {
  double real = 0.0;
  long long integer = 0;
  switch (key_type(key)) {
    case ValueType::Real:
      if (!parse_real(raw.text, real)) type_error(key, raw, "a real number");
      break;
    case ValueType::Integer:
      if (!parse_integer(raw.text, integer)) type_error(key, raw, "an integer");
      break;
    case ValueType::RealList:
      if (raw.text.empty()) type_error(key, raw, "a comma-separated list of reals");
      for (const auto& item : split_list(raw.text)) {
        if (!parse_real(item, real)) type_error(key, raw, "a comma-separated list of reals");
      }
      break;
    case ValueType::IntegerList:
      if (raw.text.empty()) type_error(key, raw, "a comma-separated list of integers");
      for (const auto& item : split_list(raw.text)) {
        if (!parse_integer(item, integer)) type_error(key, raw, "a comma-separated list of integers");
      }
      break;
    case ValueType::Mode:
      if (raw.text != "arrival" && raw.text != "death" && raw.text != "ArrivalInteraction" &&
          raw.text != "DeathInteraction") {
        type_error(key, raw, "arrival or death");
      }
      break;
    case ValueType::Scheme:
      if (raw.text != "bridge" && raw.text != "projection") type_error(key, raw, "bridge or projection");
      break;
    case ValueType::Text:
      if (raw.text.empty()) type_error(key, raw, "a nonempty value");
      break;
  }
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string_view command_name(Command command) {
  switch (command) {
    case Command::Eig: return "eig";
    case Command::Rates: return "rates";
    case Command::SimulateCtmc: return "simulate-ctmc";
    case Command::SimulateSde: return "simulate-sde";
    case Command::Reflect: return "reflect";
    case Command::Stationary: return "stationary";
    case Command::VerifyLimit: return "verify-limit";
    case Command::VerifyStationary: return "verify-stationary";
    case Command::ProbeConjecture: return "probe-conjecture";
  }
  return "";
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> commands = {
      Command::Eig,        Command::Rates,       Command::SimulateCtmc,     Command::SimulateSde,
      Command::Reflect,    Command::Stationary, Command::VerifyLimit, Command::VerifyStationary,
      Command::ProbeConjecture};
  return commands;
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : all_commands()) {
    if (command_name(c) == name) return c;
  }
  return std::nullopt;
}

const std::vector<KeySpec>& command_keys(Command command) {
  static const std::map<Command, std::vector<KeySpec>> table = {
      {Command::Eig,
       {kGraph, opt("alpha", "if given and negative, also report beta_cr"),
        def("tol", "1e-10", "power iteration tolerance")}},
      {Command::Rates,
       {kGraph, kAlpha, kBeta, req("state", "chain state, comma-separated"), kMode,
        def("n", "1", "scale: rates use alpha/n and beta/n")}},
      {Command::SimulateCtmc,
       {kGraph, kAlpha, kBeta, req("N", "capacity (Nn when n > 1)"),
        req("horizon", "time horizon (scaled time when n > 1)"), req("x0", "initial state"), kSeed, kMode,
        def("n", "1", "scale of the simulated chain Q^n"), def("event_cap", "100000000", "maximum events"),
        kOutput}},
      {Command::SimulateSde,
       {kGraph, kAlpha, kBeta, req("dt", "time step"), req("horizon", "time horizon"),
        req("x0", "initial state"), kSeed, def("replicas", "0", "if positive, also sample X(horizon)"),
        def("scheme", "bridge", "reflection scheme: bridge or projection"), kOutput}},
      {Command::Reflect, {req("path", "input path CSV (t,value)"), kOutput}},
      {Command::Stationary,
       {kGraph, kAlpha, kBeta, req("N", "capacity"), kMode,
        def("replicas", "100000", "Monte Carlo draws for Z_U"), kSeed, kOutput}},
      {Command::VerifyLimit,
       {kGraph, kAlpha, kBeta, kMode, def("n_values", "100,1000,10000", "increasing scales n"),
        def("gamma", "0.75", "Nn = ceil(n^gamma)"), def("horizon", "1", "marginal time t"),
        def("dt", "0.001", "diffusion time step"), def("replicas", "10000", "replicas per n"), kSeed,
        opt("x0", "initial state of the limit (default zeros)"), def("ks_threshold", "0.05", "final KS threshold"),
        kOutput}},
      {Command::VerifyStationary,
       {kGraph, kAlpha, kBeta, kMode, def("n_values", "10000", "increasing scales n"),
        def("gamma", "0.75", "Nn = ceil(n^gamma)"), def("horizon", "20000", "scaled run length"),
        def("burn_in_fraction", "0.5", "discarded leading fraction"),
        def("sample_interval", "1", "scaled time between samples"),
        def("replicas", "100000", "limit-law reference draws"), kSeed,
        opt("x0", "initial state (default zeros)"), def("ks_threshold", "0.05", "KS threshold"), kOutput}},
      {Command::ProbeConjecture,
       {kGraph, kAlpha, req("beta_grid", "comma-separated beta values"), def("horizon", "50", "path length"),
        def("dt", "0.01", "time step"), def("replicas", "200", "paths per beta"), kSeed,
        def("level", "1", "level for the occupation statistic"), kOutput}},
  };
  return table.at(command);
}

RawValues read_config_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot read config file " + file.string());
  RawValues values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const std::string origin = file.string() + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw UsageError(origin + ": expected \"key = value\"");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(origin + ": empty key");
    if (values.count(key)) throw UsageError(origin + ": key '" + key + "' repeated");
    values[key] = {value, origin};
  }
  return values;
}

const std::string& RunConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw UsageError("missing required key '" + key + "'");
  return it->second.text;
}

double RunConfig::number(const std::string& key) const {
  double v = 0.0;
  if (!parse_real(text(key), v)) type_error(key, values_.at(key), "a real number");
  return v;
}

long long RunConfig::integer(const std::string& key) const {
  long long v = 0;
  if (!parse_integer(text(key), v)) type_error(key, values_.at(key), "an integer");
  return v;
}

std::vector<double> RunConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(text(key))) {
    double v = 0.0;
    if (!parse_real(item, v)) type_error(key, values_.at(key), "a comma-separated list of reals");
    out.push_back(v);
  }
  return out;
}

std::vector<long long> RunConfig::integers(const std::string& key) const {
  std::vector<long long> out;
  for (const auto& item : split_list(text(key))) {
    long long v = 0;
    if (!parse_integer(item, v)) type_error(key, values_.at(key), "a comma-separated list of integers");
    out.push_back(v);
  }
  return out;
}

std::filesystem::path RunConfig::output_dir() const { return has("output_dir") ? text("output_dir") : "."; }

RunConfig parse_config(Command command, const RawValues& file_values, const RawValues& flag_values) {
  const auto& keys = command_keys(command);
  std::set<std::string> known;
  for (const auto& k : keys) known.insert(k.name);

  RunConfig config;
  config.command = command;
  for (const RawValues* source : {&file_values, &flag_values}) {
    for (const auto& [key, raw] : *source) {
      if (!known.count(key)) {
        throw UsageError("unknown key '" + key + "' (" + raw.origin + ") for command " +
                         std::string(command_name(command)));
      }
      config.values_[key] = raw;
    }
  }
  for (const auto& k : keys) {
    if (config.values_.count(k.name)) continue;
    if (k.required) {
      throw UsageError("missing required key '" + k.name + "' for command " + std::string(command_name(command)));
    }
    if (k.default_value) {
      config.values_[k.name] = {*k.default_value, "default"};
      config.defaulted_.push_back(k.name);
    }
  }
  for (const auto& [key, raw] : config.values_) check_type(key, raw);
  return config;
}

namespace {

json effective_config(const RunConfig& config) {
  json values = json::object();
  for (const auto& [key, raw] : config.values()) values[key] = raw.text;
  return values;
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + file.string());
  out << content;
}

template <class Writer>
void write_file(const std::filesystem::path& file, Writer&& writer) {
  std::ostringstream buffer;
  buffer.imbue(std::locale::classic());
  writer(buffer);
  write_text_file(file, buffer.str());
}

std::filesystem::path prepare_output(const RunConfig& config) {
  const auto dir = config.output_dir();
  std::filesystem::create_directories(dir);
  json meta = {{"artifact", "oureflect"},
               {"version", OUREFLECT_VERSION},
               {"command", std::string(command_name(config.command))},
               {"config", effective_config(config)},
               {"defaulted", config.defaulted()}};
  write_text_file(dir / "metadata.json", meta.dump(2) + "\n");
  return dir;
}

ModelParams model_params(const RunConfig& config, int capacity) {
  ModelParams p;
  p.alpha = config.number("alpha");
  p.beta = config.number("beta");
  p.capacity = capacity;
  p.mode = parse_rate_mode(config.text("mode"));
  return p;
}

int checked_int(long long value, const std::string& key, long long min_value) {
  if (value < min_value || value > std::numeric_limits<int>::max()) {
    throw ArgumentError("key '" + key + "' must be at least " + std::to_string(min_value));
  }
  return static_cast<int>(value);
}

std::size_t checked_count(long long value, const std::string& key, long long min_value) {
  if (value < min_value) throw ArgumentError("key '" + key + "' must be at least " + std::to_string(min_value));
  return static_cast<std::size_t>(value);
}

ChainState integer_state(const std::vector<double>& values, const std::string& key) {
  ChainState x;
  for (double v : values) {
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ArgumentError("key '" + key + "' must list integers");
    x.push_back(static_cast<int>(v));
  }
  return x;
}

std::vector<double> initial_or_zero(const RunConfig& config, const Graph& graph) {
  if (config.has("x0")) return config.numbers("x0");
  return std::vector<double>(graph.vertex_count(), 0.0);
}

json run_eig(const RunConfig& config) {
  const Graph g = read_edge_list(config.text("graph"));
  const double nu = principal_eigenvalue(g, config.number("tol"));
  json summary = {{"nu", nu}, {"vertices", g.vertex_count()}, {"edges", g.edge_count()},
                  {"max_degree", g.max_degree()}};
  if (config.has("alpha")) summary["beta_cr"] = beta_critical(g, config.number("alpha"));
  return summary;
}

json run_rates(const RunConfig& config) {
  const Graph g = read_edge_list(config.text("graph"));
  const ChainState x = integer_state(config.numbers("state"), "state");
  const int n = checked_int(config.integer("n"), "n", 1);
  int capacity = 1;
  for (int v : x) capacity = std::max(capacity, v);
  const ModelParams p = scaled_params(model_params(config, capacity), n, capacity);
  validate_state(p, g, x);
  json birth = json::array(), death = json::array();
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    birth.push_back(birth_rate(p, g, x, v));
    death.push_back(death_rate(p, g, x, v));
  }
  return {{"birth", birth}, {"death", death}, {"mode", std::string(to_string(p.mode))}, {"n", n}};
}

json run_simulate_ctmc(const RunConfig& config) {
  const Graph g = read_edge_list(config.text("graph"));
  const int capacity = checked_int(config.integer("N"), "N", 1);
  const int n = checked_int(config.integer("n"), "n", 1);
  const ModelParams p = model_params(config, capacity);
  const ChainState x0 = integer_state(config.numbers("x0"), "x0");
  validate_state(p, g, x0);
  SimulationOptions options;
  options.event_cap = checked_count(config.integer("event_cap"), "event_cap", 1);
  const auto seed = static_cast<std::uint64_t>(config.integer("seed"));
  const CtmcTrajectory traj = n == 1 ? simulate(p, g, x0, config.number("horizon"), seed, options)
                                     : simulate_scaled(p, g, n, capacity, x0, config.number("horizon"), seed, options);
  const auto dir = prepare_output(config);
  write_file(dir / "trajectory.csv", [&](std::ostream& out) { write_trajectory_csv(traj, out); });
  std::vector<int> final_state(traj.initial_state);
  if (traj.event_count() > 0) {
    const auto last = traj.state_after(traj.event_count() - 1);
    final_state.assign(last.begin(), last.end());
  }
  return {{"events", traj.event_count()}, {"horizon", traj.horizon}, {"final_state", final_state},
          {"output", (dir / "trajectory.csv").string()}};
}

ReflectionScheme scheme_of(const RunConfig& config) {
  return config.text("scheme") == "projection" ? ReflectionScheme::Projection : ReflectionScheme::BridgeMinimum;
}

json run_simulate_sde(const RunConfig& config, unsigned threads) {
  const Graph g = read_edge_list(config.text("graph"));
  const DiffusionSpec spec{config.number("alpha"), config.number("beta"), g, config.numbers("x0")};
  const double dt = config.number("dt");
  const double horizon = config.number("horizon");
  const auto seed = static_cast<std::uint64_t>(config.integer("seed"));
  const auto scheme = scheme_of(config);
  const DiffusionPath path = integrate(spec, dt, horizon, seed, scheme);
  const auto dir = prepare_output(config);
  write_file(dir / "path.csv", [&](std::ostream& out) { write_diffusion_csv(path, out); });
  json summary = {{"steps", path.size() - 1}, {"output", (dir / "path.csv").string()}};
  const std::size_t replicas = checked_count(config.integer("replicas"), "replicas", 0);
  if (replicas > 0) {
    const auto samples = sample_marginal(spec, horizon, dt, replicas, seed, scheme, threads);
    write_file(dir / "samples.csv", [&](std::ostream& out) { write_samples_csv(samples, out); });
    std::vector<double> mean(g.vertex_count(), 0.0);
    for (const auto& s : samples)
      for (std::size_t v = 0; v < s.size(); ++v) mean[v] += s[v] / static_cast<double>(replicas);
    summary["marginal_mean"] = mean;
  }
  return summary;
}

json run_reflect(const RunConfig& config) {
  std::ifstream in(config.text("path"));
  if (!in) throw ParseError("cannot open path file " + config.text("path"));
  const SampledPath psi = read_path_csv(in);
  const ReflectionSolution solution = reflect(psi);
  const auto dir = prepare_output(config);
  write_file(dir / "reflection.csv", [&](std::ostream& out) { write_reflection_csv(psi, solution, out); });
  return {{"points", psi.size()},
          {"final_regulator", solution.regulator.values.back()},
          {"output", (dir / "reflection.csv").string()}};
}

json run_stationary(const RunConfig& config) {
  const Graph g = read_edge_list(config.text("graph"));
  const ModelParams p = model_params(config, checked_int(config.integer("N"), "N", 1));
  const DistributionTable mu = finite_stationary(p, g);
  const double residual = detailed_balance_residual(p, g);
  const DistributionTable oracle = exact_stationary(generator_matrix(p, g));
  const auto dir = prepare_output(config);
  write_file(dir / "stationary.csv", [&](std::ostream& out) { write_distribution_csv(mu, out); });
  json summary = {{"states", mu.space.size()},
                  {"detailed_balance_residual", residual},
                  {"tv_to_generator_solve", tv_distance(mu, oracle)},
                  {"integrable", is_integrable(p.alpha, p.beta, g)},
                  {"output", (dir / "stationary.csv").string()}};
  if (is_integrable(p.alpha, p.beta, g)) {
    try {
      const auto z = normalizing_constant(p.alpha, p.beta, g, checked_count(config.integer("replicas"), "replicas", 1),
                                          static_cast<std::uint64_t>(config.integer("seed")));
      const json zj = {{"estimate", z.estimate}, {"std_error", z.std_error}, {"acceptance_rate", z.acceptance_rate}};
      write_text_file(dir / "z_u.json", zj.dump(2) + "\n");
      summary["Z_U"] = zj;
    } catch (const DomainError& e) {
      summary["Z_U"] = e.what();
    }
  }
  return summary;
}

ExperimentConfig experiment(const RunConfig& config, unsigned threads) {
  ExperimentConfig e;
  e.graph = read_edge_list(config.text("graph"));
  e.alpha = config.number("alpha");
  e.beta = config.number("beta");
  e.mode = parse_rate_mode(config.text("mode"));
  e.n_values = config.integers("n_values");
  e.gamma = config.number("gamma");
  e.horizon = config.number("horizon");
  e.replicas = checked_count(config.integer("replicas"), "replicas", 1);
  e.seed = static_cast<std::uint64_t>(config.integer("seed"));
  e.x0 = initial_or_zero(config, e.graph);
  e.ks_threshold = config.number("ks_threshold");
  if (config.has("dt")) e.dt = config.number("dt");
  if (config.has("burn_in_fraction")) e.burn_in_fraction = config.number("burn_in_fraction");
  if (config.has("sample_interval")) e.sample_interval = config.number("sample_interval");
  e.threads = threads;
  return e;
}

json run_verification(const RunConfig& config, unsigned threads) {
  const ExperimentConfig e = experiment(config, threads);
  const VerificationReport report =
      config.command == Command::VerifyLimit ? verify_limit(e) : verify_stationary_limit(e);
  const auto dir = prepare_output(config);
  write_text_file(dir / "report.json", report.to_json(config.timings).dump(2) + "\n");
  write_file(dir / "samples.csv", [&](std::ostream& out) { report.write_samples_csv(out); });
  json distances = json::array();
  for (const auto& s : report.per_n) distances.push_back({{"n", s.n}, {"Nn", s.Nn}, {"ks", s.distances}});
  return {{"pass", report.pass},
          {"final_below_threshold", report.final_below_threshold},
          {"nonincreasing_within_noise", report.nonincreasing_within_noise},
          {"per_n", distances},
          {"output", (dir / "report.json").string()}};
}

json run_probe(const RunConfig& config, unsigned threads) {
  const Graph g = read_edge_list(config.text("graph"));
  const auto betas = config.numbers("beta_grid");
  const ConjectureProbe probe =
      probe_conjecture(config.number("alpha"), betas, g, config.number("horizon"), config.number("dt"),
                       checked_count(config.integer("replicas"), "replicas", 1),
                       static_cast<std::uint64_t>(config.integer("seed")), config.number("level"), threads);
  const auto dir = prepare_output(config);
  write_text_file(dir / "probe.json", probe.to_json().dump(2) + "\n");
  return {{"label", "EXPLORATORY"}, {"rows", probe.rows.size()}, {"output", (dir / "probe.json").string()}};
}

json dispatch(const RunConfig& config) {
  switch (config.command) {
    case Command::Eig: return run_eig(config);
    case Command::Rates: return run_rates(config);
    case Command::SimulateCtmc: return run_simulate_ctmc(config);
    case Command::SimulateSde: return run_simulate_sde(config, config.threads);
    case Command::Reflect: return run_reflect(config);
    case Command::Stationary: return run_stationary(config);
    case Command::VerifyLimit:
    case Command::VerifyStationary: return run_verification(config, config.threads);
    case Command::ProbeConjecture: return run_probe(config, config.threads);
  }
  throw UsageError("unhandled command");
}

int report_error(std::ostream& out, std::ostream& err, const RunConfig* config, std::string_view kind,
                 const std::string& message, int code) {
  json line = json::object();
  if (config) line["command"] = std::string(command_name(config->command));
  line["status"] = "error";
  line["error"] = std::string(kind);
  line["message"] = message;
  line["exit_code"] = code;
  out << line.dump() << '\n';
  err << "oureflect: " << message << '\n';
  return code;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    json line = {{"command", std::string(command_name(config.command))}, {"status", "ok"}};
    line.update(dispatch(config));
    out << line.dump() << '\n';
    return 0;
  } catch (const DomainError& e) {
    return report_error(out, err, &config, "domain", e.what(), 1);
  } catch (const UsageError& e) {
    return report_error(out, err, &config, "usage", e.what(), 2);
  } catch (const ArgumentError& e) {
    return report_error(out, err, &config, "argument", e.what(), 2);
  } catch (const ParseError& e) {
    return report_error(out, err, &config, "parse", e.what(), 2);
  } catch (const ResourceError& e) {
    return report_error(out, err, &config, "resource", e.what(), 3);
  } catch (const NumericalError& e) {
    return report_error(out, err, &config, "numerical", e.what(), 3);
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(out, err, &config, "resource", e.what(), 3);
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification toolkit for log-linear interacting chains and their reflected "
               "Ornstein-Uhlenbeck limit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(OUREFLECT_VERSION));

  struct Bound {
    Command command;
    CLI::App* sub;
    std::string config_file;
    std::map<std::string, std::string> flags;
    unsigned threads = 0;
    bool timings = false;
  };
  std::vector<Bound> bound;
  bound.reserve(all_commands().size());
  for (Command c : all_commands()) {
    bound.push_back({c, nullptr, {}, {}, 0, false});
    Bound& b = bound.back();
    b.sub = app.add_subcommand(std::string(command_name(c)));
    b.sub->add_option("--config", b.config_file, "key = value config file");
    b.sub->add_option("--threads", b.threads, "worker threads (default: OUREFLECT_THREADS or all cores)");
    b.sub->add_flag("--timings", b.timings, "include runtimes in reports (outputs no longer byte-stable)");
    for (const auto& key : command_keys(c)) {
      std::string help = key.help;
      if (key.required) help += " [required]";
      if (key.default_value) help += " [default " + *key.default_value + "]";
      b.sub->add_option_function<std::string>(
          "--" + key.name, [&b, name = key.name](const std::string& v) { b.flags[name] = v; }, help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    json line = {{"status", "error"}, {"error", "usage"}, {"message", e.what()}, {"exit_code", 2}};
    std::cout << line.dump() << '\n';
    return 2;
  }

  for (Bound& b : bound) {
    if (!b.sub->parsed()) continue;
    RunConfig config;
    try {
      const RawValues file_values = b.config_file.empty() ? RawValues{} : read_config_file(b.config_file);
      RawValues flag_values;
      for (const auto& [k, v] : b.flags) flag_values[k] = {v, "flag --" + k};
      config = parse_config(b.command, file_values, flag_values);
    } catch (const UsageError& e) {
      return report_error(std::cout, std::cerr, nullptr, "usage", e.what(), 2);
    }
    config.threads = b.threads;
    config.timings = b.timings;
    return run(config, std::cout, std::cerr);
  }
  return 2;
}

}  // namespace oureflect::cli
