#include "oureflect/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>

#include "oureflect/ctmc.hpp"
#include "oureflect/errors.hpp"
#include "oureflect/io.hpp"
#include "oureflect/parallel.hpp"
#include "oureflect/random.hpp"
#include "oureflect/sde.hpp"
#include "oureflect/stationary.hpp"

namespace oureflect {

int nn_schedule(long long n, double gamma) {
  if (!(gamma > 0.5 && gamma < 1.0)) throw DomainError("schedule exponent gamma must lie in (1/2, 1)");
  if (n < 1) throw ArgumentError("scale n must be >= 1");
  const double raw = std::pow(static_cast<double>(n), gamma);
  const double nearest = std::round(raw);
  if (std::abs(raw - nearest) <= 1e-9 * nearest) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(raw));
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ArgumentError("KS distance needs two nonempty samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return worst;
}

double ks_distance_to_cdf(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ArgumentError("KS distance needs a nonempty sample");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < s.size()) {
    const double x = s[i];
    const double below = static_cast<double>(i) / n;
    while (i < s.size() && s[i] == x) ++i;
    const double at = static_cast<double>(i) / n;
    const double f = cdf(x);
    worst = std::max({worst, std::abs(at - f), std::abs(f - below)});
  }
  return worst;
}

double ks_noise_scale(std::size_t m, std::size_t n) {
  // Standard deviation of the Kolmogorov distribution.
  const double pi = std::numbers::pi;
  const double ln2 = std::numbers::ln2;
  const double sd = std::sqrt(pi * pi / 12.0 - pi * ln2 * ln2 / 2.0);
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  return sd * std::sqrt((md + nd) / (md * nd));
}

double tv_distance(const DistributionTable& a, const DistributionTable& b) {
  if (!(a.space == b.space) || a.probabilities.size() != b.probabilities.size()) {
    throw ArgumentError("total variation needs distributions on the same state enumeration");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.probabilities.size(); ++i) sum += std::abs(a.probabilities[i] - b.probabilities[i]);
  return 0.5 * sum;
}

double half_normal_cdf(double x, double variance) {
  if (x <= 0.0) return 0.0;
  return std::erf(x / std::sqrt(2.0 * variance));
}

void ExperimentConfig::validate() const {
  if (!(gamma > 0.5 && gamma < 1.0)) throw DomainError("schedule exponent gamma must lie in (1/2, 1)");
  if (n_values.empty()) throw ArgumentError("n_values must not be empty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) throw ArgumentError("n_values must be positive");
    if (i > 0 && n_values[i] <= n_values[i - 1]) throw ArgumentError("n_values must be increasing");
  }
  if (x0.size() != graph.vertex_count()) throw ArgumentError("x0 length does not match the graph");
  for (double v : x0) {
    if (!(v >= 0.0)) throw DomainError("x0 must be nonnegative");
  }
  if (!(horizon >= 0.0)) throw ArgumentError("horizon must be nonnegative");
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  if (replicas == 0) throw ArgumentError("replicas must be positive");
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) throw ArgumentError("burn_in_fraction must be in [0, 1)");
  if (!(sample_interval > 0.0)) throw ArgumentError("sample_interval must be positive");
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (auto [u, v] : graph.edges()) edges.push_back({u, v});
  return {
      {"graph", {{"vertex_count", graph.vertex_count()}, {"edges", edges}}},
      {"alpha", alpha},
      {"beta", beta},
      {"mode", std::string(to_string(mode))},
      {"n_values", n_values},
      {"gamma", gamma},
      {"horizon", horizon},
      {"dt", dt},
      {"replicas", replicas},
      {"seed", seed},
      {"x0", x0},
      {"ks_threshold", ks_threshold},
      {"noise_multiplier", noise_multiplier},
      {"burn_in_fraction", burn_in_fraction},
      {"sample_interval", sample_interval},
      {"event_cap", event_cap},
  };
}

nlohmann::ordered_json VerificationReport::to_json(bool with_timings) const {
  nlohmann::ordered_json scales = nlohmann::ordered_json::array();
  for (const auto& s : per_n) {
    nlohmann::ordered_json distances = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < s.distances.size(); ++v) distances[std::to_string(v)] = s.distances[v];
    nlohmann::ordered_json entry = {{"n", s.n},
                                    {"Nn", s.Nn},
                                    {"distances", distances},
                                    {"sample_count", s.sample_count},
                                    {"status", s.status}};
    if (with_timings) entry["runtime_s"] = s.runtime_s;
    scales.push_back(entry);
  }
  nlohmann::ordered_json out = {
      {"kind", kind},
      {"config", config.to_json()},
      {"reference", reference},
      {"comparison",
       kind == "verify_limit"
           ? "marginal law at fixed time t (a consequence of convergence in distribution on path space)"
           : "long-run occupation samples against the limit stationary law"},
      {"per_n", scales},
  };
  if (cross_coordinate_ks) out["cross_coordinate_ks"] = *cross_coordinate_ks;
  if (!half_split_ks.empty()) out["half_split_ks"] = half_split_ks;
  out["thresholds"] = {{"ks", config.ks_threshold}, {"noise_multiplier", config.noise_multiplier}};
  out["flags"] = {{"nonincreasing_within_noise", nonincreasing_within_noise},
                  {"final_below_threshold", final_below_threshold},
                  {"pass", pass}};
  return out;
}

void VerificationReport::write_samples_csv(std::ostream& out) const {
  const std::size_t dim = config.graph.vertex_count();
  out << "source,n,index";
  for (std::size_t v = 0; v < dim; ++v) out << ",x" << v;
  out << '\n';
  auto rows = [&](std::string_view source, long long n, const std::vector<std::vector<double>>& samples) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      out << source << ',' << n << ',' << i;
      for (double x : samples[i]) out << ',' << format_double(x);
      out << '\n';
    }
  };
  rows("reference", 0, reference_samples);
  for (const auto& s : per_n) rows("chain", s.n, s.samples);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t v) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[v]);
  return out;
}

ChainState lattice_start(const ExperimentConfig& config, long long n, int capacity) {
  const double root_n = std::sqrt(static_cast<double>(n));
  ChainState q0(config.x0.size());
  for (std::size_t v = 0; v < q0.size(); ++v) {
    const double q = std::floor(root_n * config.x0[v]);
    if (q > capacity) {
      throw DomainError("initial state sqrt(n) x0 exceeds the capacity Nn = " + std::to_string(capacity) +
                        " at n = " + std::to_string(n));
    }
    q0[v] = static_cast<int>(q);
  }
  return q0;
}

ModelParams chain_params(const ExperimentConfig& config) {
  ModelParams p;
  p.alpha = config.alpha;
  p.beta = config.beta;
  p.mode = config.mode;
  return p;
}

// Distinct stream families so that no two consumers share a stream.
constexpr std::uint64_t kReferenceStream = 0x5DE0000000000000ULL;
constexpr std::uint64_t kChainStream = 0xC7AC000000000000ULL;

std::uint64_t chain_family_seed(std::uint64_t seed, long long n) {
  return stream_seed(seed, kChainStream + static_cast<std::uint64_t>(n));
}

}  // namespace

VerificationReport verify_limit(const ExperimentConfig& config) {
  config.validate();
  VerificationReport report;
  report.kind = "verify_limit";
  report.config = config;
  report.reference = "reflected diffusion (Euler with Brownian-bridge reflection), same time and replica count";

  const std::size_t dim = config.graph.vertex_count();
  DiffusionSpec spec{config.alpha, config.beta, config.graph, config.x0};
  if (config.horizon > 0.0) {
    report.reference_samples = sample_marginal(spec, config.horizon, std::min(config.dt, config.horizon),
                                               config.replicas, stream_seed(config.seed, kReferenceStream),
                                               ReflectionScheme::BridgeMinimum, config.threads);
  } else {
    report.reference_samples.assign(config.replicas, config.x0);
  }

  const ModelParams base = chain_params(config);
  for (long long n : config.n_values) {
    const auto start = Clock::now();
    ScaleResult result;
    result.n = n;
    result.Nn = nn_schedule(n, config.gamma);
    result.samples.resize(config.replicas);
    const ModelParams scaled = scaled_params(base, static_cast<int>(n), result.Nn);
    const ChainState q0 = lattice_start(config, n, result.Nn);
    const double root_n = std::sqrt(static_cast<double>(n));
    const double physical_time = static_cast<double>(n) * config.horizon;
    const std::uint64_t family = chain_family_seed(config.seed, n);
    SimulationOptions options;
    options.event_cap = config.event_cap;
    parallel_for(config.replicas, config.threads, [&](std::size_t r) {
      ChainSimulator sim(scaled, config.graph, q0, stream_seed(family, r), options);
      sim.advance_to(physical_time);
      std::vector<double> x(dim);
      for (std::size_t v = 0; v < dim; ++v) x[v] = sim.state()[v] / root_n;
      result.samples[r] = std::move(x);
    });
    result.sample_count = config.replicas;
    for (std::size_t v = 0; v < dim; ++v) {
      result.distances.push_back(ks_distance(column(result.samples, v), column(report.reference_samples, v)));
    }
    result.runtime_s = seconds_since(start);
    report.per_n.push_back(std::move(result));
  }

  const double sigma = ks_noise_scale(config.replicas, config.replicas);
  const double allowed_increase = config.noise_multiplier * std::sqrt(2.0) * sigma;
  for (std::size_t i = 1; i < report.per_n.size(); ++i) {
    for (std::size_t v = 0; v < dim; ++v) {
      if (report.per_n[i].distances[v] > report.per_n[i - 1].distances[v] + allowed_increase) {
        report.nonincreasing_within_noise = false;
      }
    }
  }
  const auto& last = report.per_n.back();
  report.final_below_threshold =
      std::all_of(last.distances.begin(), last.distances.end(), [&](double d) { return d < config.ks_threshold; });
  if (dim >= 2) report.cross_coordinate_ks = ks_distance(column(last.samples, 0), column(last.samples, 1));
  if (last.samples.size() >= 2) {
    const std::size_t half = last.samples.size() / 2;
    for (std::size_t v = 0; v < dim; ++v) {
      const auto col = column(last.samples, v);
      report.half_split_ks.push_back(ks_distance(std::span(col).first(half), std::span(col).subspan(half)));
    }
  }
  report.pass = report.nonincreasing_within_noise && report.final_below_threshold;
  return report;
}

VerificationReport verify_stationary_limit(const ExperimentConfig& config) {
  config.validate();
  if (!is_integrable(config.alpha, config.beta, config.graph)) {
    throw DomainError("limit stationary law does not exist: need alpha < 0 and alpha + beta nu(G) < 0");
  }
  VerificationReport report;
  report.kind = "verify_stationary_limit";
  report.config = config;
  const std::size_t dim = config.graph.vertex_count();
  const double variance = -1.0 / config.alpha;
  if (dim == 1) {
    report.reference = "closed-form half-normal with variance 1/|alpha|";
  } else {
    report.reference = "rejection sampler for the Gaussian restricted to the orthant";
    report.reference_samples =
        sample_limit_measure(config.alpha, config.beta, config.graph, config.replicas,
                             stream_seed(config.seed, kReferenceStream));
  }

  const ModelParams base = chain_params(config);
  const double burn_in = config.burn_in_fraction * config.horizon;
  const auto sample_times = static_cast<std::size_t>(std::floor((config.horizon - burn_in) / config.sample_interval)) + 1;
  report.per_n.resize(config.n_values.size());
  parallel_for(config.n_values.size(), config.threads, [&](std::size_t i) {
    const auto start = Clock::now();
    ScaleResult& result = report.per_n[i];
    const long long n = config.n_values[i];
    result.n = n;
    result.Nn = nn_schedule(n, config.gamma);
    const ModelParams scaled = scaled_params(base, static_cast<int>(n), result.Nn);
    const ChainState q0 = lattice_start(config, n, result.Nn);
    const double root_n = std::sqrt(static_cast<double>(n));
    SimulationOptions options;
    options.event_cap = config.event_cap;
    ChainSimulator sim(scaled, config.graph, q0, chain_family_seed(config.seed, n), options);
    result.samples.reserve(sample_times);
    for (std::size_t k = 0; k < sample_times; ++k) {
      const double t = burn_in + static_cast<double>(k) * config.sample_interval;
      sim.advance_to(static_cast<double>(n) * t);
      std::vector<double> x(dim);
      for (std::size_t v = 0; v < dim; ++v) x[v] = sim.state()[v] / root_n;
      result.samples.push_back(std::move(x));
    }
    result.sample_count = result.samples.size();
    for (std::size_t v = 0; v < dim; ++v) {
      const auto col = column(result.samples, v);
      result.distances.push_back(
          dim == 1 ? ks_distance_to_cdf(col, [&](double x) { return half_normal_cdf(x, variance); })
                   : ks_distance(col, column(report.reference_samples, v)));
    }
    result.runtime_s = seconds_since(start);
  });

  const auto& last = report.per_n.back();
  report.final_below_threshold =
      std::all_of(last.distances.begin(), last.distances.end(), [&](double d) { return d < config.ks_threshold; });
  report.pass = report.final_below_threshold;
  return report;
}

nlohmann::ordered_json ConjectureProbe::to_json() const {
  nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row = {{"beta", r.beta}};
    row["beta_over_critical"] = r.beta_over_critical ? nlohmann::ordered_json(*r.beta_over_critical) : nullptr;
    row["integrable"] = r.integrable;
    row["conjectured_regime"] = r.conjectured_regime;
    row["status"] = r.status;
    row["fraction_below_level"] = r.fraction_below_level;
    row["terminal_magnitude"] = {{"q10", r.terminal_q10}, {"q50", r.terminal_q50}, {"q90", r.terminal_q90}};
    row["running_max"] = {{"q50", r.max_q50}, {"q90", r.max_q90}};
    row["regulator_rate"] = r.regulator_rate;
    rows_json.push_back(row);
  }
  nlohmann::ordered_json out = {{"label", "EXPLORATORY"},
                                {"note", "finite-horizon diagnostics; recurrence or transience is not decided"},
                                {"alpha", alpha}};
  out["nu"] = nu ? nlohmann::ordered_json(*nu) : nullptr;
  out["beta_critical"] = beta_critical ? nlohmann::ordered_json(*beta_critical) : nullptr;
  out["horizon"] = horizon;
  out["dt"] = dt;
  out["level"] = level;
  out["replicas"] = replicas;
  out["seed"] = seed;
  out["rows"] = rows_json;
  return out;
}

namespace {

double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::string regime(double alpha, double beta, double nu, std::size_t dim) {
  if (alpha < 0.0 && alpha + beta * nu < 0.0) return "positive recurrent (conjectured)";
  if (alpha > 0.0 || (alpha < 0.0 && alpha + beta * nu >= 0.0)) return "transient (conjectured)";
  if (alpha == 0.0 && beta <= 0.0 && dim == 2) return "null recurrent (conjectured)";
  if (alpha == 0.0 && dim == 1) return "null recurrent";
  return "not covered";
}

}  // namespace

ConjectureProbe probe_conjecture(double alpha, std::span<const double> beta_grid, const Graph& graph,
                                 double horizon, double dt, std::size_t replicas, std::uint64_t seed,
                                 double level, unsigned threads) {
  if (replicas == 0) throw ArgumentError("probe needs at least one replica");
  if (!(horizon > 0.0)) throw ArgumentError("probe horizon must be positive");
  ConjectureProbe probe;
  probe.alpha = alpha;
  probe.horizon = horizon;
  probe.dt = dt;
  probe.level = level;
  probe.replicas = replicas;
  probe.seed = seed;
  const double nu = principal_eigenvalue(graph);
  if (nu > 0.0) {
    probe.nu = nu;
    if (alpha < 0.0) probe.beta_critical = -alpha / nu;
  } else {
    probe.nu = 0.0;
  }
  const std::size_t dim = graph.vertex_count();
  for (std::size_t b = 0; b < beta_grid.size(); ++b) {
    ConjectureRow row;
    row.beta = beta_grid[b];
    if (probe.beta_critical) row.beta_over_critical = row.beta / *probe.beta_critical;
    row.integrable = is_integrable(alpha, row.beta, graph);
    row.conjectured_regime = regime(alpha, row.beta, nu, dim);
    DiffusionSpec spec{alpha, row.beta, graph, std::vector<double>(dim, 0.0)};
    std::vector<double> terminal(replicas), running_max(replicas), below(replicas), regulator(replicas);
    const std::uint64_t family = stream_seed(seed, b);
    try {
      parallel_for(replicas, threads, [&](std::size_t r) {
        const DiffusionPath path = integrate(spec, dt, horizon, stream_seed(family, r));
        std::size_t below_steps = 0;
        double peak = 0.0;
        for (std::size_t k = 0; k < path.size(); ++k) {
          double total = 0.0;
          for (double x : path.state(k)) total += x;
          if (total < level) ++below_steps;
          peak = std::max(peak, total);
        }
        double total_terminal = 0.0;
        for (double x : path.state(path.size() - 1)) total_terminal += x;
        double total_regulator = 0.0;
        for (double p : path.regulator(path.size() - 1)) total_regulator += p;
        terminal[r] = total_terminal;
        running_max[r] = peak;
        below[r] = static_cast<double>(below_steps) / static_cast<double>(path.size());
        regulator[r] = total_regulator / horizon;
      });
      double below_sum = 0.0, regulator_sum = 0.0;
      for (std::size_t r = 0; r < replicas; ++r) {
        below_sum += below[r];
        regulator_sum += regulator[r];
      }
      row.fraction_below_level = below_sum / static_cast<double>(replicas);
      row.regulator_rate = regulator_sum / static_cast<double>(replicas);
      row.terminal_q10 = quantile(terminal, 0.1);
      row.terminal_q50 = quantile(terminal, 0.5);
      row.terminal_q90 = quantile(terminal, 0.9);
      row.max_q50 = quantile(running_max, 0.5);
      row.max_q90 = quantile(running_max, 0.9);
    } catch (const NumericalError& e) {
      row.status = std::string("overflow: ") + e.what();
    }
    probe.rows.push_back(std::move(row));
  }
  return probe;
}

}  // namespace oureflect
