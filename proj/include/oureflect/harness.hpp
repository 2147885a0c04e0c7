#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "oureflect/distribution.hpp"
#include "oureflect/graph.hpp"
#include "oureflect/model.hpp"

namespace oureflect {

// ceil(n^gamma) for gamma in (1/2, 1), so that Nn/sqrt(n) -> inf and
// Nn/n -> 0. Values within 1e-9 (relative) of an integer round to it, so
// 10^4 at 3/4 gives 1000. DomainError for gamma outside (1/2, 1).
int nn_schedule(long long n, double gamma);

// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|, ties
// handled by evaluating both empirical CDFs after each distinct value.
double ks_distance(std::span<const double> a, std::span<const double> b);

// One-sample statistic against a continuous CDF (both one-sided gaps at every
// sample point).
double ks_distance_to_cdf(std::span<const double> samples, const std::function<double(double)>& cdf);

// Standard deviation of the two-sample statistic under the null, from the
// asymptotic Kolmogorov law: sd(K) sqrt((m + n)/(m n)).
double ks_noise_scale(std::size_t m, std::size_t n);

// 1/2 sum |a - b|. ArgumentError when the state spaces differ.
double tv_distance(const DistributionTable& a, const DistributionTable& b);

// CDF of |N(0, variance)|.
double half_normal_cdf(double x, double variance);

struct ExperimentConfig {
  Graph graph = Graph::empty(1);
  double alpha = -1.0;
  double beta = 0.0;
  RateMode mode = RateMode::ArrivalInteraction;
  std::vector<long long> n_values = {100, 1000, 10000};
  double gamma = 0.75;
  // Marginal time t (verify_limit) or total scaled run length (stationary).
  double horizon = 1.0;
  double dt = 1e-3;
  // CTMC replicas per n (verify_limit) or limit-law draws (stationary).
  std::size_t replicas = 10000;
  std::uint64_t seed = 1;
  std::vector<double> x0 = {0.0};
  double ks_threshold = 0.05;
  double noise_multiplier = 2.0;
  double burn_in_fraction = 0.5;
  double sample_interval = 1.0;
  std::uint64_t event_cap = 10'000'000'000ULL;
  unsigned threads = 0;

  // Throws ArgumentError/DomainError on inconsistent fields.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

struct ScaleResult {
  long long n = 0;
  int Nn = 0;
  std::vector<double> distances;  // per coordinate
  std::size_t sample_count = 0;
  double runtime_s = 0.0;
  std::string status = "ok";
  std::vector<std::vector<double>> samples;  // raw X^n samples, row per sample
};

struct VerificationReport {
  std::string kind;
  ExperimentConfig config;
  std::string reference;
  std::vector<ScaleResult> per_n;
  std::vector<std::vector<double>> reference_samples;
  std::optional<double> cross_coordinate_ks;  // coordinates 0 and 1 at the last n
  std::vector<double> half_split_ks;          // per coordinate at the last n
  bool nonincreasing_within_noise = true;
  bool final_below_threshold = false;
  bool pass = false;

  // Byte-stable unless with_timings, which adds runtime_s per n.
  nlohmann::ordered_json to_json(bool with_timings = false) const;
  // "source,n,index,x0,...": the reference draws (n = 0) and every X^n sample.
  void write_samples_csv(std::ostream& out) const;
};

// Compares X^n(t) = Q^n(nt)/sqrt(n) with X(t) of the reflected diffusion for
// every n, per coordinate, by two-sample KS. X^n(0) = floor(sqrt(n) x0)/sqrt(n).
// Both marginals come from `replicas` independent copies.
VerificationReport verify_limit(const ExperimentConfig& config);

// Samples one long run of X^n every sample_interval after the burn-in and
// compares each coordinate with the limit law: with the half-normal CDF of
// variance 1/|alpha| for a single vertex, otherwise with `replicas`
// rejection-sampler draws. DomainError when the limit law is not integrable.
VerificationReport verify_stationary_limit(const ExperimentConfig& config);

struct ConjectureRow {
  double beta = 0.0;
  std::optional<double> beta_over_critical;
  bool integrable = false;
  std::string conjectured_regime;
  std::string status = "ok";
  double fraction_below_level = 0.0;
  double terminal_q10 = 0.0;
  double terminal_q50 = 0.0;
  double terminal_q90 = 0.0;
  double max_q50 = 0.0;
  double max_q90 = 0.0;
  double regulator_rate = 0.0;
};

struct ConjectureProbe {
  double alpha = 0.0;
  std::optional<double> nu;
  std::optional<double> beta_critical;
  double horizon = 0.0;
  double dt = 0.0;
  double level = 1.0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::vector<ConjectureRow> rows;

  nlohmann::ordered_json to_json() const;
};

// Long-horizon diffusion diagnostics per beta: fraction of time sum_v X_v stays
// below `level`, quantiles of the terminal and running-maximum magnitude
// sum_v X_v, and the mean regulator growth sum_v phi_v(T)/T. Exploratory
// only: there is no pass/fail. Overflow for one beta is recorded in its row.
ConjectureProbe probe_conjecture(double alpha, std::span<const double> beta_grid, const Graph& graph,
                                 double horizon, double dt, std::size_t replicas, std::uint64_t seed,
                                 double level = 1.0, unsigned threads = 0);

}  // namespace oureflect
