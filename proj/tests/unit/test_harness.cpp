#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oureflect/errors.hpp"
#include "oureflect/harness.hpp"

using namespace oureflect;

namespace {

// sup over every observed value of |F_a - F_b|, by counting.
double brute_ks(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> points = a;
  points.insert(points.end(), b.begin(), b.end());
  double d = 0.0;
  for (double x : points) {
    const double fa = static_cast<double>(std::count_if(a.begin(), a.end(), [&](double v) { return v <= x; })) / a.size();
    const double fb = static_cast<double>(std::count_if(b.begin(), b.end(), [&](double v) { return v <= x; })) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace

TEST_CASE("Nn schedule") {
  CHECK(nn_schedule(10000, 0.75) == 1000);
  CHECK(nn_schedule(100, 0.75) == 32);
  CHECK(nn_schedule(1000000, 0.6) == 3982);
  CHECK(nn_schedule(1, 0.9) == 1);
  CHECK_THROWS_AS(nn_schedule(100, 0.5), DomainError);
  CHECK_THROWS_AS(nn_schedule(100, 1.0), DomainError);
}

TEST_CASE("two-sample KS") {
  CHECK(ks_distance(std::vector{0.0, 1.0}, std::vector{0.0, 2.0}) == 0.5);
  CHECK(ks_distance(std::vector{1.0, 1.0, 1.0}, std::vector{1.0}) == 0.0);
  CHECK(ks_distance(std::vector{0.0}, std::vector{1.0}) == 1.0);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> small(0, 6);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> a(1 + trial % 17), b(1 + trial % 11);
    for (double& v : a) v = small(rng);
    for (double& v : b) v = small(rng) * 0.5;
    CHECK(ks_distance(a, b) == doctest::Approx(brute_ks(a, b)).epsilon(1e-15));
    CHECK(ks_distance(a, b) == ks_distance(b, a));
  }
  CHECK_THROWS_AS(ks_distance(std::vector<double>{}, std::vector{1.0}), ArgumentError);
}

TEST_CASE("one-sample KS") {
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_distance_to_cdf(std::vector{0.5}, uniform) == doctest::Approx(0.5));
  CHECK(ks_distance_to_cdf(std::vector{0.25, 0.75}, uniform) == doctest::Approx(0.25));
  CHECK(ks_distance_to_cdf(std::vector{0.9, 0.1}, uniform) == doctest::Approx(0.4));
}

TEST_CASE("noise scale and half-normal CDF") {
  CHECK(ks_noise_scale(10000, 10000) == doctest::Approx(0.26044 * std::sqrt(2.0 / 10000.0)).epsilon(1e-4));
  CHECK(half_normal_cdf(0.0, 1.0) == 0.0);
  CHECK(half_normal_cdf(-1.0, 1.0) == 0.0);
  CHECK(half_normal_cdf(1.959963984540054, 1.0) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(half_normal_cdf(2.0 * 1.959963984540054, 4.0) == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("total variation") {
  DistributionTable a{StateSpace(1, 2), {0.5, 0.5, 0.0}};
  DistributionTable b{StateSpace(1, 2), {0.25, 0.25, 0.5}};
  CHECK(tv_distance(a, b) == 0.5);
  CHECK(tv_distance(a, a) == 0.0);
  DistributionTable c{StateSpace(2, 1), {0.25, 0.25, 0.25, 0.25}};
  CHECK_THROWS_AS(tv_distance(a, c), ArgumentError);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.validate();
  c.n_values = {100, 100};
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = {};
  c.gamma = 0.4;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.x0 = {0.0, 1.0};
  CHECK_THROWS_AS(c.validate(), ArgumentError);
}

TEST_CASE("verify_limit on a small decoupled instance") {
  ExperimentConfig c;
  c.alpha = -1.0;
  c.graph = Graph::empty(2);
  c.x0 = {0.0, 0.5};
  c.n_values = {16, 256};
  c.horizon = 0.5;
  c.dt = 0.01;
  c.replicas = 400;
  c.ks_threshold = 0.2;
  c.threads = 1;
  const auto r = verify_limit(c);
  REQUIRE(r.per_n.size() == 2);
  CHECK(r.per_n[0].Nn == 8);
  CHECK(r.per_n[1].Nn == 64);
  CHECK(r.per_n[1].distances.size() == 2);
  CHECK(r.reference_samples.size() == 400);
  CHECK(r.cross_coordinate_ks.has_value());
  CHECK(r.half_split_ks.size() == 2);
  CHECK(r.final_below_threshold);
  c.threads = 2;
  const auto again = verify_limit(c);
  CHECK(again.to_json().dump() == r.to_json().dump());
  CHECK(r.to_json().dump().find("runtime_s") == std::string::npos);
  CHECK(r.to_json(true).dump().find("runtime_s") != std::string::npos);
  std::ostringstream csv;
  r.write_samples_csv(csv);
  CHECK(csv.str().starts_with("source,n,index,x0,x1\n"));
}

TEST_CASE("verify_stationary_limit rejects a non-integrable law") {
  ExperimentConfig c;
  c.alpha = -1.0;
  c.beta = 1.0;
  c.graph = Graph::complete(2);
  c.x0 = {0.0, 0.0};
  CHECK_THROWS_AS(verify_stationary_limit(c), DomainError);
}

TEST_CASE("verify_stationary_limit on one vertex") {
  ExperimentConfig c;
  c.alpha = -1.0;
  c.n_values = {100};
  c.horizon = 2000.0;
  c.sample_interval = 1.0;
  c.threads = 1;
  const auto r = verify_stationary_limit(c);
  REQUIRE(r.per_n.size() == 1);
  CHECK(r.per_n[0].sample_count == 1001);
  CHECK(r.per_n[0].distances[0] < 0.1);
}

TEST_CASE("conjecture probe") {
  const std::vector<double> betas{0.0, 0.9, 1.5};
  const auto probe = probe_conjecture(-1.0, betas, Graph::complete(2), 5.0, 0.01, 20, 3, 1.0, 1);
  REQUIRE(probe.rows.size() == 3);
  CHECK(probe.nu.has_value());
  CHECK(*probe.beta_critical == doctest::Approx(1.0));
  CHECK(probe.rows[0].integrable);
  CHECK_FALSE(probe.rows[2].integrable);
  CHECK(probe.rows[2].terminal_q50 > probe.rows[0].terminal_q50);
  for (const auto& row : probe.rows) {
    CHECK(row.terminal_q10 <= row.terminal_q50);
    CHECK(row.terminal_q50 <= row.terminal_q90);
    CHECK(row.max_q50 <= row.max_q90);
    CHECK(row.fraction_below_level >= 0.0);
    CHECK(row.fraction_below_level <= 1.0);
  }
  const auto j = probe.to_json();
  CHECK(j["label"] == "EXPLORATORY");
  // Overflow in one row does not abort the others.
  const std::vector<double> wild{0.0, 400.0};
  const auto blown = probe_conjecture(-1.0, wild, Graph::complete(2), 20.0, 0.1, 4, 3, 1.0, 1);
  CHECK(blown.rows[0].status == "ok");
  CHECK(blown.rows[1].status != "ok");
}

TEST_CASE("worked total-variation and degenerate-horizon cases") {
  DistributionTable a{StateSpace(1, 1), {0.5, 0.5}};
  DistributionTable b{StateSpace(1, 1), {0.75, 0.25}};
  CHECK(tv_distance(a, b) == 0.25);
  DistributionTable p{StateSpace(1, 1), {1.0, 0.0}};
  DistributionTable q{StateSpace(1, 1), {0.0, 1.0}};
  CHECK(tv_distance(p, q) == 1.0);

  ExperimentConfig c;
  c.horizon = 0.0;
  c.n_values = {100, 10000};
  c.x0 = {1.0};
  c.replicas = 50;
  c.threads = 1;
  const auto r = verify_limit(c);
  for (const auto& s : r.per_n) CHECK(s.distances[0] == 0.0);
}
