#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oureflect/errors.hpp"
#include "oureflect/skorohod.hpp"

using namespace oureflect;

namespace {

SampledPath make_path(std::vector<double> values, Interpolation interp = Interpolation::Step) {
  SampledPath p;
  p.grid.resize(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) p.grid[k] = static_cast<double>(k);
  p.values = std::move(values);
  p.interpolation = interp;
  return p;
}

// Random walk with dyadic increments, so every sum is exact.
SampledPath dyadic_walk(std::mt19937_64& rng, std::size_t len) {
  std::uniform_int_distribution<int> step(-64, 60);
  std::uniform_int_distribution<int> start(0, 64);
  std::vector<double> v(len);
  v[0] = start(rng) / 16.0;
  for (std::size_t k = 1; k < len; ++k) v[k] = v[k - 1] + step(rng) / 16.0;
  return make_path(std::move(v), rng() % 2 ? Interpolation::Step : Interpolation::Linear);
}

// phi_k = max(0, max_{j<=k} -psi_j) by brute force.
std::vector<double> brute_regulator(const std::vector<double>& psi) {
  std::vector<double> phi(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    double m = 0.0;
    for (std::size_t j = 0; j <= k; ++j) m = std::max(m, -psi[j]);
    phi[k] = m;
  }
  return phi;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace

TEST_CASE("worked example") {
  const auto sol = reflect(make_path({1.0, -1.0, 0.5}));
  CHECK(sol.reflected.values == std::vector{1.0, 0.0, 1.5});
  CHECK(sol.regulator.values == std::vector{0.0, 1.0, 1.0});
  CHECK(sol.reflected.grid == sol.regulator.grid);
}

TEST_CASE("nonnegative input is a fixed point") {
  const auto psi = make_path({0.0, 2.0, 0.0, 3.5});
  const auto sol = reflect(psi);
  CHECK(sol.reflected.values == psi.values);
  CHECK(sol.regulator.values == std::vector{0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(reflect(make_path({-0.1, 1.0})), DomainError);
  SampledPath bad = make_path({0.0, 1.0});
  bad.grid = {0.0, 0.0};
  CHECK_THROWS_AS(reflect(bad), ArgumentError);
  bad.grid = {0.5, 1.0};
  CHECK_THROWS_AS(reflect(bad), ArgumentError);
  bad.grid = {0.0};
  CHECK_THROWS_AS(reflect(bad), ArgumentError);
  CHECK_THROWS_AS(reflect(SampledPath{}), ArgumentError);
}

TEST_CASE("random dyadic paths satisfy the Skorohod conditions exactly") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto psi = dyadic_walk(rng, 2 + static_cast<std::size_t>(trial % 200));
    const auto sol = reflect(psi);
    CHECK(sol.regulator.values == brute_regulator(psi.values));
    CHECK(sol.regulator.values.front() == 0.0);
    for (std::size_t k = 0; k < psi.size(); ++k) {
      CHECK(sol.reflected.values[k] >= 0.0);
      CHECK(sol.reflected.values[k] == psi.values[k] + sol.regulator.values[k]);
      if (k > 0) {
        CHECK(sol.regulator.values[k] >= sol.regulator.values[k - 1]);
        // phi only grows when the reflected path sits at zero.
        if (sol.regulator.values[k] > sol.regulator.values[k - 1]) CHECK(sol.reflected.values[k] == 0.0);
      }
    }
    CHECK(complementarity_defect(sol) == 0.0);
    // Reflecting twice changes nothing.
    CHECK(reflect(sol.reflected).reflected.values == sol.reflected.values);
  }
}

TEST_CASE("sup-norm Lipschitz bound with constant 2") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t len = 2 + static_cast<std::size_t>(trial % 100);
    const auto a = dyadic_walk(rng, len);
    auto b = dyadic_walk(rng, len);
    b.interpolation = a.interpolation;
    const double lhs = sup_distance(reflect(a).reflected.values, reflect(b).reflected.values);
    CHECK(lhs <= 2.0 * sup_distance(a.values, b.values));
    CHECK(sup_distance(reflect(a).regulator.values, reflect(b).regulator.values) <= sup_distance(a.values, b.values));
  }
}

TEST_CASE("majorisation ordering") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> inc(0, 16);
  int majorised = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t len = 2 + static_cast<std::size_t>(trial % 120);
    const auto psi2 = dyadic_walk(rng, len);
    auto psi1 = psi2;
    double lift = inc(rng) / 8.0;
    for (std::size_t k = 0; k < len; ++k) {
      lift += inc(rng) / 8.0;
      psi1.values[k] += lift;
    }
    CHECK(check_majorisation(psi1, psi2));
    ++majorised;
    const auto g1 = reflect(psi1).reflected.values;
    const auto g2 = reflect(psi2).reflected.values;
    for (std::size_t k = 0; k < len; ++k) CHECK(g1[k] >= g2[k]);
  }
  CHECK(majorised == 2000);
  // The difference dips: not majorised.
  CHECK_FALSE(check_majorisation(make_path({1.0, 0.5, 2.0}), make_path({0.0, 0.0, 0.0})));
  CHECK_THROWS_AS(check_majorisation(make_path({0.0, 1.0}), make_path({0.5, 1.0})), DomainError);
  CHECK_THROWS_AS(check_majorisation(make_path({1.0, 1.0}), make_path({0.5})), ArgumentError);
}

TEST_CASE("complementarity defect detects a spurious push") {
  ReflectionSolution sol;
  sol.reflected = make_path({1.0, 1.0, 1.0});
  sol.regulator = make_path({0.0, 0.25, 0.25});
  CHECK(complementarity_defect(sol) == 0.25);
}

TEST_CASE("further worked examples") {
  const auto down = reflect(make_path({0.0, -1.0, -2.0}));
  CHECK(down.reflected.values == std::vector{0.0, 0.0, 0.0});
  CHECK(down.regulator.values == std::vector{0.0, 1.0, 2.0});
  CHECK(complementarity_defect(down) == 0.0);
  const auto up = reflect(make_path({0.0, 1.0, 2.0, 3.0}, Interpolation::Linear));
  CHECK(up.reflected.values == std::vector{0.0, 1.0, 2.0, 3.0});
  CHECK(complementarity_defect(up) == 0.0);
  const auto psi = make_path({0.5, -0.25, 2.0});
  CHECK(check_majorisation(psi, psi));
  CHECK_FALSE(check_majorisation(make_path({0.0, 1.0, 0.0}), make_path({0.0, 0.0, 0.0})));
}
