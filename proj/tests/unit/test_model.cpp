#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oureflect/errors.hpp"
#include "oureflect/model.hpp"

using namespace oureflect;

namespace {

ModelParams params(double alpha, double beta, int capacity, RateMode mode = RateMode::ArrivalInteraction) {
  ModelParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.capacity = capacity;
  p.mode = mode;
  return p;
}

}  // namespace

TEST_CASE("birth rate") {
  const Graph k2 = Graph::complete(2);
  for (RateMode mode : {RateMode::ArrivalInteraction, RateMode::DeathInteraction}) {
    CHECK(birth_rate(params(-1.3, 0.7, 5, mode), k2, ChainState{0, 0}, 0) == 1.0);
  }
  CHECK(birth_rate(params(std::numbers::ln2, 0.0, 3), Graph::empty(1), ChainState{1}, 0) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(birth_rate(params(0.0, 1.0, 3), k2, ChainState{1, 1}, 0) == doctest::Approx(std::numbers::e));
  CHECK(birth_rate(params(0.0, 1.0, 3), k2, ChainState{1, 1}, 1) == doctest::Approx(std::numbers::e));
  // Bare rate: no capacity guard.
  CHECK(birth_rate(params(1.0, 0.0, 1), Graph::empty(1), ChainState{1}, 0) == doctest::Approx(std::numbers::e));
}

TEST_CASE("death rate") {
  const Graph k2 = Graph::complete(2);
  CHECK(death_rate(params(2.0, 3.0, 4), k2, ChainState{3, 4}, 1) == 1.0);
  CHECK(death_rate(params(2.0, 0.0, 4, RateMode::DeathInteraction), k2, ChainState{3, 4}, 1) == 1.0);
  CHECK(death_rate(params(0.0, 1.0, 4, RateMode::DeathInteraction), k2, ChainState{0, 2}, 0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
}

TEST_CASE("transition rate") {
  const Graph one = Graph::empty(1);
  const auto p = params(1.0, 0.0, 2);
  CHECK(transition_rate(p, one, ChainState{1}, ChainState{1}) == 0.0);
  CHECK(transition_rate(p, one, ChainState{2}, ChainState{3}) == 0.0);
  CHECK(transition_rate(p, one, ChainState{1}, ChainState{2}) == doctest::Approx(std::numbers::e));
  CHECK(transition_rate(p, one, ChainState{1}, ChainState{0}) == 1.0);
  CHECK(transition_rate(p, one, ChainState{0}, ChainState{-1}) == 0.0);
  const Graph k2 = Graph::complete(2);
  CHECK(transition_rate(params(0.1, 0.2, 3), k2, ChainState{1, 1}, ChainState{2, 2}) == 0.0);
  CHECK(transition_rate(params(0.1, 0.2, 3), k2, ChainState{1, 1}, ChainState{3, 1}) == 0.0);
}

TEST_CASE("scaled rate") {
  const Graph k2 = Graph::complete(2);
  const auto p = params(-0.4, 0.9, 6);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coord(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    ChainState x{coord(rng), coord(rng)};
    for (Vertex v = 0; v < 2; ++v) {
      for (int d : {+1, -1}) {
        ChainState y = x;
        y[v] += d;
        CHECK(scaled_rate(p, k2, 1, x, y) == transition_rate(p, k2, x, y));
        // r_n(x, y) = r(x/n, y/n): rates at the shrunken state.
        const int n = 1 + trial % 7;
        if (y[v] >= 0 && y[v] <= 6) {
          const double expected = d > 0 ? std::exp(p.alpha * (x[v] / double(n)) + p.beta * (x[1 - v] / double(n))) : 1.0;
          CHECK(scaled_rate(p, k2, n, x, y) == doctest::Approx(expected).epsilon(1e-14));
        }
      }
    }
  }
  CHECK(scaled_rate(params(-3.0, 2.0, 5), k2, 17, ChainState{0, 0}, ChainState{0, 1}) == 1.0);
  CHECK(scaled_rate(params(2.0, 0.0, 5), Graph::empty(1), 2, ChainState{1}, ChainState{2}) ==
        doctest::Approx(std::numbers::e));
}

TEST_CASE("rate properties on random states") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_int_distribution<int> coord(0, 4);
  const Graph g = Graph::path(3);
  for (int trial = 0; trial < 300; ++trial) {
    const RateMode mode = trial % 2 ? RateMode::DeathInteraction : RateMode::ArrivalInteraction;
    const auto p = params(coef(rng), coef(rng), 4, mode);
    ChainState x{coord(rng), coord(rng), coord(rng)};
    ChainState y{coord(rng), coord(rng), coord(rng)};
    for (Vertex v = 0; v < 3; ++v) {
      CHECK(birth_rate(p, g, x, v) > 0.0);
      CHECK(death_rate(p, g, x, v) > 0.0);
    }
    if (transition_rate(p, g, x, y) > 0.0) {
      int changed = 0, total = 0;
      for (Vertex v = 0; v < 3; ++v) {
        changed += x[v] != y[v];
        total += std::abs(x[v] - y[v]);
      }
      CHECK(changed == 1);
      CHECK(total == 1);
    }
    // beta = 0: birth depends on x_v only.
    const auto decoupled = params(p.alpha, 0.0, 4, mode);
    ChainState z = x;
    z[1] = (z[1] + 2) % 5;
    CHECK(birth_rate(decoupled, g, x, 0) == birth_rate(decoupled, g, z, 0));
  }
}

TEST_CASE("log-space rates do not overflow") {
  const auto p = params(400.0, 0.0, 10);
  CHECK(log_birth_rate(p, Graph::empty(1), ChainState{5}, 0) == 2000.0);
  CHECK(std::isinf(birth_rate(p, Graph::empty(1), ChainState{5}, 0)));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(params(0, 0, 0).validate(), ArgumentError);
  CHECK_THROWS_AS(validate_state(params(0, 0, 2), Graph::empty(2), ChainState{0, 3}), ArgumentError);
  CHECK_THROWS_AS(validate_state(params(0, 0, 2), Graph::empty(2), ChainState{0}), ArgumentError);
  CHECK(parse_rate_mode("death") == RateMode::DeathInteraction);
  CHECK(parse_rate_mode("ArrivalInteraction") == RateMode::ArrivalInteraction);
  CHECK_THROWS_AS(parse_rate_mode("both"), ArgumentError);
}
