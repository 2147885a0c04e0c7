#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "oureflect/distribution.hpp"
#include "oureflect/errors.hpp"
#include "oureflect/graph.hpp"
#include "oureflect/model.hpp"
#include "oureflect/random.hpp"

namespace oureflect {

struct SimulationOptions {
  // Maximum number of events in one trajectory.
  std::uint64_t event_cap = 100'000'000;
  // At the cap: stop quietly (true) or throw ResourceError (false).
  bool stop_at_event_cap = false;
};

/// Piecewise-constant path of the chain. `states` is row-major: row i is the
/// state right after event i.
struct CtmcTrajectory {
  ChainState initial_state;
  std::vector<double> event_times;
  std::vector<int> states;
  double horizon = 0.0;
  int capacity = 1;

  std::size_t vertex_count() const noexcept { return initial_state.size(); }
  std::size_t event_count() const noexcept { return event_times.size(); }
  std::span<const int> state_after(std::size_t event) const {
    return {states.data() + event * vertex_count(), vertex_count()};
  }
  // Right-continuous state at time t.
  std::span<const int> state_at(double t) const;
};

/// Exact next-event (Gillespie direct method) simulator for the chain.
///
/// Per-vertex birth and death rates are cached together with the neighbour
/// sums (Ax)_v; an event at v refreshes only v and its neighbours. The time of
/// the next event is drawn when the current state is entered, so the realised
/// path does not depend on how callers slice [0, horizon] with advance_to.
class ChainSimulator {
 public:
  ChainSimulator(const ModelParams& params, const Graph& graph, std::span<const int> x0, std::uint64_t seed,
                 SimulationOptions options = {});

  // Applies every event with time <= t, calling on_event(time, vertex, delta)
  // after each. Returns false if the event cap stopped the run early (only
  // with stop_at_event_cap).
  template <class OnEvent>
  bool advance_to(double t, OnEvent&& on_event) {
    while (next_time_ <= t) {
      if (events_ >= options_.event_cap) {
        if (options_.stop_at_event_cap) return false;
        throw ResourceError("event cap of " + std::to_string(options_.event_cap) + " reached at time " +
                            std::to_string(time_));
      }
      time_ = next_time_;
      int delta = 0;
      const Vertex v = fire(delta);
      ++events_;
      on_event(time_, v, delta);
      next_time_ = time_ + rng_.exponential(total_rate());
    }
    return true;
  }
  bool advance_to(double t) {
    return advance_to(t, [](double, Vertex, int) {});
  }

  std::span<const int> state() const noexcept { return x_; }
  // Time of the last applied event (0 before the first).
  double last_event_time() const noexcept { return time_; }
  std::uint64_t event_count() const noexcept { return events_; }
  double total_rate() const noexcept;

 private:
  void refresh(Vertex v);
  Vertex fire(int& delta);

  const Graph& graph_;
  ModelParams params_;
  SimulationOptions options_;
  ChainState x_;
  std::vector<int> neighbour_sum_;
  std::vector<double> birth_;
  std::vector<double> death_;
  RandomStream rng_;
  double time_ = 0.0;
  double next_time_ = 0.0;
  std::uint64_t events_ = 0;
};

// Trajectory of the chain on [0, horizon]. With stop_at_event_cap the
// trajectory's horizon is cut back to the last event time if the cap is hit.
CtmcTrajectory simulate(const ModelParams& params, const Graph& graph, std::span<const int> x0, double horizon,
                        std::uint64_t seed, SimulationOptions options = {});

// Upper bound on the total event rate of the chain over its whole state space.
double max_total_rate(const ModelParams& params, const Graph& graph);

// Trajectory of Q^n (rates alpha/n, beta/n, capacity Nn) up to physical time
// n * horizon_scaled. Throws ResourceError when the expected number of events
// n * horizon_scaled * max_total_rate exceeds options.event_cap.
CtmcTrajectory simulate_scaled(const ModelParams& params, const Graph& graph, int n, int scaled_capacity,
                               std::span<const int> x0, double horizon_scaled, std::uint64_t seed,
                               SimulationOptions options = {});

/// Real-valued multivariate path on a grid; `values` is row-major by time.
struct GridPath {
  std::vector<double> times;
  std::size_t vertex_count = 0;
  std::vector<double> values;

  std::span<const double> at(std::size_t k) const { return {values.data() + k * vertex_count, vertex_count}; }
};

// X^n(t) = Q^n(nt)/sqrt(n) at t_k = k * (horizon/n) / intervals, k = 0..intervals.
GridPath rescale(const CtmcTrajectory& trajectory, int n, std::size_t intervals);

using GeneratorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Generator {
  StateSpace space;
  GeneratorMatrix matrix;
};

// Dense generator over {0..N}^V (mixed-radix order). Throws ResourceError if
// the state space exceeds max_states.
Generator generator_matrix(const ModelParams& params, const Graph& graph,
                           std::size_t max_states = kDefaultStateSpaceCap);

// Stationary vector pi Q = 0, sum pi = 1, by GTH state reduction (Gaussian
// elimination without subtractions). Throws NumericalError if a reduction
// pivot vanishes or the residual ||pi Q||_inf exceeds 1e-10 relative to the
// largest probability flux max_x pi_x |Q_xx| (absolute when that is below 1).
DistributionTable exact_stationary(const Generator& generator);

// Time-weighted occupation of each state over [burn_in, horizon].
DistributionTable empirical_stationary(const CtmcTrajectory& trajectory, double burn_in);

}  // namespace oureflect
