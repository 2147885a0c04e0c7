#include "oureflect/ctmc.hpp"

#include <algorithm>
#include <cmath>

namespace oureflect {

std::span<const int> CtmcTrajectory::state_at(double t) const {
  const auto it = std::upper_bound(event_times.begin(), event_times.end(), t);
  const auto events_before = static_cast<std::size_t>(it - event_times.begin());
  if (events_before == 0) return initial_state;
  return state_after(events_before - 1);
}

ChainSimulator::ChainSimulator(const ModelParams& params, const Graph& graph, std::span<const int> x0,
                               std::uint64_t seed, SimulationOptions options)
    : graph_(graph),
      params_(params),
      options_(options),
      x_(x0.begin(), x0.end()),
      neighbour_sum_(graph.vertex_count()),
      birth_(graph.vertex_count()),
      death_(graph.vertex_count()),
      rng_(seed) {
  params_.validate();
  validate_state(params_, graph_, x_);
  for (Vertex v = 0; v < x_.size(); ++v) neighbour_sum_[v] = graph_.neighbour_sum<int>(v, x_);
  for (Vertex v = 0; v < x_.size(); ++v) refresh(v);
  next_time_ = rng_.exponential(total_rate());
}

void ChainSimulator::refresh(Vertex v) {
  const double s = neighbour_sum_[v];
  const int xv = x_[v];
  if (params_.mode == RateMode::ArrivalInteraction) {
    birth_[v] = xv < params_.capacity ? std::exp(params_.alpha * xv + params_.beta * s) : 0.0;
    death_[v] = xv > 0 ? 1.0 : 0.0;
  } else {
    birth_[v] = xv < params_.capacity ? std::exp(params_.alpha * xv) : 0.0;
    death_[v] = xv > 0 ? std::exp(-params_.beta * s) : 0.0;
  }
}

double ChainSimulator::total_rate() const noexcept {
  double total = 0.0;
  for (Vertex v = 0; v < x_.size(); ++v) total += birth_[v] + death_[v];
  return total;
}

Vertex ChainSimulator::fire(int& delta) {
  const double target = rng_.uniform() * total_rate();
  double acc = 0.0;
  Vertex chosen = x_.size();
  for (Vertex v = 0; v < x_.size(); ++v) {
    acc += birth_[v];
    if (target < acc) {
      chosen = v;
      delta = +1;
      break;
    }
    acc += death_[v];
    if (target < acc) {
      chosen = v;
      delta = -1;
      break;
    }
  }
  if (chosen == x_.size()) {
    // Rounding pushed target past the accumulated sum: take the last live rate.
    for (Vertex v = x_.size(); v-- > 0;) {
      if (death_[v] > 0.0) {
        chosen = v;
        delta = -1;
        break;
      }
      if (birth_[v] > 0.0) {
        chosen = v;
        delta = +1;
        break;
      }
    }
  }
  x_[chosen] += delta;
  refresh(chosen);
  for (Vertex u : graph_.neighbours(chosen)) {
    neighbour_sum_[u] += delta;
    refresh(u);
  }
  return chosen;
}

CtmcTrajectory simulate(const ModelParams& params, const Graph& graph, std::span<const int> x0, double horizon,
                        std::uint64_t seed, SimulationOptions options) {
  if (!(horizon > 0.0)) throw ArgumentError("simulation horizon must be positive");
  CtmcTrajectory traj;
  traj.initial_state.assign(x0.begin(), x0.end());
  traj.capacity = params.capacity;
  traj.horizon = horizon;
  ChainSimulator sim(params, graph, x0, seed, options);
  const auto state = sim.state();
  const bool completed = sim.advance_to(horizon, [&](double t, Vertex, int) {
    traj.event_times.push_back(t);
    traj.states.insert(traj.states.end(), state.begin(), state.end());
  });
  if (!completed) traj.horizon = sim.last_event_time();
  return traj;
}

double max_total_rate(const ModelParams& params, const Graph& graph) {
  double total = 0.0;
  const double n_cap = params.capacity;
  for (Vertex v = 0; v < graph.vertex_count(); ++v) {
    const double neighbourhood = static_cast<double>(graph.degree(v)) * n_cap;
    const double self = std::max(0.0, params.alpha * (n_cap - 1.0));
    if (params.mode == RateMode::ArrivalInteraction) {
      total += std::exp(self + std::max(0.0, params.beta) * neighbourhood) + 1.0;
    } else {
      total += std::exp(self) + std::exp(std::max(0.0, -params.beta) * neighbourhood);
    }
  }
  return total;
}

CtmcTrajectory simulate_scaled(const ModelParams& params, const Graph& graph, int n, int scaled_capacity,
                               std::span<const int> x0, double horizon_scaled, std::uint64_t seed,
                               SimulationOptions options) {
  const ModelParams scaled = scaled_params(params, n, scaled_capacity);
  scaled.validate();
  const double physical_horizon = static_cast<double>(n) * horizon_scaled;
  const double expected_events = physical_horizon * max_total_rate(scaled, graph);
  if (expected_events > static_cast<double>(options.event_cap)) {
    throw ResourceError("scaled simulation may need up to " + std::to_string(expected_events) +
                        " events, cap is " + std::to_string(options.event_cap));
  }
  return simulate(scaled, graph, x0, physical_horizon, seed, options);
}

GridPath rescale(const CtmcTrajectory& trajectory, int n, std::size_t intervals) {
  if (n < 1) throw ArgumentError("scale n must be >= 1");
  if (intervals == 0) throw ArgumentError("rescale needs at least one grid interval");
  const std::size_t dim = trajectory.vertex_count();
  const double root_n = std::sqrt(static_cast<double>(n));
  GridPath out;
  out.vertex_count = dim;
  out.times.resize(intervals + 1);
  out.values.resize((intervals + 1) * dim);
  std::size_t next_event = 0;
  std::span<const int> current = trajectory.initial_state;
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double physical = trajectory.horizon * static_cast<double>(k) / static_cast<double>(intervals);
    while (next_event < trajectory.event_count() && trajectory.event_times[next_event] <= physical) {
      current = trajectory.state_after(next_event++);
    }
    out.times[k] = physical / n;
    for (std::size_t v = 0; v < dim; ++v) out.values[k * dim + v] = current[v] / root_n;
  }
  return out;
}

Generator generator_matrix(const ModelParams& params, const Graph& graph, std::size_t max_states) {
  params.validate();
  const StateSpace space = StateSpace::bounded(graph.vertex_count(), params.capacity, max_states);
  GeneratorMatrix q = GeneratorMatrix::Zero(static_cast<Eigen::Index>(space.size()),
                                            static_cast<Eigen::Index>(space.size()));
  for (std::size_t i = 0; i < space.size(); ++i) {
    ChainState x = space.state(i);
    ChainState y = x;
    double out_rate = 0.0;
    for (Vertex v = 0; v < x.size(); ++v) {
      for (int delta : {+1, -1}) {
        y[v] = x[v] + delta;
        if (y[v] < 0 || y[v] > params.capacity) {
          y[v] = x[v];
          continue;
        }
        const double r = transition_rate(params, graph, x, y);
        q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(space.index(y))) = r;
        out_rate += r;
        y[v] = x[v];
      }
    }
    q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = -out_rate;
  }
  return {space, std::move(q)};
}

DistributionTable exact_stationary(const Generator& generator) {
  const auto size = generator.matrix.rows();
  if (generator.matrix.cols() != size || static_cast<std::size_t>(size) != generator.space.size()) {
    throw ArgumentError("generator matrix does not match its state space");
  }
  GeneratorMatrix p = generator.matrix;
  for (Eigen::Index k = size - 1; k > 0; --k) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) s += p(k, j);
    if (!(s > 0.0)) {
      throw NumericalError("generator is reducible: state " + std::to_string(k) + " cannot reach lower states");
    }
    for (Eigen::Index i = 0; i < k; ++i) p(i, k) /= s;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double pik = p(i, k);
      if (pik == 0.0) continue;
      for (Eigen::Index j = 0; j < k; ++j) p(i, j) += pik * p(k, j);
    }
  }
  std::vector<double> pi(static_cast<std::size_t>(size));
  pi[0] = 1.0;
  double total = 1.0;
  for (Eigen::Index j = 1; j < size; ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < j; ++i) acc += pi[static_cast<std::size_t>(i)] * p(i, j);
    pi[static_cast<std::size_t>(j)] = acc;
    total += acc;
  }
  for (double& value : pi) value /= total;

  double flux = 0.0;
  for (Eigen::Index i = 0; i < size; ++i) {
    flux = std::max(flux, pi[static_cast<std::size_t>(i)] * std::abs(generator.matrix(i, i)));
  }
  double residual = 0.0;
  for (Eigen::Index j = 0; j < size; ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < size; ++i) acc += pi[static_cast<std::size_t>(i)] * generator.matrix(i, j);
    residual = std::max(residual, std::abs(acc));
  }
  if (!(residual <= 1e-10 * std::max(1.0, flux))) {
    throw NumericalError("stationary solve residual " + std::to_string(residual) + " exceeds tolerance");
  }
  return {generator.space, std::move(pi)};
}

DistributionTable empirical_stationary(const CtmcTrajectory& trajectory, double burn_in) {
  if (!(burn_in < trajectory.horizon)) throw ArgumentError("burn-in must be shorter than the trajectory");
  const StateSpace space(trajectory.vertex_count(), trajectory.capacity);
  std::vector<double> weight(space.size(), 0.0);
  const double start = std::max(0.0, burn_in);
  double segment_start = 0.0;
  std::span<const int> current = trajectory.initial_state;
  auto credit = [&](double from, double to) {
    const double lo = std::max(from, start);
    if (to > lo) weight[space.index(current)] += to - lo;
  };
  for (std::size_t e = 0; e < trajectory.event_count(); ++e) {
    credit(segment_start, trajectory.event_times[e]);
    segment_start = trajectory.event_times[e];
    current = trajectory.state_after(e);
  }
  credit(segment_start, trajectory.horizon);
  double total = 0.0;
  for (double w : weight) total += w;
  for (double& w : weight) w /= total;
  return {space, std::move(weight)};
}

}  // namespace oureflect
