#include "oureflect/sde.hpp"

#include <cmath>
#include <string>

#include "oureflect/errors.hpp"
#include "oureflect/parallel.hpp"
#include "oureflect/random.hpp"

namespace oureflect {

void DiffusionSpec::validate() const {
  if (x0.size() != graph.vertex_count()) {
    throw ArgumentError("initial state has " + std::to_string(x0.size()) + " components, graph has " +
                        std::to_string(graph.vertex_count()) + " vertices");
  }
  for (double v : x0) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("initial state must be finite and nonnegative");
  }
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw ArgumentError("alpha and beta must be finite");
}

StepResult reflected_step(double x, double drift, double dt, double normal, double uniform,
                          ReflectionScheme scheme) {
  const double end = x + drift * dt + kNoiseScale * std::sqrt(dt) * normal;
  if (scheme == ReflectionScheme::Projection) {
    if (end >= 0.0) return {end, 0.0};
    return {0.0, -end};
  }
  // Minimum of a Brownian bridge with variance 2 per unit time from x to end.
  // It is negative iff uniform < exp(-x end / dt); uniform >= 2^-53 rules
  // that out once x end > 40 dt.
  if (x > 0.0 && end > 0.0 && x * end > 40.0 * dt) return {end, 0.0};
  const double gap = end - x;
  const double minimum = 0.5 * (x + end - std::sqrt(gap * gap - 4.0 * dt * std::log(uniform)));
  if (minimum >= 0.0) return {end, 0.0};
  return {end - minimum, -minimum};
}

namespace {

std::size_t step_count(double dt, double horizon) {
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  if (!(horizon >= 0.0)) throw ArgumentError("horizon must be nonnegative");
  if (horizon == 0.0) return 0;
  if (dt > horizon) throw ArgumentError("dt must not exceed the horizon");
  const double ratio = horizon / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * nearest) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

// Runs the scheme, calling on_step(k, time, state, regulator) after step k
// (and once with k = 0 for the initial state). Returns the final state.
template <class OnStep>
std::vector<double> run_scheme(const DiffusionSpec& spec, double dt, double horizon, std::uint64_t seed,
                ReflectionScheme scheme, OnStep&& on_step) {
  spec.validate();
  const std::size_t steps = step_count(dt, horizon);
  const std::size_t dim = spec.graph.vertex_count();
  RandomStream rng(seed);
  std::vector<double> x = spec.x0;
  std::vector<double> phi(dim, 0.0);
  std::vector<double> drift(dim);
  on_step(std::size_t{0}, 0.0, x, phi);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = k == steps ? horizon : static_cast<double>(k) * dt;
    const double h = k == steps ? horizon - static_cast<double>(k - 1) * dt : dt;
    for (Vertex v = 0; v < dim; ++v) {
      drift[v] = spec.alpha * x[v] + spec.beta * spec.graph.neighbour_sum<double>(v, x);
    }
    for (Vertex v = 0; v < dim; ++v) {
      const double z = rng.normal();
      const double u = rng.uniform_pos();
      const StepResult r = reflected_step(x[v], drift[v], h, z, u, scheme);
      x[v] = r.state;
      phi[v] += r.regulator_increment;
      if (!std::isfinite(x[v]) || !std::isfinite(phi[v])) {
        throw NumericalError("reflected diffusion became non-finite at step " + std::to_string(k) +
                             " (t = " + std::to_string(t) + ")");
      }
    }
    on_step(k, t, x, phi);
  }
  return x;
}

}  // namespace

DiffusionPath integrate(const DiffusionSpec& spec, double dt, double horizon, std::uint64_t seed,
                        ReflectionScheme scheme) {
  if (!(horizon > 0.0)) throw ArgumentError("horizon must be positive");
  DiffusionPath path;
  path.vertex_count = spec.graph.vertex_count();
  const std::size_t rows = step_count(dt, horizon) + 1;
  path.times.reserve(rows);
  path.states.reserve(rows * path.vertex_count);
  path.regulators.reserve(rows * path.vertex_count);
  run_scheme(spec, dt, horizon, seed, scheme,
             [&](std::size_t, double t, const std::vector<double>& x, const std::vector<double>& phi) {
               path.times.push_back(t);
               path.states.insert(path.states.end(), x.begin(), x.end());
               path.regulators.insert(path.regulators.end(), phi.begin(), phi.end());
             });
  return path;
}

std::vector<std::vector<double>> sample_marginal(const DiffusionSpec& spec, double t, double dt,
                                                 std::size_t replicas, std::uint64_t seed,
                                                 ReflectionScheme scheme, unsigned threads) {
  if (replicas == 0) throw ArgumentError("sample_marginal needs at least one replica");
  spec.validate();
  std::vector<std::vector<double>> out(replicas);
  parallel_for(replicas, threads, [&](std::size_t r) {
    out[r] = run_scheme(spec, dt, t, stream_seed(seed, r), scheme,
                        [](std::size_t, double, const std::vector<double>&, const std::vector<double>&) {});
  });
  return out;
}

std::vector<SampledPath> recover_driver(const DiffusionPath& path) {
  std::vector<SampledPath> drivers(path.vertex_count);
  for (Vertex v = 0; v < path.vertex_count; ++v) {
    drivers[v].grid = path.times;
    drivers[v].interpolation = Interpolation::Linear;
    drivers[v].values.resize(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) {
      drivers[v].values[k] = path.state(k)[v] - path.regulator(k)[v];
    }
  }
  return drivers;
}

}  // namespace oureflect
