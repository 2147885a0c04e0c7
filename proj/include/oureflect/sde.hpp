#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oureflect/graph.hpp"
#include "oureflect/skorohod.hpp"

namespace oureflect {

/// dX_v = (alpha X_v + beta (AX)_v) dt + sqrt(2) dB_v + dphi_v, X_v >= 0.
struct DiffusionSpec {
  double alpha = 0.0;
  double beta = 0.0;
  Graph graph = Graph::empty(1);
  std::vector<double> x0 = {0.0};

  // Throws ArgumentError on a length mismatch, DomainError on x0_v < 0.
  void validate() const;
};

// How each Euler step is reflected at 0.
enum class ReflectionScheme {
  // X' = max(0, X + drift dt + sqrt(2 dt) Z): the discrete Skorohod map of the
  // Euler increments. Underestimates the regulator by O(sqrt(dt)).
  Projection,
  // Exact reflection of the within-step Brownian path (drift frozen at the
  // step start): the bridge minimum m between the endpoints is sampled from
  // its conditional law and X' = b - min(0, m).
  BridgeMinimum,
};

inline constexpr double kNoiseScale = 1.4142135623730951;  // sqrt(2)

struct StepResult {
  double state;
  double regulator_increment;
};

// One reflected step for a single coordinate from x >= 0. `normal` is a
// standard normal draw; `uniform` in (0, 1] is used only by BridgeMinimum.
StepResult reflected_step(double x, double drift, double dt, double normal, double uniform,
                          ReflectionScheme scheme);

/// Grid path of the reflected diffusion and its regulators, row-major by step.
struct DiffusionPath {
  std::vector<double> times;
  std::size_t vertex_count = 0;
  std::vector<double> states;
  std::vector<double> regulators;

  std::size_t size() const noexcept { return times.size(); }
  std::span<const double> state(std::size_t k) const { return {states.data() + k * vertex_count, vertex_count}; }
  std::span<const double> regulator(std::size_t k) const {
    return {regulators.data() + k * vertex_count, vertex_count};
  }
};

// Euler-Maruyama with per-step reflection on the grid 0, dt, ..., horizon
// (the last step is shortened if horizon is not a multiple of dt). Per step,
// each coordinate draws one normal and then one uniform, coordinate-major.
// Throws NumericalError naming the step if a state becomes non-finite.
DiffusionPath integrate(const DiffusionSpec& spec, double dt, double horizon, std::uint64_t seed,
                        ReflectionScheme scheme = ReflectionScheme::BridgeMinimum);

// X(t) for `replicas` independent paths; replica r uses stream_seed(seed, r).
// Row r of the result is replica r's state. threads = 0 means default.
std::vector<std::vector<double>> sample_marginal(const DiffusionSpec& spec, double t, double dt,
                                                 std::size_t replicas, std::uint64_t seed,
                                                 ReflectionScheme scheme = ReflectionScheme::BridgeMinimum,
                                                 unsigned threads = 0);

// Y_v = X_v - phi_v for every coordinate.
std::vector<SampledPath> recover_driver(const DiffusionPath& path);

}  // namespace oureflect
