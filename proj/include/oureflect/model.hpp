#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "oureflect/graph.hpp"

namespace oureflect {

// Where the graph interaction enters the rates.
enum class RateMode {
  // birth exp(alpha x_v + beta (Ax)_v), death 1
  ArrivalInteraction,
  // birth exp(alpha x_v), death exp(-beta (Ax)_v); same stationary law
  DeathInteraction,
};

std::string_view to_string(RateMode mode);
// Accepts "arrival"/"ArrivalInteraction" and "death"/"DeathInteraction".
RateMode parse_rate_mode(std::string_view text);

struct ModelParams {
  double alpha = 0.0;
  double beta = 0.0;
  int capacity = 1;  // N: every component lives in {0, ..., N}
  RateMode mode = RateMode::ArrivalInteraction;

  // Throws ArgumentError if capacity < 1 or alpha/beta are not finite.
  void validate() const;
};

// Occupation numbers, one per vertex.
using ChainState = std::vector<int>;

// Throws ArgumentError unless x has one entry per vertex, each in [0, N].
void validate_state(const ModelParams& p, const Graph& g, std::span<const int> x);

// Parameters of the chain Q^n: alpha/n, beta/n and capacity Nn.
ModelParams scaled_params(const ModelParams& p, int n, int scaled_capacity);

// Log-rates. The exponent is accumulated first, so these never overflow.
double log_birth_rate(const ModelParams& p, const Graph& g, std::span<const int> x, Vertex v);
double log_death_rate(const ModelParams& p, const Graph& g, std::span<const int> x, Vertex v);

// Rate of x -> x + e_v, ignoring the capacity guard x_v < N.
double birth_rate(const ModelParams& p, const Graph& g, std::span<const int> x, Vertex v);
// Rate of x -> x - e_v, ignoring the guard x_v > 0.
double death_rate(const ModelParams& p, const Graph& g, std::span<const int> x, Vertex v);

// Full r(x, y): birth or death rate when y is a guarded unit step from x,
// zero otherwise (including y == x).
double transition_rate(const ModelParams& p, const Graph& g, std::span<const int> x, std::span<const int> y);

// r_n(x, y) = r(x/n, y/n) for the chain with capacity p.capacity (= Nn).
double scaled_rate(const ModelParams& p, const Graph& g, int n, std::span<const int> x, std::span<const int> y);

// If y = x +/- e_v, returns v and sets *delta to +/-1; otherwise returns
// vertex_count.
Vertex unit_step_vertex(std::span<const int> x, std::span<const int> y, int* delta);

}  // namespace oureflect
