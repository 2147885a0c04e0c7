#include "oureflect/model.hpp"

#include <cmath>
#include <string>

#include "oureflect/errors.hpp"

namespace oureflect {

std::string_view to_string(RateMode mode) {
  return mode == RateMode::ArrivalInteraction ? "arrival" : "death";
}

RateMode parse_rate_mode(std::string_view text) {
  if (text == "arrival" || text == "ArrivalInteraction") return RateMode::ArrivalInteraction;
  if (text == "death" || text == "DeathInteraction") return RateMode::DeathInteraction;
  throw ArgumentError("unknown rate mode '" + std::string(text) + "' (expected arrival or death)");
}

void ModelParams::validate() const {
  if (capacity < 1) throw ArgumentError("capacity N must be >= 1, got " + std::to_string(capacity));
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw ArgumentError("alpha and beta must be finite");
}

void validate_state(const ModelParams& p, const Graph& g, std::span<const int> x) {
  if (x.size() != g.vertex_count()) {
    throw ArgumentError("state has " + std::to_string(x.size()) + " components, graph has " +
                        std::to_string(g.vertex_count()) + " vertices");
  }
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (x[v] < 0 || x[v] > p.capacity) {
      throw ArgumentError("state component " + std::to_string(v) + " = " + std::to_string(x[v]) +
                          " outside [0, " + std::to_string(p.capacity) + "]");
    }
  }
}

ModelParams scaled_params(const ModelParams& p, int n, int scaled_capacity) {
  if (n < 1) throw ArgumentError("scale n must be >= 1");
  ModelParams q = p;
  q.alpha = p.alpha / n;
  q.beta = p.beta / n;
  q.capacity = scaled_capacity;
  return q;
}

double log_birth_rate(const ModelParams& p, const Graph& g, std::span<const int> x, Vertex v) {
  double exponent = p.alpha * x[v];
  if (p.mode == RateMode::ArrivalInteraction) exponent += p.beta * g.neighbour_sum(v, x);
  return exponent;
}

double log_death_rate(const ModelParams& p, const Graph& g, std::span<const int> x, Vertex v) {
  if (p.mode == RateMode::ArrivalInteraction) return 0.0;
  return -p.beta * g.neighbour_sum(v, x);
}

double birth_rate(const ModelParams& p, const Graph& g, std::span<const int> x, Vertex v) {
  return std::exp(log_birth_rate(p, g, x, v));
}

double death_rate(const ModelParams& p, const Graph& g, std::span<const int> x, Vertex v) {
  return std::exp(log_death_rate(p, g, x, v));
}

Vertex unit_step_vertex(std::span<const int> x, std::span<const int> y, int* delta) {
  const Vertex none = x.size();
  if (y.size() != x.size()) return none;
  Vertex changed = none;
  for (Vertex v = 0; v < x.size(); ++v) {
    if (x[v] == y[v]) continue;
    if (changed != none) return none;
    const int d = y[v] - x[v];
    if (d != 1 && d != -1) return none;
    changed = v;
    if (delta) *delta = d;
  }
  return changed;
}

double transition_rate(const ModelParams& p, const Graph& g, std::span<const int> x, std::span<const int> y) {
  int delta = 0;
  const Vertex v = unit_step_vertex(x, y, &delta);
  if (v == x.size()) return 0.0;
  if (delta > 0) return x[v] < p.capacity ? birth_rate(p, g, x, v) : 0.0;
  return x[v] > 0 ? death_rate(p, g, x, v) : 0.0;
}

double scaled_rate(const ModelParams& p, const Graph& g, int n, std::span<const int> x, std::span<const int> y) {
  return transition_rate(scaled_params(p, n, p.capacity), g, x, y);
}

}  // namespace oureflect
