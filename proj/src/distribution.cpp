#include "oureflect/distribution.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "oureflect/errors.hpp"

namespace oureflect {

namespace {

// (N+1)^V, or SIZE_MAX on overflow.
std::size_t power_or_max(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (out > std::numeric_limits<std::size_t>::max() / base) return std::numeric_limits<std::size_t>::max();
    out *= base;
  }
  return out;
}

}  // namespace

StateSpace::StateSpace(std::size_t vertex_count, int capacity)
    : vertex_count_(vertex_count), capacity_(capacity) {
  if (vertex_count == 0) throw ArgumentError("state space needs at least one vertex");
  if (capacity < 1) throw ArgumentError("state space capacity must be >= 1");
  size_ = power_or_max(static_cast<std::size_t>(capacity) + 1, vertex_count);
  if (size_ == std::numeric_limits<std::size_t>::max()) throw ResourceError("state space size overflows");
}

StateSpace StateSpace::bounded(std::size_t vertex_count, int capacity, std::size_t cap) {
  StateSpace s(vertex_count, capacity);
  if (s.size() > cap) {
    throw ResourceError("state space has " + std::to_string(s.size()) + " states, cap is " + std::to_string(cap));
  }
  return s;
}

std::size_t StateSpace::index(std::span<const int> x) const {
  if (x.size() != vertex_count_) throw ArgumentError("state length does not match state space");
  const auto radix = static_cast<std::size_t>(capacity_) + 1;
  std::size_t idx = 0;
  for (std::size_t v = vertex_count_; v-- > 0;) {
    if (x[v] < 0 || x[v] > capacity_) throw ArgumentError("state component outside [0, N]");
    idx = idx * radix + static_cast<std::size_t>(x[v]);
  }
  return idx;
}

ChainState StateSpace::state(std::size_t index) const {
  if (index >= size_) throw ArgumentError("state index out of range");
  const auto radix = static_cast<std::size_t>(capacity_) + 1;
  ChainState x(vertex_count_);
  for (std::size_t v = 0; v < vertex_count_; ++v) {
    x[v] = static_cast<int>(index % radix);
    index /= radix;
  }
  return x;
}

void DistributionTable::validate(double tol) const {
  if (probabilities.size() != space.size()) throw ArgumentError("distribution has wrong number of entries");
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw ArgumentError("distribution has a negative or NaN entry");
    total += p;
  }
  if (std::abs(total - 1.0) > tol) {
    throw ArgumentError("distribution sums to " + std::to_string(total) + ", not 1");
  }
}

}  // namespace oureflect
