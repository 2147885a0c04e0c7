#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oureflect/model.hpp"

namespace oureflect {

inline constexpr std::size_t kDefaultStateSpaceCap = 4096;

/// The finite state space {0..N}^V, enumerated in mixed radix (base N+1)
/// with vertex 0 as the least significant digit.
class StateSpace {
 public:
  StateSpace(std::size_t vertex_count, int capacity);

  // Throws ResourceError if (N+1)^|V| exceeds cap.
  static StateSpace bounded(std::size_t vertex_count, int capacity, std::size_t cap);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  int capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return size_; }

  std::size_t index(std::span<const int> x) const;
  ChainState state(std::size_t index) const;

  bool operator==(const StateSpace&) const = default;

 private:
  std::size_t vertex_count_;
  int capacity_;
  std::size_t size_;
};

/// Probability vector over a StateSpace.
struct DistributionTable {
  StateSpace space;
  std::vector<double> probabilities;

  // Throws ArgumentError unless entries are nonnegative, one per state, and
  // sum to 1 within tol.
  void validate(double tol = 1e-12) const;
};

}  // namespace oureflect
