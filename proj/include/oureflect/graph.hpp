#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <utility>
#include <vector>

namespace oureflect {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

/// Finite simple undirected graph on vertices 0..n-1.
///
/// Stores both a dense 0/1 adjacency matrix and per-vertex neighbour lists.
/// Immutable after construction, so one instance can be shared by any number
/// of concurrently running simulations.
class Graph {
 public:
  // Throws ArgumentError on zero vertices, out-of-range endpoints, self-loops
  // or duplicate edges (in either orientation).
  Graph(std::size_t vertex_count, std::vector<Edge> edges);

  static Graph empty(std::size_t vertex_count);
  static Graph complete(std::size_t vertex_count);
  static Graph path(std::size_t vertex_count);
  // Vertex 0 is the centre, 1..leaves are the leaves.
  static Graph star(std::size_t leaves);

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  // Edges as given, normalised so that first < second.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Vertex> neighbours(Vertex v) const { return neighbours_.at(v); }
  bool adjacent(Vertex u, Vertex v) const { return adjacency_[u * n_ + v] != 0; }
  std::size_t degree(Vertex v) const { return neighbours_.at(v).size(); }
  std::size_t max_degree() const noexcept;

  std::vector<std::size_t> degrees() const;

  // (Ax)_v for every v. Throws ArgumentError if x.size() != vertex_count().
  std::vector<double> apply(std::span<const double> x) const;

  // (Ax)_v for a single vertex.
  template <class T>
  T neighbour_sum(Vertex v, std::span<const T> x) const {
    T s{};
    for (Vertex u : neighbours_[v]) s += x[u];
    return s;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<unsigned char> adjacency_;
  std::vector<std::vector<Vertex>> neighbours_;
};

inline constexpr double kDefaultEigenTolerance = 1e-10;
inline constexpr std::size_t kDefaultEigenIterationCap = 100000;

// Largest eigenvalue of the adjacency matrix (the spectral radius, which for a
// nonnegative symmetric matrix is its largest eigenvalue). Shifted power
// iteration from the all-ones vector; stops once the eigen-residual
// ||Ax - rho x|| of the unit iterate is below tol, which bounds the distance
// from rho to the spectrum. Throws NumericalError after max_iterations.
double principal_eigenvalue(const Graph& g, double tol = kDefaultEigenTolerance,
                            std::size_t max_iterations = kDefaultEigenIterationCap);

// -alpha / nu(G). Requires alpha < 0 and at least one edge (DomainError).
double beta_critical(const Graph& g, double alpha);

// Edge-list text format: '#' lines and blank lines are skipped; the first
// remaining line is the vertex count, each further line is "u v" (0-based).
// Throws ParseError with the offending line number.
Graph parse_edge_list(std::istream& in);
Graph read_edge_list(const std::filesystem::path& file);

}  // namespace oureflect
