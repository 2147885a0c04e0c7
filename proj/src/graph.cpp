#include "oureflect/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "oureflect/errors.hpp"

namespace oureflect {

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges)
    : n_(vertex_count), adjacency_(vertex_count * vertex_count, 0), neighbours_(vertex_count) {
  if (n_ == 0) throw ArgumentError("graph must have at least one vertex");
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= n_ || v >= n_) {
      throw ArgumentError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") references a vertex outside 0.." + std::to_string(n_ - 1));
    }
    if (u == v) throw ArgumentError("self-loop at vertex " + std::to_string(u));
    if (adjacency_[u * n_ + v]) {
      throw ArgumentError("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
    adjacency_[u * n_ + v] = adjacency_[v * n_ + u] = 1;
    neighbours_[u].push_back(v);
    neighbours_[v].push_back(u);
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  for (auto& list : neighbours_) std::sort(list.begin(), list.end());
}

Graph Graph::empty(std::size_t vertex_count) { return Graph(vertex_count, {}); }

Graph Graph::complete(std::size_t vertex_count) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < vertex_count; ++u)
    for (Vertex v = u + 1; v < vertex_count; ++v) e.emplace_back(u, v);
  return Graph(vertex_count, std::move(e));
}

Graph Graph::path(std::size_t vertex_count) {
  std::vector<Edge> e;
  for (Vertex v = 1; v < vertex_count; ++v) e.emplace_back(v - 1, v);
  return Graph(vertex_count, std::move(e));
}

Graph Graph::star(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return Graph(leaves + 1, std::move(e));
}

std::size_t Graph::max_degree() const noexcept {
  std::size_t d = 0;
  for (const auto& list : neighbours_) d = std::max(d, list.size());
  return d;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> d(n_);
  for (Vertex v = 0; v < n_; ++v) d[v] = neighbours_[v].size();
  return d;
}

std::vector<double> Graph::apply(std::span<const double> x) const {
  if (x.size() != n_) {
    throw ArgumentError("adjacency apply: vector has length " + std::to_string(x.size()) +
                        ", graph has " + std::to_string(n_) + " vertices");
  }
  std::vector<double> out(n_);
  for (Vertex v = 0; v < n_; ++v) out[v] = neighbour_sum(v, x);
  return out;
}

double principal_eigenvalue(const Graph& g, double tol, std::size_t max_iterations) {
  const std::size_t n = g.vertex_count();
  if (g.edge_count() == 0) return 0.0;

  // Iterate on A + I: the shift makes the Perron value strictly dominant in
  // modulus even for bipartite graphs, whose spectrum is symmetric about 0.
  constexpr double shift = 1.0;
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n);
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    for (Vertex v = 0; v < n; ++v) y[v] = g.neighbour_sum<double>(v, x);
    // Rayleigh quotient over x.x, so the rounding in the normalisation cancels.
    double xy = 0.0, xx = 0.0;
    for (Vertex v = 0; v < n; ++v) {
      xy += x[v] * y[v];
      xx += x[v] * x[v];
    }
    const double rho = xy / xx;
    double residual2 = 0.0;
    for (Vertex v = 0; v < n; ++v) {
      const double r = y[v] - rho * x[v];
      residual2 += r * r;
    }
    if (std::sqrt(residual2) <= tol) return std::max(rho, 0.0);

    double norm2 = 0.0;
    for (Vertex v = 0; v < n; ++v) {
      y[v] += shift * x[v];
      norm2 += y[v] * y[v];
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (Vertex v = 0; v < n; ++v) x[v] = y[v] * inv;
  }
  throw NumericalError("power iteration did not converge after " + std::to_string(max_iterations) +
                       " iterations");
}

double beta_critical(const Graph& g, double alpha) {
  if (!(alpha < 0.0)) throw DomainError("critical beta is defined only for alpha < 0");
  const double nu = principal_eigenvalue(g);
  if (!(nu > 0.0)) throw DomainError("critical beta undefined: graph has no edges (nu = 0)");
  return -alpha / nu;
}

namespace {

bool skippable(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw ParseError("edge list line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Graph parse_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  long long vertex_count = -1;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream fields(line);
    if (vertex_count < 0) {
      std::string extra;
      if (!(fields >> vertex_count) || vertex_count <= 0 || (fields >> extra)) {
        fail(line_no, "expected a positive vertex count");
      }
      continue;
    }
    long long u = -1, v = -1;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra)) fail(line_no, "expected \"u v\"");
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count) fail(line_no, "vertex index out of range");
    if (u == v) fail(line_no, "self-loop");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    edge_lines.push_back(line_no);
  }
  if (vertex_count < 0) throw ParseError("edge list: missing vertex count");

  const auto n = static_cast<std::size_t>(vertex_count);
  std::vector<unsigned char> seen(n * n, 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [u, v] = edges[i];
    if (seen[u * n + v]) fail(edge_lines[i], "duplicate edge");
    seen[u * n + v] = seen[v * n + u] = 1;
  }
  return Graph(n, std::move(edges));
}

Graph read_edge_list(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open graph file " + file.string());
  try {
    return parse_edge_list(in);
  } catch (const ParseError& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
}

}  // namespace oureflect
