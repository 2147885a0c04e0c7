#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <sstream>

#include "oureflect/errors.hpp"
#include "oureflect/graph.hpp"

using namespace oureflect;

namespace {

Graph random_graph(std::mt19937_64& rng, std::size_t n, double density) {
  std::bernoulli_distribution coin(density);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (coin(rng)) edges.emplace_back(u, v);
  return Graph(n, edges);
}

double dense_largest_eigenvalue(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : g.edges()) {
    a(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = 1.0;
    a(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) = 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  return solver.eigenvalues().maxCoeff();
}

}  // namespace

TEST_CASE("adjacency apply") {
  CHECK(Graph::empty(3).apply(std::vector{1.0, 2.0, 3.0}) == std::vector{0.0, 0.0, 0.0});
  CHECK(Graph::complete(2).apply(std::vector{3.0, 5.0}) == std::vector{5.0, 3.0});
  CHECK(Graph::path(3).apply(std::vector{1.0, 1.0, 1.0}) == std::vector{1.0, 2.0, 1.0});
  CHECK_THROWS_AS(Graph::path(3).apply(std::vector{1.0, 1.0}), ArgumentError);
}

TEST_CASE("degrees") {
  CHECK(Graph::complete(2).degrees() == std::vector<std::size_t>{1, 1});
  CHECK(Graph::star(4).degrees() == std::vector<std::size_t>{4, 1, 1, 1, 1});
  CHECK(Graph::empty(3).degrees() == std::vector<std::size_t>{0, 0, 0});
}

TEST_CASE("construction rejects self-loops, duplicates and bad indices") {
  CHECK_THROWS_AS(Graph(2, {{0, 0}}), ArgumentError);
  CHECK_THROWS_AS(Graph(2, {{0, 1}, {1, 0}}), ArgumentError);
  CHECK_THROWS_AS(Graph(2, {{0, 2}}), ArgumentError);
  CHECK_THROWS_AS(Graph(0, {}), ArgumentError);
  const Graph g(3, {{2, 0}});
  CHECK(g.adjacent(0, 2));
  CHECK(g.adjacent(2, 0));
  CHECK_FALSE(g.adjacent(0, 0));
  CHECK(g.edges().front() == Edge{0, 2});
}

TEST_CASE("principal eigenvalue on known spectra") {
  CHECK(principal_eigenvalue(Graph::complete(4)) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(principal_eigenvalue(Graph::star(4)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(principal_eigenvalue(Graph::empty(5)) == 0.0);
  CHECK(principal_eigenvalue(Graph::complete(2)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("principal eigenvalue matches a dense eigensolver on random graphs") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> density(0.0, 1.0);
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    const Graph g = random_graph(rng, n, density(rng));
    const double nu = principal_eigenvalue(g);
    CHECK(std::abs(nu - dense_largest_eigenvalue(g)) <= 1e-10);
    CHECK(nu <= static_cast<double>(g.max_degree()) + 1e-12);
    CHECK(nu >= 0.0);
  }
}

TEST_CASE("disconnected graph uses the global spectral radius") {
  // K3 plus a disjoint edge: spectral radius 2 from the triangle.
  const Graph g(5, {{0, 1}, {1, 2}, {0, 2}, {3, 4}});
  CHECK(principal_eigenvalue(g) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("power iteration reports non-convergence") {
  CHECK_THROWS_AS(principal_eigenvalue(Graph::path(8), 1e-14, 3), NumericalError);
}

TEST_CASE("sum of (Ax)_v equals sum of d_v x_v") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = random_graph(rng, 1 + static_cast<std::size_t>(trial % 9), 0.4);
    std::vector<double> x(g.vertex_count());
    for (double& v : x) v = normal(rng);
    const auto ax = g.apply(x);
    const auto d = g.degrees();
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) {
      lhs += ax[v];
      rhs += static_cast<double>(d[v]) * x[v];
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("beta critical") {
  CHECK(beta_critical(Graph::complete(2), -1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(beta_critical(Graph::complete(4), -3.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(beta_critical(Graph::star(4), -1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(beta_critical(Graph::complete(2), 0.0), DomainError);
  CHECK_THROWS_AS(beta_critical(Graph::complete(2), 1.0), DomainError);
  CHECK_THROWS_AS(beta_critical(Graph::empty(3), -1.0), DomainError);
}

TEST_CASE("edge list parsing") {
  std::istringstream ok("# a triangle\n3\n0 1\n\n1 2 # trailing\n# comment\n2 0\n");
  // Trailing comments after an edge are not part of the format.
  CHECK_THROWS_AS(parse_edge_list(ok), ParseError);

  std::istringstream good("# K3\n3\n0 1\n1 2\n2 0\n");
  const Graph g = parse_edge_list(good);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 3);

  std::istringstream dup("2\n0 1\n1 0\n");
  CHECK_THROWS_WITH_AS(parse_edge_list(dup), doctest::Contains("line 3"), ParseError);
  std::istringstream loop("2\n1 1\n");
  CHECK_THROWS_AS(parse_edge_list(loop), ParseError);
  std::istringstream range("2\n0 2\n");
  CHECK_THROWS_AS(parse_edge_list(range), ParseError);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(parse_edge_list(empty), ParseError);
  std::istringstream isolated("4\n");
  CHECK(parse_edge_list(isolated).edge_count() == 0);
}
