#include "oureflect/stationary.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "oureflect/errors.hpp"
#include "oureflect/random.hpp"

namespace oureflect {

double potential_W(const ModelParams& params, const Graph& graph, std::span<const int> x) {
  if (x.size() != graph.vertex_count()) throw ArgumentError("state length does not match the graph");
  double self = 0.0;
  for (int xv : x) self += static_cast<double>(xv) * (xv - 1);
  double pair = 0.0;
  for (auto [u, v] : graph.edges()) pair += static_cast<double>(x[u]) * x[v];
  return 0.5 * params.alpha * self + params.beta * pair;
}

DistributionTable finite_stationary(const ModelParams& params, const Graph& graph, std::size_t max_states) {
  params.validate();
  const StateSpace space = StateSpace::bounded(graph.vertex_count(), params.capacity, max_states);
  std::vector<double> log_weight(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) log_weight[i] = potential_W(params, graph, space.state(i));
  const double top = *std::max_element(log_weight.begin(), log_weight.end());
  double total = 0.0;
  for (double& w : log_weight) {
    w = std::exp(w - top);
    total += w;
  }
  for (double& w : log_weight) w /= total;
  return {space, std::move(log_weight)};
}

namespace {

double model_log_rate(const ModelParams& params, const Graph& graph, std::span<const int> x,
                      std::span<const int> y) {
  int delta = 0;
  const Vertex v = unit_step_vertex(x, y, &delta);
  return delta > 0 ? log_birth_rate(params, graph, x, v) : log_death_rate(params, graph, x, v);
}

}  // namespace

double detailed_balance_residual(const ModelParams& params, const Graph& graph, std::size_t max_states) {
  return detailed_balance_residual(
      params, graph, [&](std::span<const int> x, std::span<const int> y) { return model_log_rate(params, graph, x, y); },
      max_states);
}

double detailed_balance_residual(const ModelParams& params, const Graph& graph, const LogRateFunction& log_rate,
                                 std::size_t max_states) {
  params.validate();
  const StateSpace space = StateSpace::bounded(graph.vertex_count(), params.capacity, max_states);
  std::vector<double> w(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) w[i] = potential_W(params, graph, space.state(i));
  double worst = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const ChainState x = space.state(i);
    ChainState y = x;
    for (Vertex v = 0; v < x.size(); ++v) {
      for (int delta : {+1, -1}) {
        y[v] = x[v] + delta;
        if (y[v] >= 0 && y[v] <= params.capacity) {
          const double defect = log_rate(x, y) + w[i] - w[space.index(y)] - log_rate(y, x);
          worst = std::max(worst, std::abs(defect));
        }
        y[v] = x[v];
      }
    }
  }
  return worst;
}

double potential_U(double alpha, double beta, const Graph& graph, std::span<const double> x) {
  if (x.size() != graph.vertex_count()) throw ArgumentError("vector length does not match the graph");
  double self = 0.0;
  for (double xv : x) self += xv * xv;
  double pair = 0.0;
  for (auto [u, v] : graph.edges()) pair += x[u] * x[v];
  return 0.5 * alpha * self + beta * pair;
}

double potential_Wn(double alpha, double beta, const Graph& graph, int n, std::span<const double> x) {
  if (n < 1) throw ArgumentError("scale n must be >= 1");
  double linear = 0.0;
  for (double xv : x) linear += xv;
  return potential_U(alpha, beta, graph, x) - alpha / (2.0 * std::sqrt(static_cast<double>(n))) * linear;
}

bool is_integrable(double alpha, double beta, const Graph& graph, double tol) {
  if (!(alpha < 0.0)) return false;
  return alpha + beta * principal_eigenvalue(graph, tol) < -tol;
}

LimitMeasure::LimitMeasure(double alpha, double beta, const Graph& graph) : dim_(graph.vertex_count()) {
  if (!is_integrable(alpha, beta, graph)) {
    throw DomainError("exp(U) is not integrable on the orthant: need alpha < 0 and alpha + beta nu(G) < 0");
  }
  const auto d = static_cast<Eigen::Index>(dim_);
  precision_ = Eigen::MatrixXd::Identity(d, d) * -alpha;
  for (auto [u, v] : graph.edges()) {
    precision_(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = -beta;
    precision_(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) = -beta;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(precision_);
  if (llt.info() != Eigen::Success) {
    throw DomainError("-alpha I - beta A is not positive definite; the limit law is not a truncated Gaussian");
  }
  lower_ = llt.matrixL();
  const double min_pivot = lower_.diagonal().minCoeff();
  if (!(min_pivot > 1e-12 * std::max(1.0, std::abs(alpha)))) {
    throw DomainError("-alpha I - beta A is numerically singular");
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) log_det += 2.0 * std::log(lower_(i, i));
  gaussian_normaliser_ = std::exp(0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi) - 0.5 * log_det);
}

Eigen::MatrixXd LimitMeasure::covariance() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  return precision_.llt().solve(Eigen::MatrixXd::Identity(d, d));
}

namespace {

constexpr std::size_t kProbeBatch = 1'000'000;
constexpr double kMinAcceptance = 1e-6;

}  // namespace

std::vector<std::vector<double>> LimitMeasure::sample(std::size_t count, std::uint64_t seed) const {
  RandomStream rng(seed);
  const auto d = static_cast<Eigen::Index>(dim_);
  Eigen::VectorXd xi(d);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  std::size_t attempts = 0;
  const auto upper = lower_.transpose().triangularView<Eigen::Upper>();
  while (out.size() < count) {
    for (Eigen::Index i = 0; i < d; ++i) xi(i) = rng.normal();
    const Eigen::VectorXd z = upper.solve(xi);
    ++attempts;
    if ((z.array() >= 0.0).all()) out.emplace_back(z.data(), z.data() + d);
    if (attempts % kProbeBatch == 0 &&
        static_cast<double>(out.size()) < kMinAcceptance * static_cast<double>(attempts)) {
      throw ResourceError("orthant acceptance rate below 1e-6 after " + std::to_string(attempts) + " draws");
    }
  }
  return out;
}

NormalizingConstantEstimate LimitMeasure::normalizing_constant(std::size_t replicas, std::uint64_t seed) const {
  if (dim_ == 1) return {0.5 * gaussian_normaliser_, 0.0, 0.5};
  if (replicas == 0) throw ArgumentError("normalizing constant estimate needs at least one replica");
  RandomStream rng(seed);
  const auto d = static_cast<Eigen::Index>(dim_);
  Eigen::VectorXd xi(d);
  const auto upper = lower_.transpose().triangularView<Eigen::Upper>();
  std::size_t accepted = 0;
  for (std::size_t r = 0; r < replicas; ++r) {
    for (Eigen::Index i = 0; i < d; ++i) xi(i) = rng.normal();
    const Eigen::VectorXd z = upper.solve(xi);
    if ((z.array() >= 0.0).all()) ++accepted;
  }
  const double p = static_cast<double>(accepted) / static_cast<double>(replicas);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(replicas));
  return {gaussian_normaliser_ * p, gaussian_normaliser_ * se, p};
}

NormalizingConstantEstimate normalizing_constant(double alpha, double beta, const Graph& graph,
                                                 std::size_t replicas, std::uint64_t seed) {
  return LimitMeasure(alpha, beta, graph).normalizing_constant(replicas, seed);
}

std::vector<std::vector<double>> sample_limit_measure(double alpha, double beta, const Graph& graph,
                                                      std::size_t count, std::uint64_t seed) {
  return LimitMeasure(alpha, beta, graph).sample(count, seed);
}

}  // namespace oureflect
