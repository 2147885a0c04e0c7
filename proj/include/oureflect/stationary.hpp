#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "oureflect/distribution.hpp"
#include "oureflect/graph.hpp"
#include "oureflect/model.hpp"

namespace oureflect {

// W(x) = (alpha/2) sum_v x_v (x_v - 1) + beta sum_{edges uv} x_u x_v.
double potential_W(const ModelParams& params, const Graph& graph, std::span<const int> x);

// mu(x) proportional to exp(W(x)) on {0..N}^V, normalised by log-sum-exp.
DistributionTable finite_stationary(const ModelParams& params, const Graph& graph,
                                    std::size_t max_states = kDefaultStateSpaceCap);

// log r(x, y); called only for y = x +/- e_v inside the box.
using LogRateFunction = std::function<double(std::span<const int> x, std::span<const int> y)>;

// max |log r(x,y) + W(x) - W(y) - log r(y,x)| over neighbouring states,
// with the model's own rates.
double detailed_balance_residual(const ModelParams& params, const Graph& graph,
                                 std::size_t max_states = kDefaultStateSpaceCap);
// Same check against arbitrary log-rates; W still comes from params.
double detailed_balance_residual(const ModelParams& params, const Graph& graph, const LogRateFunction& log_rate,
                                 std::size_t max_states = kDefaultStateSpaceCap);

// U(x) = (alpha/2) sum_v x_v^2 + beta sum_{edges uv} x_u x_v.
double potential_U(double alpha, double beta, const Graph& graph, std::span<const double> x);

// Potential of the rescaled chain X^n at a lattice point x^n:
// U(x^n) - alpha/(2 sqrt(n)) sum_v x^n_v.
double potential_Wn(double alpha, double beta, const Graph& graph, int n, std::span<const double> x);

// alpha < 0 and alpha + beta nu(G) < -tol. The boundary counts as
// non-integrable.
bool is_integrable(double alpha, double beta, const Graph& graph, double tol = kDefaultEigenTolerance);

struct NormalizingConstantEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double acceptance_rate = 0.0;
};

/// The limit law with density exp(U)/Z_U on the nonnegative orthant.
///
/// On the orthant exp(U) is the unnormalised density of the centred Gaussian
/// with precision P = -alpha I - beta A, so the law is that Gaussian
/// conditioned on the orthant. Construction factors P = L L^T; z = L^{-T} xi
/// with xi standard normal then has covariance P^{-1}.
class LimitMeasure {
 public:
  // DomainError if the integrability criterion fails or P is not positive
  // definite (possible for strongly negative beta on graphs whose smallest
  // adjacency eigenvalue is -nu, where exp(U) is integrable on the orthant
  // but is not a Gaussian density).
  LimitMeasure(double alpha, double beta, const Graph& graph);

  std::size_t dimension() const noexcept { return dim_; }
  const Eigen::MatrixXd& precision() const noexcept { return precision_; }
  Eigen::MatrixXd covariance() const;
  // (2 pi)^{d/2} det(P)^{-1/2}: the integral of exp(U) over all of R^d.
  double gaussian_normaliser() const noexcept { return gaussian_normaliser_; }

  // Rejection sampling from the centred Gaussian, accepting draws in the
  // orthant. ResourceError if the running acceptance rate falls below 1e-6
  // after a probe batch of 10^6 attempts.
  std::vector<std::vector<double>> sample(std::size_t count, std::uint64_t seed) const;

  // Z_U = normaliser x orthant probability; the latter is 1/2 exactly for
  // d = 1 and a Monte Carlo acceptance rate otherwise.
  NormalizingConstantEstimate normalizing_constant(std::size_t replicas, std::uint64_t seed) const;

 private:
  std::size_t dim_;
  Eigen::MatrixXd precision_;
  Eigen::MatrixXd lower_;  // Cholesky factor of the precision
  double gaussian_normaliser_;
};

NormalizingConstantEstimate normalizing_constant(double alpha, double beta, const Graph& graph,
                                                 std::size_t replicas, std::uint64_t seed);

std::vector<std::vector<double>> sample_limit_measure(double alpha, double beta, const Graph& graph,
                                                      std::size_t count, std::uint64_t seed);

}  // namespace oureflect
