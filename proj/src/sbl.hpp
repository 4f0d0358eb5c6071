#pragma once

// Sparse Bayesian learning by evidence maximization for b = H t + n.
//
// Prior t_i ~ N(0, 1/a_i) with flat hyperpriors on log a_i and log beta.
// Each iteration computes the Gaussian posterior for t under the current
// (a, beta), then applies the fixed-point updates
//
//   gamma_i = 1 - a_i Sigma_ii,  a_i <- gamma_i / mu_i^2,
//   beta <- (J - sum gamma) / ||b - H mu||^2,
//
// where J is the number of measurements. Coordinates whose precision exceeds
// the prune threshold are removed from the active set for good.

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace hotvbl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kBetaCeiling = 1e12;
inline constexpr double kResidualFloor = 1e-15;
inline constexpr double kJitterCeiling = 1e-4;

struct SblOptions {
  int max_iterations = 2000;
  double convergence_tol = 1e-6;
  double prune_threshold = 1e10;
  std::optional<double> beta_init;  // empty: 100 / var(b)
  double a_init = 1.0;
  double jitter = 1e-10;

  void validate() const;
};

struct SblPosterior {
  Vector mean;
  Matrix covariance;
  Vector precisions;  // +inf on pruned coordinates
  double noise_precision = 0.0;
  // Entry 0 is the starting point, then one entry per iteration.
  std::vector<double> log_likelihood_history;
  int iterations = 0;
  bool converged = false;

  std::vector<int> support() const;
};

struct PosteriorMoments {
  Vector mean;
  Matrix covariance;
};

// Sigma = (beta H^T H + diag(a))^{-1}, mu = beta Sigma H^T b.
PosteriorMoments posterior_update(const Matrix& H, const Vector& b, const Vector& a, double beta,
                                  double jitter = 1e-10);

struct HyperparameterUpdate {
  Vector precisions;  // +inf where the coordinate is flagged for pruning
  double noise_precision = 0.0;
  Vector gamma;
  std::vector<bool> pruned;
};

HyperparameterUpdate hyperparameter_update(const Vector& mu, const Matrix& Sigma, const Vector& a,
                                           const Matrix& H, const Vector& b);

// log N(b | 0, C) with C = I / beta + H diag(1/a) H^T. Infinite a_i drop out.
double marginal_log_likelihood(const Matrix& H, const Vector& b, const Vector& a, double beta);

double auto_beta(const Vector& b);

SblPosterior run_sbl(const Matrix& H, const Vector& b, const SblOptions& opts = {});

}  // namespace hotvbl
