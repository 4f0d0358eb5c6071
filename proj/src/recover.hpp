#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "operators.hpp"
#include "sbl.hpp"

namespace hotvbl {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct RecoveryProblem {
  Matrix forward;  // A, J x N
  Vector data;     // b, length J
  int order = 1;   // m
  SblOptions options;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

struct SignalPosterior {
  Vector mean;        // V_m mu
  Matrix covariance;  // V_m Sigma V_m^T
  SblPosterior edge_posterior;
  double confidence = 0.99;
  std::vector<Interval> intervals;

  Vector variance() const { return covariance.diagonal(); }
};

// Forms H = A V_m, learns the sparse representation t, and maps its Gaussian
// posterior back to the signal domain. Intervals are filled at `confidence`.
SignalPosterior recover(const RecoveryProblem& problem, double confidence = 0.99);

// Real-signal model with complex data: [Re A; Im A] and [Re b; Im b].
std::pair<Matrix, Vector> stack_complex(const ComplexMatrix& forward, const ComplexVector& data);

SignalPosterior recover_complex(const ComplexMatrix& forward, const ComplexVector& data, int order,
                                const SblOptions& options = {}, double confidence = 0.99);

// Two-sided standard normal quantile for a central interval of mass `level`.
double normal_two_sided_quantile(double level);

std::vector<Interval> confidence_intervals(const SignalPosterior& posterior, double level);

}  // namespace hotvbl
