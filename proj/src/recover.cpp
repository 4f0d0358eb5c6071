#include "recover.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "errors.hpp"

namespace hotvbl {

SignalPosterior recover(const RecoveryProblem& problem, double confidence) {
  const Eigen::Index n = problem.forward.cols();
  if (problem.forward.rows() < 1 || n < 1) throw DimensionError("recover: empty forward model");
  if (problem.data.size() != problem.forward.rows()) {
    throw DimensionError("recover: data length " + std::to_string(problem.data.size()) +
                         " does not match forward rows " + std::to_string(problem.forward.rows()));
  }
  if (problem.order < 1 || problem.order >= n) {
    throw DimensionError("recover: order must be in [1, N) (order " + std::to_string(problem.order) +
                         ", N " + std::to_string(n) + ")");
  }

  const SynthesisBundle bundle = build_synthesis(problem.order, static_cast<int>(n));
  const Matrix v = bundle.synthesis.cast<double>();
  const Matrix h = problem.forward * v;

  SignalPosterior out;
  out.edge_posterior = run_sbl(h, problem.data, problem.options);
  out.mean = v * out.edge_posterior.mean;

  // V Sigma V^T restricted to the support of the edge posterior.
  const std::vector<int> support = out.edge_posterior.support();
  if (support.empty()) {
    out.covariance = Matrix::Zero(n, n);
  } else {
    const Matrix vs = v(Eigen::all, support);
    const Matrix cov = vs * out.edge_posterior.covariance(support, support) * vs.transpose();
    out.covariance = 0.5 * (cov + cov.transpose());
  }
  out.confidence = confidence;
  out.intervals = confidence_intervals(out, confidence);
  return out;
}

std::pair<Matrix, Vector> stack_complex(const ComplexMatrix& forward, const ComplexVector& data) {
  const Eigen::Index j = forward.rows();
  if (data.size() != j) {
    throw DimensionError("stack_complex: data length " + std::to_string(data.size()) +
                         " does not match forward rows " + std::to_string(j));
  }
  Matrix a(2 * j, forward.cols());
  a.topRows(j) = forward.real();
  a.bottomRows(j) = forward.imag();
  Vector b(2 * j);
  b.head(j) = data.real();
  b.tail(j) = data.imag();
  return {std::move(a), std::move(b)};
}

SignalPosterior recover_complex(const ComplexMatrix& forward, const ComplexVector& data, int order,
                                const SblOptions& options, double confidence) {
  auto [a, b] = stack_complex(forward, data);
  return recover(RecoveryProblem{std::move(a), std::move(b), order, options}, confidence);
}

double normal_two_sided_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw InvalidArgument("confidence level must lie strictly between 0 and 1");
  }
  const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 0.5 + 0.5 * level);
}

std::vector<Interval> confidence_intervals(const SignalPosterior& posterior, double level) {
  const double z = normal_two_sided_quantile(level);
  std::vector<Interval> out(static_cast<std::size_t>(posterior.mean.size()));
  for (Eigen::Index i = 0; i < posterior.mean.size(); ++i) {
    const double var = posterior.covariance(i, i);
    if (var < -1e-10 * std::max(1.0, posterior.covariance.diagonal().cwiseAbs().maxCoeff())) {
      throw NumericalError("confidence_intervals: negative variance at index " + std::to_string(i));
    }
    const double half = z * std::sqrt(std::max(var, 0.0));
    out[static_cast<std::size_t>(i)] = {posterior.mean[i] - half, posterior.mean[i] + half};
  }
  return out;
}

}  // namespace hotvbl
