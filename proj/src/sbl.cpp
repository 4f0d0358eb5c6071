#include "sbl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace hotvbl {
namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// Cholesky of a symmetric positive-definite matrix, escalating a diagonal
// jitter (relative to the mean diagonal) by 10x up to kJitterCeiling.
Eigen::LLT<Matrix> factor_spd(const Matrix& p, double jitter, const char* what) {
  Eigen::LLT<Matrix> llt(p);
  if (llt.info() == Eigen::Success) return llt;
  if (jitter > 0.0 && p.rows() > 0) {
    const double scale = std::max(1.0, p.diagonal().cwiseAbs().mean());
    for (double j = jitter; j <= kJitterCeiling * (1.0 + 1e-9); j *= 10.0) {
      Matrix q = p;
      q.diagonal().array() += j * scale;
      llt.compute(q);
      if (llt.info() == Eigen::Success) return llt;
    }
  }
  throw NumericalError(std::string(what) + ": matrix is not positive definite after jitter escalation");
}

double log_det(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double beta_from_residual(double data_count, double gamma_sum, double residual_sq) {
  if (residual_sq < kResidualFloor) return kBetaCeiling;
  const double numerator = std::max(data_count - gamma_sum, 1e-12 * data_count);
  return std::min(numerator / residual_sq, kBetaCeiling);
}

void check_model(const Matrix& h, const Vector& b, const char* what) {
  if (b.size() != h.rows()) {
    throw DimensionError(std::string(what) + ": data length " + std::to_string(b.size()) +
                         " does not match " + std::to_string(h.rows()) + " model rows");
  }
  if (h.rows() < 1 || h.cols() < 1) throw DimensionError(std::string(what) + ": empty model");
}

// Posterior statistics restricted to the active coordinates.
struct ActiveStats {
  Vector mu;
  Vector gamma;
  double log_likelihood = 0.0;
  double residual_sq = 0.0;
  Matrix sigma;  // filled only on request
};

class Evaluator {
 public:
  Evaluator(const Matrix& h, const Vector& b, double jitter) : h_(h), b_(b), jitter_(jitter) {}

  ActiveStats evaluate(const std::vector<int>& active, const Vector& a, double beta,
                       bool want_sigma = false) {
    const Eigen::Index j = h_.rows();
    if (active.empty()) {
      ActiveStats s;
      s.residual_sq = b_.squaredNorm();
      s.log_likelihood = -0.5 * (static_cast<double>(j) * (kLog2Pi - std::log(beta)) + beta * s.residual_sq);
      return s;
    }
    if (static_cast<Eigen::Index>(active.size()) > j) return dual(active, a, beta, want_sigma);
    return primal(active, a, beta, want_sigma);
  }

 private:
  // Works with the J x J data covariance C = I/beta + H D H^T, D = diag(1/a).
  ActiveStats dual(const std::vector<int>& active, const Vector& a, double beta, bool want_sigma) {
    const Matrix hs = h_(Eigen::all, active);
    const Vector d = a(active).cwiseInverse();
    Matrix c = hs * d.asDiagonal() * hs.transpose();
    c.diagonal().array() += 1.0 / beta;
    const auto llt = factor_spd(c, jitter_, "data covariance");
    const Matrix w = llt.matrixL().solve(hs);
    const Vector z = llt.matrixL().solve(b_);

    ActiveStats s;
    s.gamma = d.cwiseProduct(w.colwise().squaredNorm().transpose());
    s.mu = d.cwiseProduct(w.transpose() * z);
    s.residual_sq = (b_ - hs * s.mu).squaredNorm();
    s.log_likelihood = -0.5 * (static_cast<double>(h_.rows()) * kLog2Pi + log_det(llt) + z.squaredNorm());
    if (want_sigma) {
      const Matrix wd = w * d.asDiagonal();
      s.sigma = Matrix(d.asDiagonal()) - wd.transpose() * wd;
    }
    return s;
  }

  // Works with the M x M posterior precision P = beta H^T H + diag(a).
  ActiveStats primal(const std::vector<int>& active, const Vector& a, double beta, bool want_sigma) {
    if (gram_.size() == 0) {
      gram_ = h_.transpose() * h_;
      htb_ = h_.transpose() * b_;
    }
    const Vector as = a(active);
    Matrix p = beta * gram_(active, active);
    p.diagonal() += as;
    const auto llt = factor_spd(p, jitter_, "posterior precision");
    const Matrix sigma = llt.solve(Matrix::Identity(p.rows(), p.cols()));

    ActiveStats s;
    s.mu = llt.solve(beta * htb_(active));
    s.gamma = Vector::Ones(as.size()) - as.cwiseProduct(sigma.diagonal());
    s.residual_sq = (b_ - h_(Eigen::all, active) * s.mu).squaredNorm();
    const double jd = static_cast<double>(h_.rows());
    const double log_det_c = -jd * std::log(beta) - as.array().log().sum() + log_det(llt);
    const double quad = beta * s.residual_sq + as.dot(s.mu.cwiseAbs2());
    s.log_likelihood = -0.5 * (jd * kLog2Pi + log_det_c + quad);
    if (want_sigma) s.sigma = sigma;
    return s;
  }

  const Matrix& h_;
  const Vector& b_;
  double jitter_;
  Matrix gram_;
  Vector htb_;
};

}  // namespace

void SblOptions::validate() const {
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  if (!(convergence_tol > 0.0)) throw InvalidArgument("convergence_tol must be positive");
  if (!(prune_threshold > 0.0)) throw InvalidArgument("prune_threshold must be positive");
  if (!(a_init > 0.0) || !std::isfinite(a_init)) throw InvalidArgument("a_init must be positive");
  if (beta_init && (!(*beta_init > 0.0) || !std::isfinite(*beta_init))) {
    throw InvalidArgument("beta_init must be positive");
  }
  if (!(jitter >= 0.0)) throw InvalidArgument("jitter must be nonnegative");
}

std::vector<int> SblPosterior::support() const {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < precisions.size(); ++i) {
    if (std::isfinite(precisions[i])) out.push_back(static_cast<int>(i));
  }
  return out;
}

PosteriorMoments posterior_update(const Matrix& H, const Vector& b, const Vector& a, double beta,
                                  double jitter) {
  check_model(H, b, "posterior_update");
  if (a.size() != H.cols()) throw DimensionError("posterior_update: precision length mismatch");
  if (!(a.array() > 0.0).all() || !a.allFinite()) {
    throw InvalidArgument("posterior_update: precisions must be positive and finite");
  }
  if (!(beta > 0.0)) throw InvalidArgument("posterior_update: beta must be positive");

  Matrix p = beta * H.transpose() * H;
  p.diagonal() += a;
  const auto llt = factor_spd(p, jitter, "posterior precision");
  PosteriorMoments out;
  out.covariance = llt.solve(Matrix::Identity(p.rows(), p.cols()));
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  out.mean = llt.solve(beta * (H.transpose() * b));
  return out;
}

HyperparameterUpdate hyperparameter_update(const Vector& mu, const Matrix& Sigma, const Vector& a,
                                           const Matrix& H, const Vector& b) {
  check_model(H, b, "hyperparameter_update");
  const Eigen::Index m = H.cols();
  if (mu.size() != m || a.size() != m || Sigma.rows() != m || Sigma.cols() != m) {
    throw DimensionError("hyperparameter_update: posterior dimensions do not match the model");
  }
  HyperparameterUpdate out;
  out.precisions.resize(m);
  out.gamma = Vector::Zero(m);
  out.pruned.assign(static_cast<std::size_t>(m), false);
  double gamma_sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!std::isfinite(a[i])) {
      out.precisions[i] = std::numeric_limits<double>::infinity();
      out.pruned[static_cast<std::size_t>(i)] = true;
      continue;
    }
    const double g = 1.0 - a[i] * Sigma(i, i);
    out.gamma[i] = g;
    gamma_sum += g;
    if (mu[i] == 0.0 || !(g > 0.0)) {
      out.precisions[i] = std::numeric_limits<double>::infinity();
      out.pruned[static_cast<std::size_t>(i)] = true;
    } else {
      out.precisions[i] = g / (mu[i] * mu[i]);
    }
  }
  out.noise_precision = beta_from_residual(static_cast<double>(H.rows()), gamma_sum, (b - H * mu).squaredNorm());
  return out;
}

double marginal_log_likelihood(const Matrix& H, const Vector& b, const Vector& a, double beta) {
  check_model(H, b, "marginal_log_likelihood");
  if (a.size() != H.cols()) throw DimensionError("marginal_log_likelihood: precision length mismatch");
  if (!(beta > 0.0)) throw InvalidArgument("marginal_log_likelihood: beta must be positive");
  Matrix c = Matrix::Identity(H.rows(), H.rows()) / beta;
  for (Eigen::Index i = 0; i < H.cols(); ++i) {
    if (!(a[i] > 0.0)) throw InvalidArgument("marginal_log_likelihood: precisions must be positive");
    if (std::isfinite(a[i])) c.noalias() += H.col(i) * H.col(i).transpose() / a[i];
  }
  Eigen::LLT<Matrix> llt(c);
  if (llt.info() != Eigen::Success) throw NumericalError("marginal_log_likelihood: C is not positive definite");
  const Vector z = llt.matrixL().solve(b);
  return -0.5 * (static_cast<double>(H.rows()) * kLog2Pi + log_det(llt) + z.squaredNorm());
}

double auto_beta(const Vector& b) {
  if (b.size() == 0) return 1.0;
  const double mean = b.mean();
  const double var = (b.array() - mean).square().mean();
  double denom = var;
  if (!(denom > 1e-300)) denom = b.squaredNorm() / static_cast<double>(b.size());
  if (!(denom > 1e-300)) return 1.0;
  return std::min(100.0 / denom, kBetaCeiling);
}

SblPosterior run_sbl(const Matrix& H, const Vector& b, const SblOptions& opts) {
  opts.validate();
  check_model(H, b, "run_sbl");
  if (!b.allFinite()) throw InvalidArgument("run_sbl: data contains non-finite values");
  if (!H.allFinite()) throw InvalidArgument("run_sbl: model contains non-finite values");

  const Eigen::Index m = H.cols();
  const double data_count = static_cast<double>(H.rows());
  const double inf = std::numeric_limits<double>::infinity();

  Evaluator eval(H, b, opts.jitter);
  Vector a = Vector::Constant(m, opts.a_init);
  std::vector<int> active(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) active[static_cast<std::size_t>(i)] = static_cast<int>(i);
  double beta = opts.beta_init.value_or(auto_beta(b));

  SblPosterior post;
  ActiveStats stats = eval.evaluate(active, a, beta);
  post.log_likelihood_history.push_back(stats.log_likelihood);

  for (int it = 1; it <= opts.max_iterations; ++it) {
    post.iterations = it;
    const double gamma_sum = stats.gamma.sum();

    // Fixed-point update with pruning.
    Vector next_a = a;
    std::vector<int> next_active;
    next_active.reserve(active.size());
    bool pruned_any = false;
    for (std::size_t p = 0; p < active.size(); ++p) {
      const int i = active[p];
      const double g = stats.gamma[static_cast<Eigen::Index>(p)];
      const double mu = stats.mu[static_cast<Eigen::Index>(p)];
      const double updated = (mu != 0.0 && g > 0.0) ? g / (mu * mu) : inf;
      if (!(updated <= opts.prune_threshold)) {
        next_a[i] = inf;
        pruned_any = true;
      } else {
        next_a[i] = updated;
        next_active.push_back(i);
      }
    }
    double next_beta = beta_from_residual(data_count, gamma_sum, stats.residual_sq);
    ActiveStats next = eval.evaluate(next_active, next_a, next_beta);

    // The fixed-point step is not guaranteed to increase the evidence; fall
    // back to the EM step, which is, whenever it would decrease.
    const double slack = 1e-12 * std::max(1.0, std::abs(stats.log_likelihood));
    if (next.log_likelihood < stats.log_likelihood - slack) {
      next_a = a;
      next_active = active;
      pruned_any = false;
      for (std::size_t p = 0; p < active.size(); ++p) {
        const int i = active[p];
        const auto q = static_cast<Eigen::Index>(p);
        const double sigma_ii = (1.0 - stats.gamma[q]) / a[i];
        next_a[i] = 1.0 / (stats.mu[q] * stats.mu[q] + sigma_ii);
      }
      next_beta = std::min(data_count / (stats.residual_sq + gamma_sum / beta), kBetaCeiling);
      next = eval.evaluate(next_active, next_a, next_beta);
    }

    double change = 0.0;
    for (int i : next_active) change = std::max(change, std::abs(next_a[i] - a[i]) / a[i]);

    a = std::move(next_a);
    active = std::move(next_active);
    beta = next_beta;
    stats = std::move(next);
    post.log_likelihood_history.push_back(stats.log_likelihood);

    if (active.empty() || (!pruned_any && change < opts.convergence_tol)) {
      post.converged = true;
      break;
    }
  }

  post.precisions = a;
  post.noise_precision = beta;
  post.mean = Vector::Zero(m);
  post.covariance = Matrix::Zero(m, m);
  if (!active.empty()) {
    const ActiveStats final_stats = eval.evaluate(active, a, beta, true);
    post.mean(active) = final_stats.mu;
    const Matrix sym = 0.5 * (final_stats.sigma + final_stats.sigma.transpose());
    post.covariance(active, active) = sym;
  }
  return post;
}

}  // namespace hotvbl
