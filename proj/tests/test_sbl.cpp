#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "errors.hpp"
#include "sbl.hpp"

using namespace hotvbl;

namespace {

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

Vector random_vector(int n, std::mt19937_64& rng) { return random_matrix(n, 1, rng); }

Vector random_positive(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 5.0);
  Vector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// log N(b | 0, C) built densely with an LU determinant, independent of the
// Cholesky path in the library.
double brute_force_log_likelihood(const Matrix& h, const Vector& b, const Vector& a, double beta) {
  Matrix c = Matrix::Identity(h.rows(), h.rows()) / beta;
  c += h * a.cwiseInverse().asDiagonal() * h.transpose();
  Eigen::FullPivLU<Matrix> lu(c);
  const double quad = b.dot(lu.solve(b));
  return -0.5 * (static_cast<double>(h.rows()) * std::log(2.0 * std::numbers::pi) + std::log(lu.determinant()) +
                 quad);
}

}  // namespace

TEST_CASE("scalar posterior update") {
  Matrix h(1, 1);
  h << 1.0;
  Vector b(1), a(1);
  b << 2.0;
  a << 1.0;
  const auto p = posterior_update(h, b, a, 1.0);
  CHECK(p.covariance(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.mean[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("vanishing prior on the identity model returns the data") {
  const int n = 7;
  std::mt19937_64 rng(1);
  const Vector b = random_vector(n, rng);
  const auto p = posterior_update(Matrix::Identity(n, n), b, Vector::Constant(n, 1e-12), 3.0);
  CHECK((p.mean - b).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("posterior update matches a direct dense inverse") {
  std::mt19937_64 rng(2);
  const Matrix h = random_matrix(8, 12, rng);
  const Vector b = random_vector(8, rng);
  const Vector a = random_positive(12, rng);
  const double beta = 2.5;
  const auto p = posterior_update(h, b, a, beta);

  Matrix precision = beta * h.transpose() * h;
  precision.diagonal() += a;
  const Matrix sigma = precision.fullPivLu().inverse();
  const Vector mu = beta * sigma * h.transpose() * b;
  CHECK((p.covariance - sigma).norm() <= 1e-10 * sigma.norm());
  CHECK((p.mean - mu).norm() <= 1e-10 * mu.norm());
  CHECK((p.covariance - p.covariance.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  // Stationarity of the posterior mean.
  const Vector lhs = precision * p.mean;
  const Vector rhs = beta * h.transpose() * b;
  CHECK((lhs - rhs).norm() <= 1e-8 * rhs.norm());
}

TEST_CASE("tiny prior and large beta reproduce least squares") {
  std::mt19937_64 rng(3);
  const Matrix h = random_matrix(30, 6, rng);
  const Vector b = random_vector(30, rng);
  const Vector ls = h.colPivHouseholderQr().solve(b);
  const auto p = posterior_update(h, b, Vector::Constant(6, 1e-12), 1e8);
  CHECK((p.mean - ls).norm() <= 1e-6 * ls.norm());
}

TEST_CASE("posterior update rejects bad arguments") {
  const Matrix h = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(posterior_update(h, Vector::Zero(2), Vector::Ones(3), 1.0), DimensionError);
  CHECK_THROWS_AS(posterior_update(h, Vector::Zero(3), Vector::Ones(2), 1.0), DimensionError);
  CHECK_THROWS_AS(posterior_update(h, Vector::Zero(3), Vector::Zero(3), 1.0), InvalidArgument);
  CHECK_THROWS_AS(posterior_update(h, Vector::Zero(3), Vector::Ones(3), 0.0), InvalidArgument);
}

TEST_CASE("hyperparameter update, scalar hand evaluation") {
  Matrix h(1, 1);
  h << 1.0;
  Vector b(1), mu(1), a(1);
  b << 2.0;
  mu << 1.0;
  a << 1.0;
  Matrix sigma(1, 1);
  sigma << 0.5;
  const auto u = hyperparameter_update(mu, sigma, a, h, b);
  CHECK(u.gamma[0] == doctest::Approx(0.5));
  CHECK(u.precisions[0] == doctest::Approx(0.5));
  CHECK(u.noise_precision == doctest::Approx(0.5));
  CHECK_FALSE(u.pruned[0]);
}

TEST_CASE("hyperparameter update flags zero-mean coordinates") {
  const Matrix h = Matrix::Identity(3, 3);
  Vector b(3), mu(3);
  b << 1.0, 0.0, 2.0;
  mu << 0.9, 0.0, 1.8;
  const auto u = hyperparameter_update(mu, 0.1 * Matrix::Identity(3, 3), Vector::Ones(3), h, b);
  CHECK(u.pruned[1]);
  CHECK(std::isinf(u.precisions[1]));
  CHECK_FALSE(u.pruned[0]);
  CHECK(u.precisions[0] > 0.0);
}

TEST_CASE("beta is clamped at the ceiling when the residual vanishes") {
  const Matrix h = Matrix::Identity(2, 2);
  const Vector b = Vector::Ones(2);
  const auto u = hyperparameter_update(b, 1e-3 * Matrix::Identity(2, 2), Vector::Ones(2), h, b);
  CHECK(u.noise_precision == kBetaCeiling);
}

TEST_CASE("gamma stays in [0, 1] for consistent posteriors") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix h = random_matrix(10, 15, rng);
    const Vector b = random_vector(10, rng);
    const Vector a = random_positive(15, rng);
    const auto p = posterior_update(h, b, a, 4.0);
    const auto u = hyperparameter_update(p.mean, p.covariance, a, h, b);
    CHECK(u.gamma.minCoeff() >= -1e-10);
    CHECK(u.gamma.maxCoeff() <= 1.0 + 1e-10);
    CHECK(u.noise_precision > 0.0);
  }
}

TEST_CASE("marginal log-likelihood, scalar hand evaluation") {
  Matrix h(1, 1);
  h << 1.0;
  Vector b(1), a(1);
  b << 2.0;
  a << 1.0;
  const double expect = -0.5 * (std::log(2.0 * std::numbers::pi) + std::log(2.0) + 2.0);
  CHECK(marginal_log_likelihood(h, b, a, 1.0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(marginal_log_likelihood(h, b, a, 1.0) == doctest::Approx(-2.2655).epsilon(1e-4));
}

TEST_CASE("marginal log-likelihood with zero data has no quadratic term") {
  std::mt19937_64 rng(5);
  const Matrix h = random_matrix(6, 9, rng);
  const Vector a = random_positive(9, rng);
  const double beta = 1.7;
  Matrix c = Matrix::Identity(6, 6) / beta + h * a.cwiseInverse().asDiagonal() * h.transpose();
  const double expect = -0.5 * (6.0 * std::log(2.0 * std::numbers::pi) + std::log(c.determinant()));
  CHECK(marginal_log_likelihood(h, Vector::Zero(6), a, beta) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("marginal log-likelihood matches a brute-force dense evaluation") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix h = random_matrix(7, 11, rng);
    const Vector b = random_vector(7, rng);
    const Vector a = random_positive(11, rng);
    const double ref = brute_force_log_likelihood(h, b, a, 0.8);
    CHECK(marginal_log_likelihood(h, b, a, 0.8) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("infinite precisions drop out of the likelihood") {
  std::mt19937_64 rng(7);
  const Matrix h = random_matrix(5, 4, rng);
  const Vector b = random_vector(5, rng);
  Vector a = random_positive(4, rng);
  a[2] = std::numeric_limits<double>::infinity();
  Matrix reduced(5, 3);
  reduced << h.col(0), h.col(1), h.col(3);
  Vector ra(3);
  ra << a[0], a[1], a[3];
  CHECK(marginal_log_likelihood(h, b, a, 2.0) == doctest::Approx(brute_force_log_likelihood(reduced, b, ra, 2.0)));
}

TEST_CASE("auto beta is 100 over the data variance") {
  Vector b(4);
  b << 1.0, 2.0, 3.0, 4.0;
  CHECK(auto_beta(b) == doctest::Approx(100.0 / 1.25));
  CHECK(auto_beta(Vector::Constant(3, 2.0)) == doctest::Approx(25.0));
  CHECK(auto_beta(Vector::Zero(3)) == 1.0);
}

TEST_CASE("options validation") {
  SblOptions o;
  CHECK_NOTHROW(o.validate());
  o.max_iterations = 0;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  o = {};
  o.convergence_tol = 0.0;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  o = {};
  o.prune_threshold = -1.0;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  o = {};
  o.beta_init = 0.0;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  o = {};
  o.jitter = -1e-3;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
}

TEST_CASE("identity model with one strong coefficient") {
  Vector b(4);
  b << 0.0, 0.0, 5.0, 0.0;
  SblOptions o;
  o.beta_init = 1e4;
  const auto post = run_sbl(Matrix::Identity(4, 4), b, o);
  CHECK(post.mean[2] == doctest::Approx(5.0).epsilon(1e-3));
  CHECK(post.support() == std::vector<int>{2});
  CHECK(post.mean[0] == 0.0);
  CHECK(post.covariance.row(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero data prunes everything") {
  const auto post = run_sbl(Matrix::Identity(5, 5), Vector::Zero(5));
  CHECK(post.support().empty());
  CHECK(post.mean == Vector::Zero(5));
  CHECK(post.converged);
}

TEST_CASE("noiseless sparse recovery, J = 50, M = 250, k = 2") {
  std::mt19937_64 rng(8);
  const Matrix h = random_matrix(50, 250, rng);
  Vector t = Vector::Zero(250);
  t[17] = 1.3;
  t[201] = -0.7;
  const auto post = run_sbl(h, h * t);
  CHECK((post.mean - t).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("run properties on random instances") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> rows(5, 40), cols(10, 60);
  for (int trial = 0; trial < 15; ++trial) {
    const int j = rows(rng), m = cols(rng);
    const Matrix h = random_matrix(j, m, rng);
    Vector t = Vector::Zero(m);
    for (int s = 0; s < 3; ++s) t[std::uniform_int_distribution<int>(0, m - 1)(rng)] = 2.0;
    const Vector b = h * t + 0.1 * random_vector(j, rng);
    const auto post = run_sbl(h, b);
    CAPTURE(trial);

    const auto& hist = post.log_likelihood_history;
    REQUIRE(hist.size() == static_cast<size_t>(post.iterations) + 1);
    for (size_t i = 1; i < hist.size(); ++i) CHECK(hist[i] >= hist[i - 1] - 1e-8);

    // The recorded evidence is the dense formula at the returned hyperparameters.
    const double dense = marginal_log_likelihood(h, b, post.precisions, post.noise_precision);
    CHECK(hist.back() == doctest::Approx(dense).epsilon(1e-8));

    const Matrix& s = post.covariance;
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    const auto support = post.support();
    if (!support.empty()) {
      const Matrix active = s(support, support);
      CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(active).eigenvalues().minCoeff() > 0.0);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::isinf(post.precisions[i])) {
        CHECK(post.mean[i] == 0.0);
        CHECK(s.row(i).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
}

TEST_CASE("both solve routes give the same posterior") {
  // More active coordinates than rows uses the data-space route; the final
  // statistics are compared with a direct dense solve on the support.
  std::mt19937_64 rng(10);
  const Matrix h = random_matrix(12, 30, rng);
  const Vector b = random_vector(12, rng);
  SblOptions o;
  o.max_iterations = 3;
  const auto post = run_sbl(h, b, o);
  const auto support = post.support();
  REQUIRE(static_cast<int>(support.size()) > 12);
  const Matrix hs = h(Eigen::all, support);
  const Vector as = post.precisions(support);
  const auto direct = posterior_update(hs, b, as, post.noise_precision);
  CHECK((post.mean(support) - direct.mean).norm() <= 1e-8 * direct.mean.norm());
  CHECK((Matrix(post.covariance(support, support)) - direct.covariance).norm() <= 1e-8 * direct.covariance.norm());
}

TEST_CASE("runs are deterministic") {
  std::mt19937_64 rng(11);
  const Matrix h = random_matrix(20, 40, rng);
  const Vector b = random_vector(20, rng);
  const auto p1 = run_sbl(h, b);
  const auto p2 = run_sbl(h, b);
  CHECK(p1.log_likelihood_history == p2.log_likelihood_history);
  CHECK(p1.mean == p2.mean);
  CHECK(p1.iterations == p2.iterations);
}

TEST_CASE("iteration exhaustion is reported, not thrown") {
  std::mt19937_64 rng(12);
  const Matrix h = random_matrix(20, 40, rng);
  const Vector b = random_vector(20, rng);
  SblOptions o;
  o.max_iterations = 2;
  const auto post = run_sbl(h, b, o);
  CHECK(post.iterations == 2);
  CHECK_FALSE(post.converged);
}

TEST_CASE("run_sbl input validation") {
  CHECK_THROWS_AS(run_sbl(Matrix::Identity(3, 3), Vector::Zero(4)), DimensionError);
  Vector b = Vector::Zero(3);
  b[1] = std::nan("");
  CHECK_THROWS_AS(run_sbl(Matrix::Identity(3, 3), b), InvalidArgument);
}
