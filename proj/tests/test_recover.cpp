#include <doctest.h>

#include <complex>
#include <random>

#include "errors.hpp"
#include "operators.hpp"
#include "recover.hpp"

using namespace hotvbl;

namespace {

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

ComplexMatrix random_complex(int rows, int cols, std::mt19937_64& rng) {
  ComplexMatrix m(rows, cols);
  m.real() = random_matrix(rows, cols, rng);
  m.imag() = random_matrix(rows, cols, rng);
  return m;
}

// Reference quantiles from a standard normal table.
constexpr double kZ99 = 2.5758293035489004;
constexpr double kZ50 = 0.6744897501960817;

}  // namespace

TEST_CASE("noiseless step on the identity model") {
  Vector b(6);
  b << 0, 0, 0, 1, 1, 1;
  const auto post = recover({Matrix::Identity(6, 6), b, 1, {}});
  CHECK((post.mean - b).cwiseAbs().maxCoeff() <= 1e-3);
  CHECK(post.edge_posterior.support() == std::vector<int>{3});
}

TEST_CASE("constant data activates only the completion coordinate") {
  const Vector b = Vector::Constant(10, 2.5);
  const auto post = recover({Matrix::Identity(10, 10), b, 1, {}});
  CHECK((post.mean - b).cwiseAbs().maxCoeff() <= 1e-3);
  CHECK(post.edge_posterior.support() == std::vector<int>{0});
}

TEST_CASE("Gaussian forward model, two jumps, noiseless") {
  std::mt19937_64 rng(21);
  const int n = 250;
  const Matrix a = random_matrix(50, n, rng);
  Vector x = Vector::Zero(n);
  x.segment(80, 170).array() += 0.9;
  x.segment(190, 60).array() -= 1.4;
  const auto post = recover({a, a * x, 1, {}});
  CHECK((post.mean - x).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("signal statistics are the synthesized edge statistics") {
  std::mt19937_64 rng(22);
  const int n = 40;
  const Matrix a = random_matrix(30, n, rng);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = i < 20 ? 0.05 * i : 2.0 - 0.03 * i;
  std::normal_distribution<double> normal;
  Vector b = a * x;
  for (auto& v : b) v += 0.05 * normal(rng);
  const auto post = recover({a, b, 2, {}});
  const Matrix v = build_synthesis(2, n).synthesis.cast<double>();
  const Vector mean = v * post.edge_posterior.mean;
  CHECK((post.mean - mean).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, mean.cwiseAbs().maxCoeff()));
  const Matrix cov = v * post.edge_posterior.covariance * v.transpose();
  CHECK((post.covariance - cov).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, cov.cwiseAbs().maxCoeff()));
  CHECK((post.covariance - post.covariance.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  const double scale = std::max(1.0, post.covariance.cwiseAbs().maxCoeff());
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(post.covariance).eigenvalues().minCoeff() >= -1e-10 * scale);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& iv = post.intervals[static_cast<size_t>(i)];
    CHECK(iv.upper - post.mean[i] == doctest::Approx(post.mean[i] - iv.lower));
  }
}

TEST_CASE("recover validates its inputs") {
  CHECK_THROWS_AS(recover({Matrix::Identity(4, 4), Vector::Zero(3), 1, {}}), DimensionError);
  CHECK_THROWS_AS(recover({Matrix::Identity(4, 4), Vector::Zero(4), 4, {}}), DimensionError);
  CHECK_THROWS_AS(recover({Matrix::Identity(4, 4), Vector::Ones(4), 1, {}}, 1.0), InvalidArgument);
}

TEST_CASE("stack_complex hand cases") {
  ComplexMatrix a(1, 1);
  a << std::complex<double>(0, 1);
  ComplexVector b(1);
  b << std::complex<double>(1, 2);
  const auto [sa, sb] = stack_complex(a, b);
  CHECK(sa(0, 0) == 0.0);
  CHECK(sa(1, 0) == 1.0);
  CHECK(sb[0] == 1.0);
  CHECK(sb[1] == 2.0);

  std::mt19937_64 rng(23);
  const Matrix ra = random_matrix(3, 4, rng);
  const Matrix rb = random_matrix(3, 1, rng);
  const auto [ta, tb] = stack_complex(ra.cast<std::complex<double>>(), rb.col(0).cast<std::complex<double>>());
  CHECK(ta.topRows(3) == ra);
  CHECK(ta.bottomRows(3) == Matrix::Zero(3, 4));
  CHECK(tb.head(3) == rb.col(0));
  CHECK(tb.tail(3) == Vector::Zero(3));

  CHECK_THROWS_AS(stack_complex(ComplexMatrix::Zero(3, 2), ComplexVector::Zero(2)), DimensionError);
}

TEST_CASE("stacking preserves residual norms") {
  std::mt19937_64 rng(24);
  const ComplexMatrix a = random_complex(4, 6, rng);
  const ComplexVector b = random_complex(4, 1, rng).col(0);
  const auto [sa, sb] = stack_complex(a, b);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector t = random_matrix(6, 1, rng).col(0);
    const double complex_sq = (b - a * t.cast<std::complex<double>>()).squaredNorm();
    const double stacked_sq = (sb - sa * t).squaredNorm();
    CHECK(std::abs(complex_sq - stacked_sq) <= 1e-12 * std::max(1.0, complex_sq));
  }
}

TEST_CASE("complex recovery equals recovery on the stacked problem") {
  std::mt19937_64 rng(25);
  const ComplexMatrix a = random_complex(12, 16, rng);
  Vector x = Vector::Zero(16);
  x.tail(8).array() = 1.0;
  ComplexVector b = a * x.cast<std::complex<double>>();
  b += 0.01 * random_complex(12, 1, rng).col(0);
  const auto direct = recover_complex(a, b, 1);
  const auto [sa, sb] = stack_complex(a, b);
  const auto stacked = recover({sa, sb, 1, {}});
  CHECK(direct.mean == stacked.mean);
  CHECK(direct.covariance == stacked.covariance);
}

TEST_CASE("normal quantiles") {
  CHECK(normal_two_sided_quantile(0.99) == doctest::Approx(kZ99).epsilon(1e-12));
  CHECK(normal_two_sided_quantile(0.5) == doctest::Approx(kZ50).epsilon(1e-12));
  CHECK_THROWS_AS(normal_two_sided_quantile(0.0), InvalidArgument);
  CHECK_THROWS_AS(normal_two_sided_quantile(1.0), InvalidArgument);
}

TEST_CASE("confidence intervals from marginal variances") {
  SignalPosterior p;
  p.mean = Vector::Ones(3);
  p.covariance = Matrix::Zero(3, 3);
  p.covariance(1, 1) = 1.0;
  p.covariance(2, 2) = 0.25;
  const auto iv = confidence_intervals(p, 0.99);
  CHECK(iv[0].lower == 1.0);
  CHECK(iv[0].upper == 1.0);
  CHECK(iv[1].lower == doctest::Approx(-1.5758).epsilon(1e-4));
  CHECK(iv[1].upper == doctest::Approx(3.5758).epsilon(1e-4));
  const auto narrow = confidence_intervals(p, 0.95);
  const auto half = confidence_intervals(p, 0.5);
  for (int i = 1; i < 3; ++i) {
    const double w99 = iv[static_cast<size_t>(i)].upper - iv[static_cast<size_t>(i)].lower;
    const double w95 = narrow[static_cast<size_t>(i)].upper - narrow[static_cast<size_t>(i)].lower;
    const double w50 = half[static_cast<size_t>(i)].upper - half[static_cast<size_t>(i)].lower;
    CHECK(w99 > w95);
    CHECK(w95 > w50);
  }
  CHECK(half[1].upper - 1.0 == doctest::Approx(kZ50));
  CHECK_THROWS_AS(confidence_intervals(p, 1.5), InvalidArgument);
  p.covariance(2, 2) = -1.0;
  CHECK_THROWS_AS(confidence_intervals(p, 0.9), NumericalError);
}
