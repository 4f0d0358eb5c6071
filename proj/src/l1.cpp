#include "l1.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "operators.hpp"

namespace hotvbl {
namespace {

struct AdmmState {
  Vector z;
  Vector u;  // scaled dual
  double rho = 1.0;
  double lambda = 0.0;
};

void check_problem(const Matrix& a, const Vector& b, int order, double lambda, const char* what) {
  if (a.rows() < 1 || a.cols() < 1) throw DimensionError(std::string(what) + ": empty forward model");
  if (b.size() != a.rows()) {
    throw DimensionError(std::string(what) + ": data length does not match forward rows");
  }
  if (order < 1 || order >= a.cols()) {
    throw DimensionError(std::string(what) + ": order must be less than size");
  }
  if (!(lambda > 0.0)) throw InvalidArgument(std::string(what) + ": lambda must be positive");
}

// min_v ||F v - b||^2 + lambda ||D v||_1 via scaled ADMM on z = D v.
L1Result admm(const Matrix& f, const Vector& b, const Matrix& d, double lambda, const L1Options& opts,
              AdmmState* warm) {
  const Eigen::Index n = f.cols();
  const Eigen::Index p = d.rows();
  const Matrix q = 2.0 * f.transpose() * f;
  const Matrix dtd = d.transpose() * d;
  const Vector ftb = 2.0 * f.transpose() * b;

  AdmmState st;
  if (warm != nullptr && warm->z.size() == p) {
    st = *warm;
    st.u *= warm->lambda > 0.0 ? lambda / warm->lambda : 1.0;
  } else {
    st.z = Vector::Zero(p);
    st.u = Vector::Zero(p);
    st.rho = opts.rho;
  }
  st.lambda = lambda;

  Eigen::LLT<Matrix> llt;
  auto refactor = [&] {
    llt.compute(q + st.rho * dtd);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("l1 solver: normal matrix is singular (forward model misses the operator null space)");
    }
  };
  refactor();

  L1Result res;
  Vector x = Vector::Zero(n);
  Vector dx(p);
  int rebalances = 0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    res.iterations = it;
    x = llt.solve(ftb + st.rho * (d.transpose() * (st.z - st.u)));
    dx.noalias() = d * x;
    const Vector z_old = st.z;
    const double kappa = lambda / st.rho;
    st.z = (dx + st.u).unaryExpr([kappa](double v) { return soft_threshold(v, kappa); });
    st.u += dx - st.z;

    res.primal_residual = (dx - st.z).norm();
    res.dual_residual = st.rho * (d.transpose() * (st.z - z_old)).norm();
    res.objective_history.push_back((f * x - b).squaredNorm() + lambda * dx.lpNorm<1>());

    const double eps_pri = opts.primal_tol * std::max({1.0, dx.norm(), st.z.norm()});
    const double eps_dual = opts.dual_tol * std::max(1.0, st.rho * (d.transpose() * st.u).norm());
    if (res.primal_residual <= eps_pri && res.dual_residual <= eps_dual) {
      res.converged = true;
      break;
    }
    if (opts.adaptive_rho && it % 10 == 0 && rebalances < 100) {
      if (res.primal_residual > 10.0 * res.dual_residual) {
        st.rho *= 2.0;
        st.u *= 0.5;
        ++rebalances;
        refactor();
      } else if (res.dual_residual > 10.0 * res.primal_residual) {
        st.rho *= 0.5;
        st.u *= 2.0;
        ++rebalances;
        refactor();
      }
    }
  }

  const Vector grad = q * x - ftb + st.rho * (d.transpose() * st.u);
  res.stationarity = grad.norm() / std::max(1.0, ftb.norm());
  res.objective = res.objective_history.empty() ? 0.0 : res.objective_history.back();
  res.x = std::move(x);
  if (warm != nullptr) *warm = st;
  return res;
}

}  // namespace

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("log_spaced: invalid range");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double l0 = std::log10(lo);
  const double step = (std::log10(hi) - l0) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = std::pow(10.0, l0 + step * i);
  return out;
}

void L1Options::validate() const {
  if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  if (!(primal_tol > 0.0) || !(dual_tol > 0.0)) throw InvalidArgument("tolerances must be positive");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > 0.0)) throw InvalidArgument("lambda grid values must be positive");
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1])) {
      throw InvalidArgument("lambda grid must be strictly increasing");
    }
  }
}

double soft_threshold(double v, double kappa) {
  if (v > kappa) return v - kappa;
  if (v < -kappa) return v + kappa;
  return 0.0;
}

double analysis_objective(const Matrix& A, const Vector& b, int order, double lambda, const Vector& x) {
  const AnalysisOperator t(order, static_cast<int>(A.cols()));
  return (A * x - b).squaredNorm() + lambda * t.apply(x).lpNorm<1>();
}

L1Result solve_analysis_l1(const Matrix& A, const Vector& b, int order, double lambda,
                           const L1Options& opts) {
  opts.validate();
  check_problem(A, b, order, lambda, "solve_analysis_l1");
  const Matrix t = build_analysis(order, static_cast<int>(A.cols())).matrix().cast<double>();
  return admm(A, b, t, lambda, opts, nullptr);
}

L1Result solve_synthesis_l1(const Matrix& A, const Vector& b, int order, double lambda,
                            const L1Options& opts) {
  opts.validate();
  check_problem(A, b, order, lambda, "solve_synthesis_l1");
  const Eigen::Index n = A.cols();
  const Matrix v = build_synthesis(order, static_cast<int>(n)).synthesis.cast<double>();
  Matrix select = Matrix::Zero(n - order, n);
  select.rightCols(n - order).setIdentity();
  L1Result res = admm(A * v, b, select, lambda, opts, nullptr);
  res.x = v * res.x;
  return res;
}

LambdaSweep oracle_lambda_sweep(const Matrix& A, const Vector& b, int order, const Vector& x_true,
                                const L1Options& opts) {
  opts.validate();
  if (opts.lambda_grid.empty()) throw InvalidArgument("oracle_lambda_sweep: empty lambda grid");
  check_problem(A, b, order, opts.lambda_grid.front(), "oracle_lambda_sweep");
  if (x_true.size() != A.cols()) throw DimensionError("oracle_lambda_sweep: truth length mismatch");
  const double truth_norm = x_true.norm();
  if (!(truth_norm > 0.0)) throw InvalidArgument("oracle_lambda_sweep: zero truth");

  const Matrix t = build_analysis(order, static_cast<int>(A.cols())).matrix().cast<double>();
  LambdaSweep out;
  AdmmState warm;
  bool have_best = false;
  for (double lambda : opts.lambda_grid) {
    const L1Result r = admm(A, b, t, lambda, opts, &warm);
    if (!r.converged) ++out.unconverged;
    const double err = (r.x - x_true).norm() / truth_norm;
    out.rel_errs.push_back(err);
    if (!have_best || err < out.rel_err_best) {
      have_best = true;
      out.rel_err_best = err;
      out.lambda_best = lambda;
      out.x_best = r.x;
    }
  }
  return out;
}

}  // namespace hotvbl
