#pragma once

// l1-regularized HOTV estimators, solved by ADMM.
//
//   analysis:  min_x ||A x - b||^2 + lambda ||T_m x||_1
//   synthesis: min_t ||A V_m t - b||^2 + lambda ||t[m:]||_1,  x = V_m t
//
// Both go through the same splitting z = D v with D = T_m or D = [0 I].

#include <vector>

#include <Eigen/Dense>

namespace hotvbl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

std::vector<double> log_spaced(double lo, double hi, int count);

struct L1Options {
  double rho = 1.0;  // initial penalty; rebalanced when adaptive_rho is set
  int max_iterations = 5000;
  double primal_tol = 1e-6;
  double dual_tol = 1e-6;
  bool adaptive_rho = true;
  std::vector<double> lambda_grid = log_spaced(1e-4, 1e2, 50);

  void validate() const;
};

struct L1Result {
  Vector x;
  bool converged = false;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  // ||2 A^T (A x - b) + D^T w|| / max(1, ||2 A^T b||) with w the recovered
  // l1 subgradient; first-order optimality measure.
  double stationarity = 0.0;
  double objective = 0.0;
  std::vector<double> objective_history;
};

// sign(v) * max(|v| - kappa, 0)
double soft_threshold(double v, double kappa);

double analysis_objective(const Matrix& A, const Vector& b, int order, double lambda, const Vector& x);

L1Result solve_analysis_l1(const Matrix& A, const Vector& b, int order, double lambda,
                           const L1Options& opts = {});
L1Result solve_synthesis_l1(const Matrix& A, const Vector& b, int order, double lambda,
                            const L1Options& opts = {});

struct LambdaSweep {
  Vector x_best;
  double lambda_best = 0.0;
  double rel_err_best = 0.0;
  std::vector<double> rel_errs;  // one per grid point
  int unconverged = 0;
};

// Oracle tuning against a known truth: solves the analysis problem at every
// grid point and keeps the smallest relative error (ties go to smaller lambda).
LambdaSweep oracle_lambda_sweep(const Matrix& A, const Vector& b, int order, const Vector& x_true,
                                const L1Options& opts = {});

}  // namespace hotvbl
