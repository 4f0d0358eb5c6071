#pragma once

// High order total variation operators.
//
// The analysis operator T_m is the (N-m) x N banded matrix of m-th order
// forward-difference stencils, row i holding (-1)^(m-j) * C(m, j) at column
// i + j. Completing it with the 0th..(m-1)th order stencils (left aligned)
// gives the invertible N x N matrix Tc_m; its inverse V_m is the synthesis
// operator, lower triangular with nonnegative integer entries. Everything
// here is exact integer arithmetic; callers convert to double at the solver
// boundary.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hotvbl {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class OperatorKind { analysis, completed, synthesis };

// Signed coefficients of the order-p forward difference, lowest index first.
std::vector<std::int64_t> difference_stencil(int order);

class AnalysisOperator {
 public:
  AnalysisOperator(int order, int size);

  int order() const { return order_; }
  int size() const { return size_; }
  int rows() const { return size_ - order_; }
  const IntMatrix& matrix() const { return matrix_; }
  std::span<const std::int64_t> stencil() const { return stencil_; }

  // Banded T_m x; never forms the dense product.
  Vector apply(const Vector& x) const;
  // Banded T_m^T y.
  Vector apply_transpose(const Vector& y) const;

 private:
  int order_;
  int size_;
  std::vector<std::int64_t> stencil_;
  IntMatrix matrix_;
};

struct SynthesisBundle {
  int order = 0;
  int size = 0;
  IntMatrix completed;  // Tc_m
  IntMatrix synthesis;  // V_m = Tc_m^{-1}
};

AnalysisOperator build_analysis(int order, int size);
IntMatrix build_completed(int order, int size);
// V_m by the column cumulative-sum recursion from V_1; verifies V_m Tc_m = I.
SynthesisBundle build_synthesis(int order, int size);
Vector apply_analysis(const AnalysisOperator& op, const Vector& x);

IntMatrix build_operator(OperatorKind kind, int order, int size);

// Exact integer products that skip zeros of the banded factor. Used by the
// construction self-check and by the acceptance suite.
bool is_left_inverse(const IntMatrix& synthesis, const IntMatrix& completed);
bool is_right_inverse(const IntMatrix& synthesis, const IntMatrix& completed);

}  // namespace hotvbl
