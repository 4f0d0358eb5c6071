#include "operators.hpp"

#include <string>

#include "errors.hpp"

namespace hotvbl {
namespace {

void check_shape(int order, int size) {
  if (order < 1) {
    throw DimensionError("order must be at least 1 (got " + std::to_string(order) + ")");
  }
  if (order >= size) {
    throw DimensionError("order must be less than size (order " + std::to_string(order) +
                         ", size " + std::to_string(size) + ")");
  }
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw DimensionError("synthesis operator entries overflow 64-bit integers");
  }
  return out;
}

// Column indices of the nonzeros in every row.
std::vector<std::vector<int>> row_support(const IntMatrix& m) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0) out[static_cast<std::size_t>(i)].push_back(static_cast<int>(j));
    }
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> difference_stencil(int order) {
  if (order < 0) throw DimensionError("stencil order must be nonnegative");
  std::vector<std::int64_t> c(static_cast<std::size_t>(order) + 1);
  std::int64_t binom = 1;
  for (int j = 0; j <= order; ++j) {
    c[static_cast<std::size_t>(j)] = ((order - j) % 2 == 0) ? binom : -binom;
    binom = binom * (order - j) / (j + 1);
  }
  return c;
}

AnalysisOperator::AnalysisOperator(int order, int size)
    : order_(order), size_(size) {
  check_shape(order, size);
  stencil_ = difference_stencil(order);
  matrix_ = IntMatrix::Zero(size - order, size);
  for (int i = 0; i < size - order; ++i) {
    for (int j = 0; j <= order; ++j) matrix_(i, i + j) = stencil_[static_cast<std::size_t>(j)];
  }
}

Vector AnalysisOperator::apply(const Vector& x) const {
  if (x.size() != size_) {
    throw DimensionError("apply_analysis: expected length " + std::to_string(size_) + ", got " +
                         std::to_string(x.size()));
  }
  Vector out(rows());
  for (int i = 0; i < rows(); ++i) {
    double acc = 0.0;
    for (int j = 0; j <= order_; ++j) acc += static_cast<double>(stencil_[static_cast<std::size_t>(j)]) * x[i + j];
    out[i] = acc;
  }
  return out;
}

Vector AnalysisOperator::apply_transpose(const Vector& y) const {
  if (y.size() != rows()) {
    throw DimensionError("apply_transpose: expected length " + std::to_string(rows()) +
                         ", got " + std::to_string(y.size()));
  }
  Vector out = Vector::Zero(size_);
  for (int i = 0; i < rows(); ++i) {
    for (int j = 0; j <= order_; ++j) out[i + j] += static_cast<double>(stencil_[static_cast<std::size_t>(j)]) * y[i];
  }
  return out;
}

AnalysisOperator build_analysis(int order, int size) { return AnalysisOperator(order, size); }

IntMatrix build_completed(int order, int size) {
  check_shape(order, size);
  IntMatrix out = IntMatrix::Zero(size, size);
  for (int r = 0; r < order; ++r) {
    const auto s = difference_stencil(r);
    for (int j = 0; j <= r; ++j) out(r, j) = s[static_cast<std::size_t>(j)];
  }
  const auto s = difference_stencil(order);
  for (int i = 0; i < size - order; ++i) {
    for (int j = 0; j <= order; ++j) out(order + i, i + j) = s[static_cast<std::size_t>(j)];
  }
  return out;
}

SynthesisBundle build_synthesis(int order, int size) {
  check_shape(order, size);
  SynthesisBundle bundle;
  bundle.order = order;
  bundle.size = size;
  bundle.completed = build_completed(order, size);

  // V_1: cumulative sum operator.
  IntMatrix v = IntMatrix::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j <= i; ++j) v(i, j) = 1;
  }
  // V_p[i, j] = V_{p-1}[i, j] for j < p, else sum_{k <= i} V_{p-1}[k, j]
  // (1-indexed); in 0-indexed columns the cut is j >= p - 1.
  for (int p = 2; p <= order; ++p) {
    for (int j = p - 1; j < size; ++j) {
      std::int64_t running = 0;
      for (int i = 0; i < size; ++i) {
        running = checked_add(running, v(i, j));
        v(i, j) = running;
      }
    }
  }
  bundle.synthesis = std::move(v);

  if (!is_left_inverse(bundle.synthesis, bundle.completed)) {
    throw InternalError("synthesis operator failed the exact inverse check (order " +
                        std::to_string(order) + ", size " + std::to_string(size) + ")");
  }
  return bundle;
}

Vector apply_analysis(const AnalysisOperator& op, const Vector& x) { return op.apply(x); }

IntMatrix build_operator(OperatorKind kind, int order, int size) {
  switch (kind) {
    case OperatorKind::analysis:
      return build_analysis(order, size).matrix();
    case OperatorKind::completed:
      return build_completed(order, size);
    case OperatorKind::synthesis:
      return build_synthesis(order, size).synthesis;
  }
  throw InvalidArgument("unknown operator kind");
}

bool is_left_inverse(const IntMatrix& synthesis, const IntMatrix& completed) {
  const Eigen::Index n = synthesis.rows();
  if (synthesis.cols() != n || completed.rows() != n || completed.cols() != n) return false;
  const auto support = row_support(completed);
  std::vector<std::int64_t> row(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), 0);
    for (Eigen::Index k = 0; k < n; ++k) {
      const std::int64_t vik = synthesis(i, k);
      if (vik == 0) continue;
      for (int j : support[static_cast<std::size_t>(k)]) {
        std::int64_t prod = 0;
        if (__builtin_mul_overflow(vik, completed(k, j), &prod)) return false;
        row[static_cast<std::size_t>(j)] += prod;
      }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (row[static_cast<std::size_t>(j)] != (i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

bool is_right_inverse(const IntMatrix& synthesis, const IntMatrix& completed) {
  const Eigen::Index n = synthesis.rows();
  if (synthesis.cols() != n || completed.rows() != n || completed.cols() != n) return false;
  const auto support = row_support(completed);
  std::vector<std::int64_t> row(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), 0);
    for (int k : support[static_cast<std::size_t>(i)]) {
      const std::int64_t tik = completed(i, k);
      for (Eigen::Index j = 0; j < n; ++j) {
        std::int64_t prod = 0;
        if (__builtin_mul_overflow(tik, synthesis(k, j), &prod)) return false;
        row[static_cast<std::size_t>(j)] += prod;
      }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (row[static_cast<std::size_t>(j)] != (i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

}  // namespace hotvbl
