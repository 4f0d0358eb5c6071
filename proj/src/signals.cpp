#include "signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "operators.hpp"

namespace hotvbl {

std::string_view to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::constant:
      return "constant";
    case SignalKind::linear:
      return "linear";
    case SignalKind::quadratic:
      return "quadratic";
  }
  return "unknown";
}

SignalKind signal_kind_from_string(std::string_view name) {
  if (name == "constant") return SignalKind::constant;
  if (name == "linear") return SignalKind::linear;
  if (name == "quadratic") return SignalKind::quadratic;
  throw InvalidArgument("unknown signal kind '" + std::string(name) + "'");
}

int degree(SignalKind kind) {
  switch (kind) {
    case SignalKind::constant:
      return 0;
    case SignalKind::linear:
      return 1;
    case SignalKind::quadratic:
      return 2;
  }
  return 0;
}

PiecewisePoly make_piecewise_poly(int n, int order, int k, Rng& rng, bool jumps_only) {
  const int first = jumps_only ? order : 0;
  const int slots = n - first;
  if (k < 1 || k > slots) {
    throw InvalidArgument("make_piecewise_poly: k must lie in [1, " + std::to_string(slots) + "]");
  }
  const SynthesisBundle bundle = build_synthesis(order, n);

  std::vector<int> positions(static_cast<std::size_t>(slots));
  std::iota(positions.begin(), positions.end(), first);
  // Partial Fisher-Yates: the first k entries become a uniform k-subset.
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, slots - 1);
    std::swap(positions[static_cast<std::size_t>(i)], positions[static_cast<std::size_t>(pick(rng))]);
  }
  std::normal_distribution<double> height(0.0, 1.0);
  PiecewisePoly out;
  out.t = Vector::Zero(n);
  for (int i = 0; i < k; ++i) out.t[positions[static_cast<std::size_t>(i)]] = height(rng);
  out.x = bundle.synthesis.cast<double>() * out.t;
  return out;
}

int ideal_jump_index(int n) { return n / 2; }

Vector make_ideal_signal(SignalKind kind, int n) {
  if (n < 8) throw InvalidArgument("make_ideal_signal: N must be at least 8");
  Vector x(n);
  const int jump = ideal_jump_index(n);
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    const bool right = i >= jump;
    switch (kind) {
      case SignalKind::constant:
        x[i] = right ? 1.0 : 0.0;
        break;
      case SignalKind::linear:
        x[i] = right ? 2.0 - s : s;
        break;
      case SignalKind::quadratic:
        x[i] = right ? 1.25 - (s - 0.5) * (s - 0.5) : s * s;
        break;
    }
  }
  return x;
}

Vector make_fourier_test_signal(int n) {
  if (n < 8) throw InvalidArgument("make_fourier_test_signal: N must be at least 8");
  Vector x(n);
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / n;
    if (s < 0.5) {
      x[i] = 0.25 + 1.5 * s;
    } else {
      const double r = s - 0.5;
      x[i] = -0.5 + 0.75 * std::sin(2.0 * std::numbers::pi * s) + 0.5 * r * r * r;
    }
  }
  return x;
}

int sparsity_count(const Vector& x, int order, double threshold) {
  const Matrix tc = build_completed(order, static_cast<int>(x.size())).cast<double>();
  const Vector t = tc * x;
  return static_cast<int>((t.array().abs() > threshold).count());
}

Matrix gaussian_forward(int rows, int cols, Rng& rng) {
  if (rows < 1 || cols < 1) throw DimensionError("gaussian_forward: dimensions must be positive");
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix a(rows, cols);
  // Row-major fill order so the draw sequence does not depend on storage.
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = dist(rng);
  }
  return a;
}

ComplexMatrix dft_forward(int n) {
  if (n < 1) throw DimensionError("dft_forward: N must be positive");
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const int offset = n / 2;
  for (int r = 0; r < n; ++r) {
    const long long freq = r - offset;
    for (int j = 0; j < n; ++j) {
      // Reduce the phase index mod N before scaling to keep it exact.
      const long long idx = ((freq * j) % n + n) % n;
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(idx) / n;
      f(r, j) = std::polar(scale, phase);
    }
  }
  return f;
}

}  // namespace hotvbl
