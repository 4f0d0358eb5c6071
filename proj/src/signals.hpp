#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "metrics.hpp"

namespace hotvbl {

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

enum class SignalKind { constant, linear, quadratic };

std::string_view to_string(SignalKind kind);
SignalKind signal_kind_from_string(std::string_view name);
// Polynomial degree of the pieces; the matching HOTV order is degree + 1.
int degree(SignalKind kind);

struct PiecewisePoly {
  Vector x;
  Vector t;  // sparse representation, x = V_m t
};

// k spikes with standard normal heights at distinct positions, synthesized by
// V_m. Positions range over all N coordinates, or over m..N-1 (0-indexed)
// when `jumps_only` is set.
PiecewisePoly make_piecewise_poly(int n, int order, int k, Rng& rng, bool jumps_only = false);

// Two pieces of the given degree on s_i = i / (N - 1), unit jump at s = 1/2:
//   constant:  0          | 1
//   linear:    s          | 2 - s
//   quadratic: s^2        | 1.25 - (s - 1/2)^2
Vector make_ideal_signal(SignalKind kind, int n);

// Index of the first sample right of the jump in make_ideal_signal.
int ideal_jump_index(int n);

// Piecewise smooth function that no order up to 3 sparsifies exactly, on
// s_i = i / N:
//   s <  1/2:  0.25 + 1.5 s
//   s >= 1/2:  -0.5 + 0.75 sin(2 pi s) + 0.5 (s - 1/2)^3
Vector make_fourier_test_signal(int n);

// Entries of |Tc_m x| above `threshold`.
int sparsity_count(const Vector& x, int order, double threshold = 1e-8);

Matrix gaussian_forward(int rows, int cols, Rng& rng);
// Unitary DFT, rows indexed by centered frequencies -floor(N/2) .. N-1-floor(N/2).
ComplexMatrix dft_forward(int n);

}  // namespace hotvbl
