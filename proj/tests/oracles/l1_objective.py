"""Reference optimal values for the l1 analysis problem.

    min_x ||A x - b||^2 + lambda ||T_m x||_1

on a formula-defined instance (no random numbers), solved with CVXPY. The
printed values are pasted into test_l1.cpp.
"""
import cvxpy as cp
import numpy as np

J, N = 16, 32


def instance():
    i = np.arange(J)[:, None]
    j = np.arange(N)[None, :]
    A = np.sin(0.7 * i + 1.3 * j + 0.5) + 0.1 * np.cos(2.1 * i * j / N)
    x = np.where(np.arange(N) < N // 2, 0.5, -1.0) + 0.02 * np.arange(N)
    b = A @ x + 0.05 * np.cos(0.37 * np.arange(J))
    return A, b


def diff(m):
    T = np.eye(N)
    for _ in range(m):
        T = T[1:] - T[:-1]
    return T


A, b = instance()
for m in (1, 2):
    for lam in (0.5, 2.0):
        x = cp.Variable(N)
        prob = cp.Problem(cp.Minimize(cp.sum_squares(A @ x - b) + lam * cp.norm1(diff(m) @ x)))
        prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12)
        print(f"m={m} lambda={lam}: {prob.value:.12g}")
