"""State propagation: closed form exp(B(t)) and the brute-force oracle.

The closed form unvec(exp(B(t)) vec(rho0)) is an exact solution of the
master equation exactly when vec(rho0) lies in the partially commutative
subspace (or when the generator satisfies one of the global
commutativity criteria). The oracle integrates the vectorized linear ODE
with an adaptive Runge-Kutta pair and knows nothing about matrix
exponentials or commutativity, so agreement between the two is a genuine
cross-check rather than a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import GridMismatchError, NonFiniteError, StepSizeUnderflowError
from .linalg import expm, unvec, vec
from .model import generator_at, integral_at

__all__ = [
    "Trajectory", "propagate_closed_form", "ode_oracle",
    "fedorov_residual", "compare", "trace_distance",
]

ORACLE_TOL = 1e-10


@dataclass(frozen=True)
class Trajectory:
    """Density matrices on a time grid starting at t = 0."""

    times: np.ndarray   # shape (n,), strictly increasing, times[0] == 0
    states: np.ndarray  # shape (n, d, d)
    method: str         # "closed-form" or "ode-oracle"

    @property
    def dim(self):
        return self.states.shape[1]


def _check_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("time grid must be a 1-d array")
    if grid[0] != 0.0:
        raise ValueError("time grid must start at 0")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("time grid must be strictly increasing")
    return grid


def propagate_closed_form(g, rho0, grid):
    """Evaluate rho(t) = unvec(exp(B(t)) vec(rho0)) on the grid.

    The formula is applied as written even for initial states outside the
    admissible subspace (callers use that for negative controls); it is a
    solution of the master equation only on the subspace.
    """
    grid = _check_grid(grid)
    d = g.dim
    v0 = vec(np.asarray(rho0, dtype=complex))
    states = np.empty((grid.size, d, d), dtype=complex)
    for i, t in enumerate(grid):
        states[i] = unvec(expm(integral_at(g, t)) @ v0, d)
    if not np.all(np.isfinite(states)):
        raise NonFiniteError("closed-form propagation produced non-finite entries")
    return Trajectory(times=grid, states=states, method="closed-form")


def ode_oracle(g, rho0, grid, tol=ORACLE_TOL):
    """Integrate vec(rho)' = L(t) vec(rho) with an adaptive RK45 pair.

    Local error is kept at `tol`; the solution is evaluated on the grid
    points through the integrator's dense output.
    """
    grid = _check_grid(grid)
    d = g.dim
    v0 = vec(np.asarray(rho0, dtype=complex))

    def rhs(t, y):
        return generator_at(g, t) @ y

    result = solve_ivp(
        rhs, (grid[0], grid[-1]), v0, method="RK45",
        rtol=tol, atol=tol, t_eval=grid)
    if not result.success:
        raise StepSizeUnderflowError(result.message)
    states = np.empty((grid.size, d, d), dtype=complex)
    for i in range(grid.size):
        states[i] = unvec(result.y[:, i], d)
    return Trajectory(times=grid, states=states, method="ode-oracle")


def fedorov_residual(g, alpha, grid):
    """How badly exp(B(t)) alpha fails the master equation on the grid.

    Returns max_t || d/dt [exp(B(t)) alpha] - L(t) exp(B(t)) alpha ||
    normalized by ||alpha||, with the derivative taken by central
    differences (h = 1e-5 times the grid step). Near zero for admissible
    alpha; order one for inadmissible alpha.
    """
    grid = _check_grid(grid)
    alpha = np.asarray(alpha, dtype=complex).reshape(-1)
    norm_alpha = float(np.linalg.norm(alpha))
    if norm_alpha == 0.0:
        return 0.0
    step = float(np.median(np.diff(grid))) if grid.size > 1 else 1.0
    h = 1e-5 * step

    def flow(t):
        return expm(integral_at(g, t)) @ alpha

    worst = 0.0
    for t in grid:
        if t - h < 0.0:
            continue
        derivative = (flow(t + h) - flow(t - h)) / (2.0 * h)
        residual = derivative - generator_at(g, t) @ flow(t)
        worst = max(worst, float(np.linalg.norm(residual)) / norm_alpha)
    return worst


def trace_distance(rho, sigma):
    """(1/2) ||rho - sigma||_1, the sum of singular values of the difference."""
    diff = np.asarray(rho, dtype=complex) - np.asarray(sigma, dtype=complex)
    return 0.5 * float(np.linalg.svd(diff, compute_uv=False).sum())


def compare(a, b):
    """Largest trace distance between two trajectories on the same grid."""
    if a.times.shape != b.times.shape or not np.array_equal(a.times, b.times):
        raise GridMismatchError("trajectories are on different time grids")
    return max(trace_distance(a.states[i], b.states[i])
               for i in range(a.times.size))
