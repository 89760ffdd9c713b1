"""Derived quantities along a trajectory: populations, purity, entropy,
and selected coherences."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IndexOutOfRangeError

__all__ = [
    "populations", "purity", "entropy", "coherence",
    "ObservableSeries", "observable_series",
]

# Eigenvalues of a numerically evolved state may dip slightly negative or
# sum to slightly off 1; anything beyond these bounds is a real error,
# not noise, and is reported instead of being silently repaired.
EIGENVALUE_FLOOR = -1e-7
TRACE_SLACK = 1e-7


def populations(trajectory):
    """p_i(t) = Re rho_ii(t); shape (n_times, d)."""
    return np.real(np.diagonal(trajectory.states, axis1=1, axis2=2)).copy()


def _spectra(trajectory):
    """Clamped, renormalized eigenvalues of each state (rows ascending)."""
    herm = 0.5 * (trajectory.states + np.conj(np.swapaxes(trajectory.states, 1, 2)))
    eigs = np.linalg.eigvalsh(herm)
    low = float(eigs.min())
    if low < EIGENVALUE_FLOOR:
        raise ValueError(f"state has eigenvalue {low:.3e} below {EIGENVALUE_FLOOR:.0e}")
    eigs = np.clip(eigs, 0.0, None)
    sums = eigs.sum(axis=1)
    if np.max(np.abs(sums - 1.0)) > TRACE_SLACK:
        raise ValueError("state trace deviates from 1 beyond tolerance")
    return eigs / sums[:, None]


def purity(trajectory):
    """pi(t) = Tr rho^2(t), from the same spectra the entropy uses."""
    eigs = _spectra(trajectory)
    return np.sum(eigs * eigs, axis=1)


def entropy(trajectory):
    """Von Neumann entropy S(t) = -sum lambda ln lambda, with 0 ln 0 = 0."""
    eigs = _spectra(trajectory)
    terms = np.where(eigs > 0.0, eigs * np.log(np.where(eigs > 0.0, eigs, 1.0)), 0.0)
    return -np.sum(terms, axis=1)


def coherence(trajectory, i, j):
    """The complex series rho_ij(t) for 1-based levels i, j."""
    d = trajectory.dim
    if not (1 <= i <= d and 1 <= j <= d):
        raise IndexOutOfRangeError(f"levels ({i}, {j}) outside 1..{d}")
    return trajectory.states[:, i - 1, j - 1].copy()


@dataclass
class ObservableSeries:
    """Everything the trajectory plots need, on one time grid."""

    times: np.ndarray
    populations: np.ndarray               # (n, d)
    purity: np.ndarray                    # (n,)
    entropy: np.ndarray                   # (n,)
    coherences: dict = field(default_factory=dict)  # (i, j) -> complex (n,)


def observable_series(trajectory, coherences=()):
    """Bundle populations, purity, entropy and the requested coherences."""
    eigs = _spectra(trajectory)
    terms = np.where(eigs > 0.0, eigs * np.log(np.where(eigs > 0.0, eigs, 1.0)), 0.0)
    return ObservableSeries(
        times=trajectory.times.copy(),
        populations=populations(trajectory),
        purity=np.sum(eigs * eigs, axis=1),
        entropy=-np.sum(terms, axis=1),
        coherences={(i, j): coherence(trajectory, i, j) for i, j in coherences},
    )
