"""Solvability classification of time-dependent generators.

Three criteria are checked, in decreasing order of strength:

* functional commutativity, [L(t), L(s)] = 0 for all t, s;
* integral commutativity, [L(t), B(t)] = 0 with B(t) = int_0^t L;
* partial commutativity: the set of vectors alpha with
  [L(t), B(t)^n] alpha = 0 for all n forms a subspace M, and on M the
  closed form exp(B(t)) alpha solves the master equation even when the
  two global criteria fail.

M is computed as the kernel of a positive semidefinite operator

    Gamma(t) = sum_{n=1}^{cap} C_n(t)^dag C_n(t),
    C_n(t) = [L(t), B(t)^n] / ||B(t)^n||,

because the kernel of a sum of PSD terms R^dag R is exactly the
intersection of the individual kernels. Summing Gamma over several sample
times intersects the per-time subspaces; the power chain is truncated at
the numerically determined degree of the minimal polynomial of B (higher
powers are linear combinations of lower ones and add no constraints).
The 1/||B^n|| scaling keeps geometrically growing powers from drowning
the small-n contributions in floating point; it leaves every kernel
unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotADensityMatrixError
from .linalg import DEFAULT_REL_TOL, SubspaceBasis, minimal_poly_degree, null_space
from .model import generator_at, integral_at

__all__ = [
    "default_sample_times", "functional_commutativity",
    "integral_commutativity", "gamma_operator", "partial_subspace",
    "admissible", "classify", "CommutativityReport", "excluded_coordinate",
]

RESIDUAL_BOUND = 1e-8
ADMISSIBLE_TOL = 1e-8

_STRUCTURED_TIMES = (0.1, 0.5, 1.0, 2.0, math.pi, 5.0, 8.0)
_RANDOM_SEED = 42
_RANDOM_COUNT = 5


def default_sample_times(time_scale=1.0):
    """Structured sample times plus a fixed pseudo-random handful.

    `time_scale` stretches the grid (pass 1/omega for models whose rates
    oscillate at frequency omega).
    """
    rng = np.random.default_rng(_RANDOM_SEED)
    extra = rng.uniform(0.05, 10.0, size=_RANDOM_COUNT)
    return sorted(float(t) * time_scale for t in (*_STRUCTURED_TIMES, *extra))


def _rel_commutator(a, b):
    """||[A, B]|| relative to ||A|| ||B|| (Frobenius)."""
    num = np.linalg.norm(a @ b - b @ a)
    den = np.linalg.norm(a) * np.linalg.norm(b)
    return 0.0 if num == 0.0 else num / den


def functional_commutativity(g, times=None, tol=DEFAULT_REL_TOL):
    """Whether L(t) and L(s) commute for all pairs of times.

    Two sufficient checks must both pass: the constant components
    {L_H, L_k} of the decomposition commute pairwise (a commuting
    decomposition characterizes functionally commutative families), and
    the sampled generators commute pairwise. Commutator norms are
    compared against `tol` relative to the operand norms.
    """
    pairwise, sampled = _functional_checks(g, times, tol)
    return pairwise and sampled


def _functional_checks(g, times=None, tol=DEFAULT_REL_TOL):
    if times is None:
        times = default_sample_times()
    if len(times) < 2:
        raise ValueError("need at least two sample times")
    components = [g.drift] + [p.matrix for p in g.parts]
    pairwise = all(
        _rel_commutator(components[i], components[j]) <= tol
        for i in range(len(components)) for j in range(i + 1, len(components)))
    sampled_mats = [generator_at(g, t) for t in times]
    sampled = all(
        _rel_commutator(sampled_mats[i], sampled_mats[j]) <= tol
        for i in range(len(sampled_mats)) for j in range(i + 1, len(sampled_mats)))
    return pairwise, sampled


def integral_commutativity(g, times=None, tol=DEFAULT_REL_TOL):
    """Whether [L(t), B(t)] vanishes at every sampled time."""
    if times is None:
        times = default_sample_times()
    return all(
        _rel_commutator(generator_at(g, t), integral_at(g, t)) <= tol
        for t in times)


def gamma_operator(g, t, power_cap):
    """The PSD operator whose kernel is the partially commutative
    subspace at time t; see the module docstring."""
    if power_cap < 1:
        raise ValueError("power_cap must be at least 1")
    gen = generator_at(g, t)
    b = integral_at(g, t)
    power = np.eye(g.mu, dtype=complex)
    total = np.zeros((g.mu, g.mu), dtype=complex)
    for _ in range(power_cap):
        power = power @ b
        norm = np.linalg.norm(power)
        if norm == 0.0:
            continue
        c = (gen @ power - power @ gen) / norm
        total += c.conj().T @ c
    return 0.5 * (total + total.conj().T)


def _power_cap(g, times, rel_tol):
    """Highest power of B worth including: the minimal-polynomial degree
    of B at the median sample time bounds the useful chain length."""
    t0 = sorted(times)[len(times) // 2]
    degree = minimal_poly_degree(integral_at(g, t0), rel_tol)
    return max(1, min(g.mu - 1, degree - 1))


def partial_subspace(g, times=None, rel_tol=DEFAULT_REL_TOL):
    """Basis of M, the subspace of admissible initial vectors.

    Gamma(t) is accumulated over the sample times (at least three
    distinct positive ones) and the kernel of the sum is returned.
    """
    if times is None:
        times = default_sample_times()
    _check_subspace_times(times)
    cap = _power_cap(g, times, rel_tol)
    total = np.zeros((g.mu, g.mu), dtype=complex)
    for t in times:
        total += gamma_operator(g, t, cap)
    return null_space(total, rel_tol)


def _check_subspace_times(times):
    positive = {float(t) for t in times if t > 0}
    if len(positive) < 3:
        raise ValueError("need at least three distinct positive sample times")


def admissible(rho0, subspace, tol=ADMISSIBLE_TOL):
    """Whether the density matrix rho0 vectorizes into the subspace.

    Raises :class:`NotADensityMatrixError` when rho0 fails Hermiticity,
    unit trace, or positivity within `tol`.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if np.max(np.abs(rho0 - rho0.conj().T)) > tol:
        raise NotADensityMatrixError("not Hermitian")
    if abs(np.trace(rho0).real - 1.0) > tol or abs(np.trace(rho0).imag) > tol:
        raise NotADensityMatrixError("trace is not 1")
    if np.linalg.eigvalsh(0.5 * (rho0 + rho0.conj().T)).min() < -tol:
        raise NotADensityMatrixError("not positive semidefinite")
    return subspace.residual(rho0.reshape(-1, order="F")) <= tol


@dataclass
class CommutativityReport:
    """Classification of one generator decomposition.

    `excluded_coordinate` and `excluded_level` are set when the
    complement of M is spanned by a single vectorization coordinate
    (1-based, column-major); the level is set when that coordinate is a
    diagonal entry, in which case admissible states satisfy
    rho_{level,level} = 0.
    """

    functional: bool
    integral: bool
    partial_rank: int
    subspace: SubspaceBasis
    power_cap: int
    sample_times: list[float]
    residual_max: float
    excluded_coordinate: int | None = None
    excluded_level: int | None = None

    def subspace_description(self):
        mu = self.subspace.dim
        if self.partial_rank == mu:
            return f"full (dim {mu})"
        desc = f"dim {self.partial_rank}"
        if self.excluded_level is not None:
            desc += (f"; admissible states satisfy "
                     f"rho_{self.excluded_level}{self.excluded_level} = 0")
        elif self.excluded_coordinate is not None:
            desc += f"; excluded coordinate {self.excluded_coordinate}"
        return desc


def excluded_coordinate(subspace, tol=1e-6):
    """Detect a complement spanned by one coordinate vector.

    Returns (coordinate, level) 1-based; level is None off the diagonal.
    This pattern (a single vanishing diagonal entry) is what the worked
    three- and four-level systems exhibit, but nothing guarantees it in
    general, so detection is best effort.
    """
    mu = subspace.dim
    if subspace.rank != mu - 1:
        return None, None
    complement = np.eye(mu) - subspace.projector()
    j = int(np.argmax(np.real(np.diagonal(complement))))
    target = np.zeros((mu, mu), dtype=complex)
    target[j, j] = 1.0
    if np.max(np.abs(complement - target)) > tol:
        return None, None
    d = math.isqrt(mu)
    row, col = j % d, j // d
    return j + 1, (row + 1 if row == col else None)


def classify(g, times=None, rel_tol=DEFAULT_REL_TOL):
    """Run all three criteria and verify the reported subspace.

    After computing M from the sample times, the defining property
    [L(t), B(t)^n] alpha = 0 is re-checked for every basis vector on a
    ten-fold denser time grid; `residual_max` records the largest
    ||[L(t), B^n(t)] b_i|| / ||B^n(t)|| seen there. This is a numerical
    verification over grids, not a proof for all t.
    """
    if times is None:
        times = default_sample_times()
    times = sorted(float(t) for t in times)
    functional = functional_commutativity(g, times, rel_tol)
    integral = integral_commutativity(g, times, rel_tol)
    _check_subspace_times(times)
    cap = _power_cap(g, times, rel_tol)
    total = np.zeros((g.mu, g.mu), dtype=complex)
    for t in times:
        total += gamma_operator(g, t, cap)
    subspace = null_space(total, rel_tol)

    dense = np.linspace(min(times), max(times), 10 * len(times))
    residual_max = 0.0
    if subspace.rank > 0:
        for t in dense:
            gen = generator_at(g, t)
            b = integral_at(g, t)
            power = np.eye(g.mu, dtype=complex)
            for _ in range(cap):
                power = power @ b
                norm = np.linalg.norm(power)
                if norm == 0.0:
                    continue
                c = (gen @ power - power @ gen) / norm
                residual_max = max(
                    residual_max,
                    float(np.linalg.norm(c @ subspace.basis, axis=0).max()))

    coordinate, level = excluded_coordinate(subspace)
    return CommutativityReport(
        functional=functional,
        integral=integral,
        partial_rank=subspace.rank,
        subspace=subspace,
        power_cap=cap,
        sample_times=list(times),
        residual_max=residual_max,
        excluded_coordinate=coordinate,
        excluded_level=level,
    )
