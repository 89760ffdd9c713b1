"""Physical models and their vectorized generators.

A model is a Hamiltonian plus jump operators with time-dependent rates.
Vectorizing the master equation turns it into a linear ODE on C^(d*d)
whose generator splits as

    L(t) = L_H + sum_k gamma_k(t) * L_k

with a constant drift L_H = i (H^T kron 1 - 1 kron H) and one constant
dissipator matrix per jump. Because only the scalar rates depend on time,
the exact integral B(t) = int_0^t L(tau) dtau is assembled from scalar
antiderivatives; no matrix-valued quadrature is ever needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import expr as _expr
from .errors import UnknownModelError
from .expr import Antiderivative, RateExpr, antiderivative, eval_expr, parse_rate_expr
from .linalg import kron

__all__ = [
    "Jump", "LindbladModel", "GeneratorPart", "GeneratorDecomposition",
    "jump_operator", "dissipator_matrix", "assemble", "generator_at",
    "integral_at", "builtin", "builtin_names", "phase_state",
]

HERMITICITY_TOL = 1e-12

# Built-in rates are required to be nonnegative on the working interval;
# they are sampled here before the model is accepted.
RATE_SAMPLE_INTERVAL = (0.0, 20.0)
RATE_SAMPLE_COUNT = 81


def jump_operator(d, target, source):
    """E_ij = |i><j|: the d x d operator moving level `source` to `target`.

    Levels are 1-based.
    """
    if not (1 <= target <= d and 1 <= source <= d):
        raise ValueError(f"levels must lie in 1..{d}, got ({target}, {source})")
    e = np.zeros((d, d), dtype=complex)
    e[target - 1, source - 1] = 1.0
    return e


@dataclass(frozen=True)
class Jump:
    """A jump operator with its time-dependent rate.

    `source` and `target` are set when the operator is a plain level
    transition E_ij; they are presentation metadata only.
    """

    operator: np.ndarray
    rate: RateExpr
    source: int | None = None
    target: int | None = None


@dataclass
class LindbladModel:
    """d-level system: Hermitian Hamiltonian plus jumps with scalar rates."""

    dim: int
    hamiltonian: np.ndarray
    jumps: list[Jump] = field(default_factory=list)

    def validate(self):
        h = np.asarray(self.hamiltonian, dtype=complex)
        if h.shape != (self.dim, self.dim):
            raise ValueError(f"Hamiltonian shape {h.shape} for dimension {self.dim}")
        if np.max(np.abs(h - h.conj().T)) > HERMITICITY_TOL:
            raise ValueError("Hamiltonian is not Hermitian")
        for k, jump in enumerate(self.jumps):
            v = np.asarray(jump.operator, dtype=complex)
            if v.shape != (self.dim, self.dim):
                raise ValueError(f"jump operator {k} has shape {v.shape}")
        return self


def _check_rates_nonnegative(model):
    ts = np.linspace(*RATE_SAMPLE_INTERVAL, RATE_SAMPLE_COUNT)
    for jump in model.jumps:
        for t in ts:
            if eval_expr(jump.rate, t) < -1e-12:
                raise ValueError(
                    f"rate {_expr.format_expr(jump.rate)!r} is negative at t={t:g}; "
                    "only nonnegative rates are supported")


def dissipator_matrix(v):
    """Vectorized dissipator of a single jump operator.

    conj(V) kron V - 1/2 (1 kron V^dag V) - 1/2 (V^T conj(V) kron 1),
    acting on column-stacked density matrices.
    """
    v = np.asarray(v, dtype=complex)
    d = v.shape[0]
    eye = np.eye(d, dtype=complex)
    vdv = v.conj().T @ v
    return (kron(v.conj(), v)
            - 0.5 * kron(eye, vdv)
            - 0.5 * kron(vdv.T, eye))


@dataclass(frozen=True)
class GeneratorPart:
    matrix: np.ndarray        # constant dissipator, d^2 x d^2
    rate: RateExpr            # gamma_k(t)
    integral: Antiderivative  # Gamma_k(t) = int_0^t gamma_k


@dataclass(frozen=True)
class GeneratorDecomposition:
    """Drift plus rate-weighted constant dissipators; see module docstring."""

    dim: int
    drift: np.ndarray  # i (H^T kron 1 - 1 kron H)
    parts: tuple[GeneratorPart, ...]

    @property
    def mu(self):
        """Ambient dimension of the vectorized state space."""
        return self.dim * self.dim


def assemble(model):
    """Build the vectorized generator decomposition of a model."""
    model.validate()
    d = model.dim
    h = np.asarray(model.hamiltonian, dtype=complex)
    eye = np.eye(d, dtype=complex)
    drift = 1j * (kron(h.T, eye) - kron(eye, h))
    parts = tuple(
        GeneratorPart(dissipator_matrix(jump.operator), jump.rate,
                      antiderivative(jump.rate))
        for jump in model.jumps)
    return GeneratorDecomposition(dim=d, drift=drift, parts=parts)


def generator_at(g, t):
    """L(t) = L_H + sum_k gamma_k(t) L_k."""
    out = g.drift.copy()
    for part in g.parts:
        out += eval_expr(part.rate, t) * part.matrix
    return out


def integral_at(g, t):
    """B(t) = t L_H + sum_k Gamma_k(t) L_k, exact up to scalar quadrature."""
    out = float(t) * g.drift
    for part in g.parts:
        out += part.integral.value(t) * part.matrix
    return out


def phase_state(d, levels, phases=None):
    """Density matrix of the uniform superposition of `levels` (1-based)
    with the given relative phases.

    `phases` lists the phase of each level after the first (the first is
    the reference); defaults to all zeros. For example levels (1, 2) with
    phase phi gives entries 1/2 on the diagonal of levels 1 and 2 and
    rho_12 = exp(-i phi) / 2.
    """
    levels = list(levels)
    m = len(levels)
    if m < 1 or len(set(levels)) != m:
        raise ValueError("levels must be a nonempty list of distinct indices")
    if any(not (1 <= l <= d) for l in levels):
        raise ValueError(f"levels must lie in 1..{d}")
    phases = [0.0] + list(phases if phases is not None else [0.0] * (m - 1))
    if len(phases) != m:
        raise ValueError(f"expected {m - 1} relative phases, got {len(phases) - 1}")
    psi = np.zeros(d, dtype=complex)
    for level, phi in zip(levels, phases):
        psi[level - 1] = np.exp(1j * phi) / math.sqrt(m)
    return np.outer(psi, psi.conj())


# ---------------------------------------------------------------------------
# Built-in models (three-level V, cascade and Lambda topologies, and the
# four-level cascade). Level energies follow the usual normalization with
# the ground or middle level at zero; omega and the epsilons default to 1.

def _get_params(params, numeric, strings=()):
    params = dict(params or {})
    out = {}
    for name, default in numeric.items():
        out[name] = float(params.pop(name, default))
    for name, default in strings:
        out[name] = str(params.pop(name, default))
    if params:
        allowed = list(numeric) + [n for n, _ in strings]
        raise ValueError(f"unknown parameters {sorted(params)}; allowed: {allowed}")
    return out


def _build_v3(params):
    p = _get_params(params, {"omega": 1.0, "eps1": 1.0, "eps3": 1.0})
    h = np.diag([p["eps1"], 0.0, p["eps3"]]).astype(complex)
    w = {"omega": p["omega"]}
    jumps = [
        Jump(jump_operator(3, 2, 1), parse_rate_expr("sin(omega*t)^2", w), 1, 2),
        Jump(jump_operator(3, 2, 3), parse_rate_expr("cos(omega*t)^2", w), 3, 2),
    ]
    return LindbladModel(3, h, jumps)


def _build_cascade3(params):
    p = _get_params(params, {"omega": 1.0, "eps": 1.0})
    h = np.diag([-p["eps"], 0.0, p["eps"]]).astype(complex)
    w = {"omega": p["omega"]}
    jumps = [
        Jump(jump_operator(3, 2, 3), parse_rate_expr("sin(omega*t)^2", w), 3, 2),
        Jump(jump_operator(3, 1, 2), parse_rate_expr("cos(omega*t)^2", w), 2, 1),
    ]
    return LindbladModel(3, h, jumps)


def _build_lambda3(params):
    p = _get_params(
        params,
        {"omega": 1.0, "eps1": 1.0, "eps3": 1.0},
        strings=(("f1", "sin(t)^2"), ("f2", "cos(t)^2")),
    )
    h = np.diag([-p["eps1"], 0.0, -p["eps3"]]).astype(complex)
    numbers = {k: v for k, v in p.items() if k not in ("f1", "f2")}
    jumps = [
        Jump(jump_operator(3, 1, 2), parse_rate_expr(p["f1"], numbers), 2, 1),
        Jump(jump_operator(3, 3, 2), parse_rate_expr(p["f2"], numbers), 2, 3),
    ]
    return LindbladModel(3, h, jumps)


def _build_cascade4(params):
    p = _get_params(params, {"omega": 1.0, "eps1": 1.0, "eps2": 1.0})
    h = np.diag([-p["eps2"], -p["eps1"], p["eps1"], p["eps2"]]).astype(complex)
    w = {"omega": p["omega"]}
    jumps = [
        Jump(jump_operator(4, 3, 4), parse_rate_expr("exp(-omega*t)", w), 4, 3),
        Jump(jump_operator(4, 2, 3), parse_rate_expr("sin(3*omega*t)^2", w), 3, 2),
        Jump(jump_operator(4, 1, 2), parse_rate_expr("sin(3*omega*t)^2", w), 2, 1),
    ]
    return LindbladModel(4, h, jumps)


_BUILTINS = {
    "v3": _build_v3,
    "cascade3": _build_cascade3,
    "lambda3": _build_lambda3,
    "cascade4": _build_cascade4,
}


def builtin_names():
    return sorted(_BUILTINS)


def builtin(name, params=None):
    """Construct a built-in model by name.

    Names: v3, cascade3, lambda3, cascade4. Numeric parameters (omega and
    the level energies) default to 1; lambda3 additionally accepts the
    rate expressions f1 and f2 as strings.
    """
    try:
        build = _BUILTINS[name]
    except KeyError:
        raise UnknownModelError(
            f"unknown model {name!r}; available: {', '.join(builtin_names())}") from None
    model = build(params).validate()
    _check_rates_nonnegative(model)
    return model
