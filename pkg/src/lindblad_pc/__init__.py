"""Closed-form dynamics of time-dependent Lindblad master equations.

When the vectorized generator L(t) commutes with itself across times,
with its integral B(t), or at least with the powers of B(t) on a
subspace of initial vectors (partial commutativity), the solution is
exp(B(t)) applied to the vectorized initial state. This package
classifies generators by those criteria, computes the admissible
subspace, propagates states in closed form, and checks every trajectory
against an independent Runge-Kutta integration of the same equation.
"""

from .errors import (
    DimensionMismatchError,
    ExprSyntaxError,
    GridMismatchError,
    IndexOutOfRangeError,
    LindbladError,
    ModelFileError,
    NonFiniteError,
    NotADensityMatrixError,
    StepSizeUnderflowError,
    UnboundParameterError,
    UnknownModelError,
)
from .expr import (
    Antiderivative,
    ClosedFormAntiderivative,
    QuadratureAntiderivative,
    RateExpr,
    antiderivative,
    eval_expr,
    format_expr,
    parse_rate_expr,
)
from .linalg import (
    SubspaceBasis,
    commutator,
    expm,
    kron,
    minimal_poly_degree,
    null_space,
    unvec,
    vec,
)
from .model import (
    GeneratorDecomposition,
    Jump,
    LindbladModel,
    assemble,
    builtin,
    builtin_names,
    dissipator_matrix,
    generator_at,
    integral_at,
    jump_operator,
    phase_state,
)
from .commutativity import (
    CommutativityReport,
    admissible,
    classify,
    default_sample_times,
    excluded_coordinate,
    functional_commutativity,
    gamma_operator,
    integral_commutativity,
    partial_subspace,
)
from .solver import (
    Trajectory,
    compare,
    fedorov_residual,
    ode_oracle,
    propagate_closed_form,
    trace_distance,
)
from .observables import (
    ObservableSeries,
    coherence,
    entropy,
    observable_series,
    populations,
    purity,
)
from .modelfile import dump_model, load_model, loads_model, model_to_dict

__version__ = "0.1.0"
