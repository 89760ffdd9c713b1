"""Command-line interface.

Three subcommands over a model (a JSON file or a built-in name):

* ``classify`` prints the commutativity classification and the
  admissible-state subspace;
* ``solve`` propagates an initial state in closed form and writes a CSV
  trajectory (populations, purity, entropy, optional coherences);
* ``verify`` runs the closed form against the brute-force ODE oracle and
  reports the largest trace distance and the flow residual.

Exit codes: 0 success, 2 input/parse error, 3 numeric failure,
4 inadmissible initial state without --force, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_INADMISSIBLE = 4
EXIT_VERIFY = 5

DEFAULT_T_MAX = 20.0
DEFAULT_STEPS = 400
DEFAULT_VERIFY_TOL = 1e-6

THREADS_ENV = "LINDBLAD_PC_THREADS"


def _apply_thread_cap():
    """Honor LINDBLAD_PC_THREADS by capping BLAS pools before numpy loads."""
    cap = os.environ.get(THREADS_ENV)
    if not cap:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, cap)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lindblad-pc",
        description="Closed-form Lindblad dynamics via partial commutativity.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_arguments(p):
        p.add_argument("model", nargs="?", metavar="MODEL.json",
                       help="path to a model file (or use --builtin)")
        p.add_argument("--builtin", metavar="NAME",
                       help="built-in model: v3, cascade3, lambda3, cascade4")
        p.add_argument("--params", action="append", default=[], metavar="K=V,...",
                       help="model parameters, e.g. omega=2,eps=1 "
                            "(lambda3 also takes f1=..., f2=...)")
        p.add_argument("--emit-model", metavar="PATH",
                       help="write the loaded model back out as a JSON file")

    classify = sub.add_parser("classify", help="commutativity classification")
    add_model_arguments(classify)
    classify.add_argument("--tol", type=float, default=1e-10,
                          help="relative rank/commutator tolerance (default 1e-10)")
    classify.add_argument("--json", action="store_true", dest="as_json",
                          help="machine-readable output")
    classify.set_defaults(func=cmd_classify)

    solve = sub.add_parser("solve", help="closed-form trajectory to CSV")
    add_model_arguments(solve)
    solve.add_argument("--rho0", metavar="SPEC",
                       help="initial state: diag:a,b,... | pure:k | "
                            "phase:levels[;phases] | file:PATH")
    solve.add_argument("--t-max", type=float, default=DEFAULT_T_MAX)
    solve.add_argument("--steps", type=int, default=DEFAULT_STEPS,
                       help="number of grid points including t=0 (default 400)")
    solve.add_argument("--coherences", nargs="*", default=[], metavar="I,J",
                       help="off-diagonal entries to include, e.g. 1,3 2,1")
    solve.add_argument("--out", metavar="PATH", help="CSV path (default stdout)")
    solve.add_argument("--force", action="store_true",
                       help="propagate even if the state is inadmissible")
    solve.set_defaults(func=cmd_solve)

    verify = sub.add_parser("verify", help="closed form vs ODE oracle")
    add_model_arguments(verify)
    verify.add_argument("--rho0", metavar="SPEC", required=True)
    verify.add_argument("--t-max", type=float, default=DEFAULT_T_MAX)
    verify.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    verify.add_argument("--tol", type=float, default=DEFAULT_VERIFY_TOL,
                        help="acceptance threshold (default 1e-6)")
    verify.add_argument("--force", action="store_true",
                        help="verify even if the state is inadmissible")
    verify.set_defaults(func=cmd_verify)

    return parser


def _parse_params(chunks):
    params = {}
    for chunk in chunks:
        for item in chunk.split(","):
            item = item.strip()
            if not item:
                continue
            name, sep, value = item.partition("=")
            if not sep or not name:
                raise ValueError(f"--params entries must look like k=v, got {item!r}")
            try:
                params[name] = float(value)
            except ValueError:
                params[name] = value  # expression-valued (lambda3 f1/f2)
    return params


def _load_model(args):
    """Resolve the model selection; returns (model, params, initial_state)."""
    from . import modelfile
    from .model import builtin

    params = _parse_params(args.params)
    if (args.model is None) == (args.builtin is None):
        raise ValueError("select a model with either a file path or --builtin")
    if args.builtin is not None:
        model = builtin(args.builtin, params)
        initial_state = None
    else:
        model, initial_state = modelfile.load_model(args.model)
    if args.emit_model:
        modelfile.dump_model(model, args.emit_model, initial_state)
    return model, params, initial_state


def _sample_times(params):
    from .commutativity import default_sample_times

    omega = params.get("omega")
    scale = 1.0 / omega if isinstance(omega, float) and omega > 0 else 1.0
    return default_sample_times(scale)


def _parse_rho0(spec, d):
    import numpy as np

    from .model import jump_operator, phase_state

    kind, sep, rest = spec.partition(":")
    if not sep:
        raise ValueError(f"--rho0 spec needs a kind prefix, got {spec!r}")

    if kind == "diag":
        values = [float(x) for x in rest.split(",")]
        if len(values) != d:
            raise ValueError(f"diag: expected {d} entries, got {len(values)}")
        rho = np.diag(values).astype(complex)
    elif kind == "pure":
        k = int(rest)
        if not (1 <= k <= d):
            raise ValueError(f"pure: level {k} outside 1..{d}")
        rho = jump_operator(d, k, k)
    elif kind == "phase":
        levels_part, _, phases_part = rest.partition(";")
        levels = [int(x) for x in levels_part.split(",") if x]
        phases = [float(x) for x in phases_part.split(",")] if phases_part else None
        rho = phase_state(d, levels, phases)
    elif kind == "file":
        with open(rest, encoding="utf-8") as fh:
            doc = json.load(fh)
        if "matrix" in doc:
            rho = np.array([[complex(*e) if isinstance(e, list) else complex(e)
                             for e in row] for row in doc["matrix"]])
        elif "diagonal" in doc:
            rho = np.diag([float(x) for x in doc["diagonal"]]).astype(complex)
        else:
            raise ValueError("state file needs a 'matrix' or 'diagonal' field")
        if rho.shape != (d, d):
            raise ValueError(f"state file has shape {rho.shape}, expected {d}x{d}")
    else:
        raise ValueError(f"unknown --rho0 kind {kind!r}")

    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > 1e-3:
        raise ValueError(f"initial state trace is {trace.real:.6g}, expected 1")
    return rho / trace.real


def _resolve_rho0(args, d, initial_state):
    import numpy as np

    if getattr(args, "rho0", None):
        return _parse_rho0(args.rho0, d)
    if initial_state is not None:
        trace = complex(np.trace(initial_state))
        if abs(trace - 1.0) > 1e-3:
            raise ValueError("model file initial state trace is not 1")
        return np.asarray(initial_state, dtype=complex) / trace.real
    raise ValueError("no initial state: pass --rho0 or put one in the model file")


def _admissibility_gate(g, rho0, params, force, tol):
    """Returns None when propagation may proceed, else an exit code."""
    from .commutativity import admissible, excluded_coordinate, partial_subspace

    subspace = partial_subspace(g, _sample_times(params))
    ok = admissible(rho0, subspace, tol)
    if ok or force:
        if not ok:
            print("warning: initial state is outside the admissible subspace; "
                  "the closed form is not a solution (--force given)",
                  file=sys.stderr)
        return None
    _, level = excluded_coordinate(subspace)
    detail = (f"admissible states satisfy rho_{level}{level} = 0"
              if level is not None else
              f"the admissible subspace has dimension {subspace.rank}")
    print(f"error: initial state is inadmissible: {detail}; "
          "rerun with --force to propagate anyway", file=sys.stderr)
    return EXIT_INADMISSIBLE


def cmd_classify(args):
    from .commutativity import classify
    from .model import assemble

    model, params, _ = _load_model(args)
    g = assemble(model)
    report = classify(g, _sample_times(params), rel_tol=args.tol)
    if args.as_json:
        print(json.dumps({
            "functional": report.functional,
            "integral": report.integral,
            "partial_rank": report.partial_rank,
            "ambient_dim": report.subspace.dim,
            "excluded_coordinate": report.excluded_coordinate,
            "excluded_level": report.excluded_level,
            "power_cap": report.power_cap,
            "residual_max": report.residual_max,
            "sample_times": report.sample_times,
        }))
    else:
        print(f"functional: {'yes' if report.functional else 'no'}")
        print(f"integral: {'yes' if report.integral else 'no'}")
        print(f"M: {report.subspace_description()}")
        print(f"power cap: {report.power_cap}")
        print(f"residual max: {report.residual_max:.3e}")
    return EXIT_OK


def _fmt(x):
    return f"{x + 0.0:.12e}"  # + 0.0 normalizes negative zero


def _csv_lines(series):
    d = series.populations.shape[1]
    header = ["t"] + [f"p_{i}" for i in range(1, d + 1)] + ["purity", "entropy"]
    for (i, j) in series.coherences:
        header += [f"re_{i}{j}", f"im_{i}{j}"]
    yield ",".join(header)
    coherences = list(series.coherences.values())
    for row in range(series.times.size):
        cells = [_fmt(series.times[row])]
        cells += [_fmt(p) for p in series.populations[row]]
        cells += [_fmt(series.purity[row]), _fmt(series.entropy[row])]
        for values in coherences:
            cells += [_fmt(values[row].real), _fmt(values[row].imag)]
        yield ",".join(cells)


def cmd_solve(args):
    import numpy as np

    from .model import assemble
    from .observables import observable_series
    from .solver import propagate_closed_form

    model, params, initial_state = _load_model(args)
    g = assemble(model)
    rho0 = _resolve_rho0(args, model.dim, initial_state)

    failure = _admissibility_gate(g, rho0, params, args.force, tol=1e-8)
    if failure is not None:
        return failure

    if args.steps < 2 or args.t_max <= 0:
        raise ValueError("--steps must be >= 2 and --t-max positive")
    grid = np.linspace(0.0, args.t_max, args.steps)
    trajectory = propagate_closed_form(g, rho0, grid)

    pairs = []
    for item in args.coherences:
        i, _, j = item.partition(",")
        pairs.append((int(i), int(j)))
    series = observable_series(trajectory, pairs)

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            for line in _csv_lines(series):
                fh.write(line + "\n")
    else:
        for line in _csv_lines(series):
            sys.stdout.write(line + "\n")
    return EXIT_OK


def cmd_verify(args):
    import numpy as np

    from .linalg import vec
    from .model import assemble
    from .solver import compare, fedorov_residual, ode_oracle, propagate_closed_form

    model, params, initial_state = _load_model(args)
    g = assemble(model)
    rho0 = _resolve_rho0(args, model.dim, initial_state)

    failure = _admissibility_gate(g, rho0, params, args.force, tol=1e-8)
    if failure is not None:
        return failure

    grid = np.linspace(0.0, args.t_max, args.steps)
    closed = propagate_closed_form(g, rho0, grid)
    oracle = ode_oracle(g, rho0, grid)
    distance = compare(closed, oracle)
    residual = fedorov_residual(g, vec(rho0), grid)

    print(f"max trace distance: {distance:.3e}")
    print(f"fedorov residual: {residual:.3e}")
    if distance <= args.tol and residual <= args.tol:
        print("verdict: PASS")
        return EXIT_OK
    print("verdict: FAIL")
    return EXIT_VERIFY


def run(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return EXIT_PARSE if exc.code else EXIT_OK

    from .errors import (ExprSyntaxError, ModelFileError, NonFiniteError,
                         NotADensityMatrixError, StepSizeUnderflowError,
                         UnboundParameterError, UnknownModelError)

    try:
        return args.func(args)
    except (ExprSyntaxError, UnboundParameterError, UnknownModelError,
            ModelFileError, NotADensityMatrixError, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NonFiniteError, StepSizeUnderflowError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main(argv=None):
    _apply_thread_cap()
    if argv is None:
        argv = sys.argv[1:]
    return run(argv)


if __name__ == "__main__":
    raise SystemExit(main())
