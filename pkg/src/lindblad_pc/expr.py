"""Scalar rate expressions: parsing, evaluation, antidifferentiation.

Relaxation rates enter the generator as scalar functions of time, so
integrating the full generator matrix reduces to integrating scalars.
This module parses a small expression grammar into an immutable AST,
evaluates it, and produces antiderivatives: in closed form when the
expression matches a table of elementary patterns, otherwise through a
cached adaptive-Simpson cumulative integral.

Grammar (whitespace insensitive)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' int)?
    base   := number | name | 't' | '(' expr ')'
            | ('sin'|'cos'|'exp') '(' expr ')' | '-' base

Parameter names are substituted as literals at parse time, so a parsed
expression depends on `t` alone.
"""

from __future__ import annotations

import bisect
import math
import re
import threading
from dataclasses import dataclass

from .errors import ExprSyntaxError, NonFiniteError, UnboundParameterError

__all__ = [
    "RateExpr", "Const", "TimeVar", "Neg", "Add", "Sub", "Mul", "Div",
    "Pow", "Func", "parse_rate_expr", "eval_expr", "format_expr",
    "Antiderivative", "ClosedFormAntiderivative", "QuadratureAntiderivative",
    "antiderivative",
]

# Closed forms carrying a 1/a factor are ill-conditioned for tiny a
# (e.g. sin(2at)/(4a) -> t/2); below this we integrate numerically.
MIN_FREQUENCY = 1e-6


class RateExpr:
    """Base class of rate-expression AST nodes. Nodes are immutable values."""

    __slots__ = ()

    def __call__(self, t):
        return eval_expr(self, t)


@dataclass(frozen=True)
class Const(RateExpr):
    value: float


@dataclass(frozen=True)
class TimeVar(RateExpr):
    """The time variable `t`."""


@dataclass(frozen=True)
class Neg(RateExpr):
    arg: RateExpr


@dataclass(frozen=True)
class Add(RateExpr):
    lhs: RateExpr
    rhs: RateExpr


@dataclass(frozen=True)
class Sub(RateExpr):
    lhs: RateExpr
    rhs: RateExpr


@dataclass(frozen=True)
class Mul(RateExpr):
    lhs: RateExpr
    rhs: RateExpr


@dataclass(frozen=True)
class Div(RateExpr):
    lhs: RateExpr
    rhs: RateExpr


@dataclass(frozen=True)
class Pow(RateExpr):
    base: RateExpr
    exponent: int


@dataclass(frozen=True)
class Func(RateExpr):
    name: str  # one of "sin", "cos", "exp"
    arg: RateExpr


_FUNCTIONS = {"sin": math.sin, "cos": math.cos, "exp": math.exp}


# ---------------------------------------------------------------------------
# Constant folding. Subtrees whose operands are all literals collapse to a
# literal so that structural equality doubles as a canonical form.

def _fold1(make, fold, a):
    if isinstance(a, Const):
        try:
            return Const(float(fold(a.value)))
        except (ArithmeticError, ValueError):
            pass
    return make(a)


def _fold2(make, fold, a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        try:
            v = float(fold(a.value, b.value))
        except (ArithmeticError, ValueError):
            return make(a, b)  # evaluation will report the failure
        if math.isfinite(v):
            return Const(v)
    return make(a, b)


def _neg(a):
    return _fold1(Neg, lambda x: -x, a)


def _add(a, b):
    return _fold2(Add, lambda x, y: x + y, a, b)


def _sub(a, b):
    return _fold2(Sub, lambda x, y: x - y, a, b)


def _mul(a, b):
    return _fold2(Mul, lambda x, y: x * y, a, b)


def _div(a, b):
    return _fold2(Div, lambda x, y: x / y, a, b)


def _pow(a, n):
    if n == 0:
        return Const(1.0)
    if n == 1:
        return a
    if isinstance(a, Const):
        try:
            v = float(a.value ** n)
        except ArithmeticError:
            return Pow(a, n)
        if math.isfinite(v):
            return Const(v)
    return Pow(a, n)


def _func(name, a):
    return _fold1(lambda x: Func(name, x), _FUNCTIONS[name], a)


# ---------------------------------------------------------------------------
# Tokenizer / parser

_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
)

_INT_RE = re.compile(r"\d+\Z")


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text, params):
        self.tokens = _tokenize(text)
        self.index = 0
        self.params = params

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def fail(self, expected):
        kind, value, pos = self.peek()
        got = "end of input" if kind == "end" else repr(value)
        raise ExprSyntaxError(f"unexpected {got}", pos, expected)

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(("operator", "end of input"))
        return node

    def expr(self):
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.advance()[1]
            rhs = self.term()
            node = _add(node, rhs) if op == "+" else _sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.advance()[1]
            rhs = self.factor()
            node = _mul(node, rhs) if op == "*" else _div(node, rhs)
        return node

    def factor(self):
        node = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            kind, value, pos = self.peek()
            if kind != "num" or not _INT_RE.match(value):
                self.fail(("integer exponent",))
            self.advance()
            node = _pow(node, int(value))
        return node

    def base(self):
        kind, value, _ = self.peek()
        if kind == "num":
            self.advance()
            return Const(float(value))
        if kind == "name":
            self.advance()
            if value == "t":
                return TimeVar()
            if value in _FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return _func(value, arg)
            if value in self.params:
                return Const(self.params[value])
            raise UnboundParameterError(value)
        if (kind, value) == ("op", "("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if (kind, value) == ("op", "-"):
            self.advance()
            return _neg(self.base())
        self.fail(("number", "name", "'t'", "'('", "'-'"))

    def expect(self, op):
        if self.peek()[:2] != ("op", op):
            self.fail((f"'{op}'",))
        self.advance()


def parse_rate_expr(text, params=None):
    """Parse an expression string into a :class:`RateExpr`.

    Free names other than ``t`` must appear in `params` and are replaced
    by their numeric values during parsing.

    Raises :class:`ExprSyntaxError` on malformed input and
    :class:`UnboundParameterError` on an unknown name.
    """
    bound = {}
    for name, value in (params or {}).items():
        if name == "t":
            raise ValueError("parameter name 't' is reserved for the time variable")
        value = float(value)
        if not math.isfinite(value):
            raise NonFiniteError(f"parameter {name!r} is not finite")
        bound[name] = value
    return _Parser(text, bound).parse()


def eval_expr(f, t):
    """Evaluate `f` at time `t`. Raises :class:`NonFiniteError` if the
    result (or any intermediate) overflows or divides by zero."""
    try:
        v = _eval(f, float(t))
    except (ZeroDivisionError, OverflowError) as exc:
        raise NonFiniteError(str(exc)) from exc
    if not math.isfinite(v):
        raise NonFiniteError(f"expression evaluated to {v!r} at t={t}")
    return v


def _eval(f, t):
    if isinstance(f, Const):
        return f.value
    if isinstance(f, TimeVar):
        return t
    if isinstance(f, Neg):
        return -_eval(f.arg, t)
    if isinstance(f, Add):
        return _eval(f.lhs, t) + _eval(f.rhs, t)
    if isinstance(f, Sub):
        return _eval(f.lhs, t) - _eval(f.rhs, t)
    if isinstance(f, Mul):
        return _eval(f.lhs, t) * _eval(f.rhs, t)
    if isinstance(f, Div):
        return _eval(f.lhs, t) / _eval(f.rhs, t)
    if isinstance(f, Pow):
        return _eval(f.base, t) ** f.exponent
    if isinstance(f, Func):
        return _FUNCTIONS[f.name](_eval(f.arg, t))
    raise TypeError(f"not a RateExpr node: {f!r}")


# ---------------------------------------------------------------------------
# Unparsing (used when exporting models back to files)

_PREC_ADD, _PREC_MUL, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def format_expr(f):
    """Render `f` as a string that reparses to an equal AST."""
    return _format(f)[0]


def _format(f):
    if isinstance(f, Const):
        if f.value < 0:
            return f"-{_unsigned(-f.value)}", _PREC_UNARY
        return _unsigned(f.value), _PREC_ATOM
    if isinstance(f, TimeVar):
        return "t", _PREC_ATOM
    if isinstance(f, Neg):
        s, p = _format(f.arg)
        if p < _PREC_UNARY:
            s = f"({s})"
        return f"-{s}", _PREC_UNARY
    if isinstance(f, (Add, Sub)):
        op = "+" if isinstance(f, Add) else "-"
        ls = _wrap(f.lhs, _PREC_ADD)
        rs = _wrap(f.rhs, _PREC_ADD + (op == "-"))
        return f"{ls} {op} {rs}", _PREC_ADD
    if isinstance(f, (Mul, Div)):
        op = "*" if isinstance(f, Mul) else "/"
        ls = _wrap(f.lhs, _PREC_MUL)
        rs = _wrap(f.rhs, _PREC_MUL + (op == "/"))
        return f"{ls}{op}{rs}", _PREC_MUL
    if isinstance(f, Pow):
        bs, bp = _format(f.base)
        if bp < _PREC_ATOM:
            bs = f"({bs})"
        return f"{bs}^{f.exponent}", _PREC_POW
    if isinstance(f, Func):
        return f"{f.name}({format_expr(f.arg)})", _PREC_ATOM
    raise TypeError(f"not a RateExpr node: {f!r}")


def _wrap(f, minimum):
    s, p = _format(f)
    return f"({s})" if p < minimum else s


def _unsigned(v):
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


# ---------------------------------------------------------------------------
# Antiderivatives

class Antiderivative:
    """F with F(0) = 0 and F' = f, evaluated through :meth:`value`."""

    is_closed_form = False

    def value(self, t):
        raise NotImplementedError

    def __call__(self, t):
        return self.value(t)


@dataclass(frozen=True)
class ClosedFormAntiderivative(Antiderivative):
    expr: RateExpr

    is_closed_form = True

    def value(self, t):
        return eval_expr(self.expr, t)


class QuadratureAntiderivative(Antiderivative):
    """Cumulative integral of `f` from 0 by adaptive Simpson quadrature.

    Evaluations are cached as checkpoints, so sweeping an increasing time
    grid integrates each short segment once (amortized O(1) per point).
    The cache is lock-protected; concurrent reads after construction are
    safe.
    """

    # Requested per-unit-length tolerance; keeps accumulated error well
    # inside the documented |value(t) - integral| <= 1e-10 * (1 + t).
    ABS_TOL = 1e-12

    def __init__(self, integrand):
        self.integrand = integrand
        self._lock = threading.Lock()
        self._ts = [0.0]
        self._vals = [0.0]

    def value(self, t):
        t = float(t)
        f = lambda x: eval_expr(self.integrand, x)
        with self._lock:
            i = bisect.bisect_left(self._ts, t)
            if i < len(self._ts) and self._ts[i] == t:
                return self._vals[i]
            # integrate from the nearest cached checkpoint
            candidates = [j for j in (i - 1, i) if 0 <= j < len(self._ts)]
            j = min(candidates, key=lambda k: abs(t - self._ts[k]))
            t0, v0 = self._ts[j], self._vals[j]
            eps = self.ABS_TOL * max(abs(t - t0), 1e-3)
            v = v0 + _adaptive_simpson(f, t0, t, eps)
            if not math.isfinite(v):
                raise NonFiniteError(f"quadrature diverged on [{t0}, {t}]")
            k = bisect.bisect_left(self._ts, t)
            self._ts.insert(k, t)
            self._vals.insert(k, v)
            return v


def _adaptive_simpson(f, a, b, eps):
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    c = 0.5 * (a + b)
    fc = f(c)
    whole = (b - a) * (fa + 4.0 * fc + fb) / 6.0
    return _simpson_step(f, a, b, fa, fb, fc, whole, eps, 48)


def _simpson_step(f, a, b, fa, fb, fc, whole, eps, depth):
    c = 0.5 * (a + b)
    d = 0.5 * (a + c)
    e = 0.5 * (c + b)
    fd, fe = f(d), f(e)
    left = (c - a) * (fa + 4.0 * fd + fc) / 6.0
    right = (b - c) * (fc + 4.0 * fe + fb) / 6.0
    err = left + right - whole
    if depth <= 0 or abs(err) <= 15.0 * eps:
        return left + right + err / 15.0
    return (_simpson_step(f, a, c, fa, fc, fd, left, eps / 2.0, depth - 1)
            + _simpson_step(f, c, b, fc, fb, fe, right, eps / 2.0, depth - 1))


class _NoClosedForm(Exception):
    pass


def antiderivative(f):
    """Antidifferentiate `f`, normalized so the result vanishes at t = 0.

    A closed form is returned when `f` is a sum of constant multiples of:
    constants, t^n, sin(a*t+b), cos(a*t+b), sin(a*t)^2, cos(a*t)^2, and
    exp(a*t+b). Anything else (including the patterns above with
    |a| < 1e-6, where the 1/a prefactor is ill-conditioned) falls back to
    cached adaptive quadrature, which is total.
    """
    try:
        terms = [_term_antiderivative(sign, term) for sign, term in _terms(f)]
    except _NoClosedForm:
        return QuadratureAntiderivative(f)
    total = terms[0]
    for term in terms[1:]:
        total = _add(total, term)
    return ClosedFormAntiderivative(total)


def _terms(f, sign=1.0):
    """Flatten top-level additions into (sign, term) pairs."""
    if isinstance(f, Add):
        return _terms(f.lhs, sign) + _terms(f.rhs, sign)
    if isinstance(f, Sub):
        return _terms(f.lhs, sign) + _terms(f.rhs, -sign)
    if isinstance(f, Neg):
        return _terms(f.arg, -sign)
    return [(sign, f)]


def _coeff_core(f):
    """Split a multiplicative term into (constant coefficient, core factor).

    The core is None when the term is constant. More than one non-constant
    factor, or a non-constant divisor, has no table entry.
    """
    if isinstance(f, Const):
        return f.value, None
    if isinstance(f, Neg):
        c, core = _coeff_core(f.arg)
        return -c, core
    if isinstance(f, Mul):
        cl, kl = _coeff_core(f.lhs)
        cr, kr = _coeff_core(f.rhs)
        if kl is not None and kr is not None:
            raise _NoClosedForm
        return cl * cr, kl if kl is not None else kr
    if isinstance(f, Div):
        cr, kr = _coeff_core(f.rhs)
        if kr is not None or cr == 0.0:
            raise _NoClosedForm
        cl, kl = _coeff_core(f.lhs)
        return cl / cr, kl
    return 1.0, f


def _linear(f):
    """Return (a, b) with f(t) = a*t + b, or raise _NoClosedForm."""
    if isinstance(f, Const):
        return 0.0, f.value
    if isinstance(f, TimeVar):
        return 1.0, 0.0
    if isinstance(f, Neg):
        a, b = _linear(f.arg)
        return -a, -b
    if isinstance(f, Add):
        al, bl = _linear(f.lhs)
        ar, br = _linear(f.rhs)
        return al + ar, bl + br
    if isinstance(f, Sub):
        al, bl = _linear(f.lhs)
        ar, br = _linear(f.rhs)
        return al - ar, bl - br
    if isinstance(f, Mul):
        al, bl = _linear(f.lhs)
        ar, br = _linear(f.rhs)
        if al == 0.0:
            return bl * ar, bl * br
        if ar == 0.0:
            return br * al, br * bl
        raise _NoClosedForm
    if isinstance(f, Div):
        ar, br = _linear(f.rhs)
        if ar != 0.0 or br == 0.0:
            raise _NoClosedForm
        al, bl = _linear(f.lhs)
        return al / br, bl / br
    if isinstance(f, Pow):
        if f.exponent == 0:
            return 0.0, 1.0
        if f.exponent == 1:
            return _linear(f.base)
        a, b = _linear(f.base)
        if a == 0.0:
            return 0.0, b ** f.exponent
        raise _NoClosedForm
    if isinstance(f, Func):
        a, b = _linear(f.arg)
        if a == 0.0:
            return 0.0, _FUNCTIONS[f.name](b)
        raise _NoClosedForm
    raise _NoClosedForm


def _term_antiderivative(sign, term):
    coeff, core = _coeff_core(term)
    coeff *= sign
    anti = _core_antiderivative(core)
    if coeff == 1.0:
        return anti
    if isinstance(anti, Mul) and isinstance(anti.lhs, Const):
        return _mul(Const(coeff * anti.lhs.value), anti.rhs)
    return _mul(Const(coeff), anti)


def _core_antiderivative(core):
    if core is None:
        return TimeVar()

    if isinstance(core, Func):
        a, b0 = _linear_arg(core.arg)
        # sin(a t + b): (cos(b) - cos(a t + b)) / a
        if core.name == "sin":
            return _div(_sub(Const(math.cos(b0)), Func("cos", core.arg)), Const(a))
        # cos(a t + b): (sin(a t + b) - sin(b)) / a
        if core.name == "cos":
            return _div(_sub(Func("sin", core.arg), Const(math.sin(b0))), Const(a))
        # exp(a t + b): (exp(a t + b) - exp(b)) / a
        return _div(_sub(Func("exp", core.arg), Const(math.exp(b0))), Const(a))

    if isinstance(core, Pow) and isinstance(core.base, Func):
        if core.exponent != 2 or core.base.name not in ("sin", "cos"):
            raise _NoClosedForm
        a, b0 = _linear_arg(core.base.arg)
        if b0 != 0.0:
            raise _NoClosedForm
        # sin^2(a t): t/2 - sin(2 a t)/(4 a); cos^2 flips the sign
        osc = _div(Func("sin", _mul(Const(2.0 * a), TimeVar())), Const(4.0 * a))
        half_t = _div(TimeVar(), Const(2.0))
        return _sub(half_t, osc) if core.base.name == "sin" else _add(half_t, osc)

    if isinstance(core, Pow):
        # t^n and (a t)^n with integer n >= 2
        a, b = _linear(core.base)
        if b != 0.0:
            raise _NoClosedForm
        n = core.exponent
        scale = a ** n / (n + 1)
        power = Pow(TimeVar(), n + 1)
        return power if scale == 1.0 else _mul(Const(scale), power)

    # remaining cores that are affine in t (plain t, or unfolded constants)
    a, b = _linear(core)
    if a == 0.0:
        return _mul(Const(b), TimeVar())
    ramp = Pow(TimeVar(), 2) if a == 2.0 else _mul(Const(a / 2.0), Pow(TimeVar(), 2))
    if b == 0.0:
        return ramp
    return _add(ramp, _mul(Const(b), TimeVar()))


def _linear_arg(arg):
    """Linear decomposition of a function argument, guarded against tiny slopes.

    The constant term is re-evaluated as eval_expr(arg, 0) so the assembled
    antiderivative vanishes at t = 0 exactly, bit for bit.
    """
    a, _ = _linear(arg)
    if abs(a) < MIN_FREQUENCY:
        raise _NoClosedForm
    return a, eval_expr(arg, 0.0)
