"""Shared domain types: space parameters, symbol families, sequence verdicts.

Symbols are a closed family at the text boundary (see :func:`parse_symbol`);
library callers can additionally wrap any radial callable in
:class:`RadialProfile` together with their own :class:`DecayBudget`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintError, InsufficientDataError, SymbolParseError

__all__ = [
    "SpaceParams",
    "DecayBudget",
    "SymbolSpec",
    "One",
    "GaussRadial",
    "PolyGaussRadial",
    "Annulus",
    "GaussYV",
    "GaussY",
    "GaussH",
    "GroupGauss",
    "RadialProfile",
    "parse_symbol",
    "render_symbol",
    "SequenceReport",
    "classify_verdict",
    "make_report",
    "BOUNDED",
    "UNBOUNDED",
    "INCONCLUSIVE",
]

BOUNDED = "Bounded"
UNBOUNDED = "Unbounded"
INCONCLUSIVE = "Inconclusive"

DEFAULT_DELTA = 0.02
MIN_ENTRIES = 12


@dataclass(frozen=True)
class SpaceParams:
    """Ambient complex dimension ``n`` and semigroup time ``t``."""

    n: int
    t: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ConstraintError(f"n must be a positive integer, got {self.n!r}")
        if not (self.t > 0 and math.isfinite(self.t)):
            raise ConstraintError(f"t must be a positive real, got {self.t!r}")


@dataclass(frozen=True)
class DecayBudget:
    """Growth envelope ``|g(p)| <= constant * (1+|p|)**poly_degree * exp(gaussian_rate*|p|**2)``.

    A negative ``gaussian_rate`` means Gaussian decay.
    """

    gaussian_rate: float
    poly_degree: int = 0
    constant: float = 1.0

    def bound(self, r):
        r = np.asarray(r, dtype=float)
        return self.constant * (1.0 + r) ** self.poly_degree * np.exp(self.gaussian_rate * r * r)

    def log_bound(self, r):
        r = np.asarray(r, dtype=float)
        return (math.log(self.constant) + self.poly_degree * np.log1p(r)
                + self.gaussian_rate * r * r)

    def combine(self, other: "DecayBudget") -> "DecayBudget":
        """Envelope of the pointwise product of two functions."""
        return DecayBudget(self.gaussian_rate + other.gaussian_rate,
                           self.poly_degree + other.poly_degree,
                           self.constant * other.constant)

    def shifted(self, rate: float, degree: int = 0) -> "DecayBudget":
        return DecayBudget(self.gaussian_rate + rate, self.poly_degree + degree, self.constant)


# ---------------------------------------------------------------------------
# symbols


class SymbolSpec:
    """Base class of the symbol families.

    ``evaluate`` takes points of shape ``(..., d)``; radial families also
    expose ``radial(r)``.
    """

    is_radial = False
    name = ""

    @property
    def decay(self) -> DecayBudget:
        raise NotImplementedError

    def evaluate(self, points):
        points = np.asarray(points)
        r = np.sqrt(np.sum(np.abs(points) ** 2, axis=-1))
        return self.radial(r)

    def __call__(self, points):
        return self.evaluate(points)

    def radial(self, r):
        raise TypeError(f"{self.name} is not a radial symbol")

    def radial_scaled(self, r):
        """``radial(r)`` as ``(mantissa, log_scale)``; Gaussian families keep
        the exponent separate so far tails do not underflow."""
        return np.asarray(self.radial(r)), np.zeros(np.shape(r))

    def render(self) -> str:
        raise TypeError(f"{type(self).__name__} has no text form")


def _fmt(x: float) -> str:
    return repr(float(x))


def _fmt_complex(c: complex) -> str:
    c = complex(c)
    sign = "-" if math.copysign(1.0, c.imag) < 0 else "+"
    return f"{_fmt(c.real)}{sign}{_fmt(abs(c.imag))}i"


@dataclass(frozen=True)
class One(SymbolSpec):
    name = "one"
    is_radial = True

    @property
    def decay(self):
        return DecayBudget(0.0, 0, 1.0)

    def radial(self, r):
        return np.ones_like(np.asarray(r, dtype=float))

    def render(self):
        return "one"


@dataclass(frozen=True)
class GaussRadial(SymbolSpec):
    """``exp(-a |z|^2 / 2)``; ``a > -1`` so the Fock integrals converge."""

    a: float
    name = "gauss-radial"
    is_radial = True

    def __post_init__(self):
        if not self.a > -1:
            raise ConstraintError(f"a must exceed -1 (got {self.a})")

    @property
    def decay(self):
        return DecayBudget(-self.a / 2.0, 0, 1.0)

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return np.exp(-0.5 * self.a * r * r)

    def radial_scaled(self, r):
        r = np.asarray(r, dtype=float)
        return np.ones_like(r), -0.5 * self.a * r * r

    def render(self):
        return f"gauss-radial:a={_fmt(self.a)}"


@dataclass(frozen=True)
class PolyGaussRadial(SymbolSpec):
    """``|z|^p exp(-a |z|^2 / 2)`` with even ``p``."""

    p: int
    a: float
    name = "poly-gauss-radial"
    is_radial = True

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 0 or self.p % 2:
            raise ConstraintError(f"p must be an even nonnegative integer (got {self.p})")
        if not self.a > -1:
            raise ConstraintError(f"a must exceed -1 (got {self.a})")

    @property
    def decay(self):
        # r^p <= (1+r)^p
        return DecayBudget(-self.a / 2.0, int(self.p), 1.0)

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return r ** self.p * np.exp(-0.5 * self.a * r * r)

    def radial_scaled(self, r):
        r = np.asarray(r, dtype=float)
        return r ** self.p, -0.5 * self.a * r * r

    def render(self):
        return f"poly-gauss-radial:p={int(self.p)},a={_fmt(self.a)}"


@dataclass(frozen=True)
class Annulus(SymbolSpec):
    """Indicator of ``r0 <= |z| < r1``."""

    r0: float
    r1: float
    name = "annulus"
    is_radial = True

    def __post_init__(self):
        if not (0 <= self.r0 < self.r1 and math.isfinite(self.r1)):
            raise ConstraintError(f"annulus needs 0 <= r0 < r1 (got r0={self.r0}, r1={self.r1})")

    @property
    def decay(self):
        return DecayBudget(0.0, 0, 1.0)

    @property
    def support(self):
        return (float(self.r0), float(self.r1))

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return ((r >= self.r0) & (r < self.r1)).astype(float)

    def render(self):
        return f"annulus:r0={_fmt(self.r0)},r1={_fmt(self.r1)}"


@dataclass(frozen=True)
class GaussYV(SymbolSpec):
    """``exp(alpha |y|^2 + beta |v|^2)`` on ``R^n x R^n``; points are ``(y, v)`` concatenated."""

    alpha: complex
    beta: complex
    name = "gauss-yv"

    @property
    def is_radial(self):
        return self.alpha == self.beta

    @property
    def decay(self):
        return DecayBudget(max(complex(self.alpha).real, complex(self.beta).real), 0, 1.0)

    def evaluate(self, points):
        points = np.asarray(points, dtype=float)
        d = points.shape[-1]
        if d % 2:
            raise ValueError("gauss-yv needs an even number of coordinates")
        h = d // 2
        y2 = np.sum(points[..., :h] ** 2, axis=-1)
        v2 = np.sum(points[..., h:] ** 2, axis=-1)
        return np.exp(complex(self.alpha) * y2 + complex(self.beta) * v2)

    def radial(self, r):
        if not self.is_radial:
            return super().radial(r)
        r = np.asarray(r, dtype=float)
        return np.exp(complex(self.alpha) * r * r)

    def render(self):
        return f"gauss-yv:alpha={_fmt_complex(self.alpha)},beta={_fmt_complex(self.beta)}"


@dataclass(frozen=True)
class GaussY(SymbolSpec):
    """``g0(y) = exp(-a |y|^2)``, a symbol that only sees the imaginary part."""

    a: float
    name = "gauss-y"
    is_radial = True

    def __post_init__(self):
        if not self.a > 0:
            raise ConstraintError(f"a must be positive (got {self.a})")

    @property
    def decay(self):
        return DecayBudget(-self.a, 0, 1.0)

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return np.exp(-self.a * r * r)

    def radial_scaled(self, r):
        r = np.asarray(r, dtype=float)
        return np.ones_like(r), -self.a * r * r

    def render(self):
        return f"gauss-y:a={_fmt(self.a)}"


@dataclass(frozen=True)
class GaussH(SymbolSpec):
    """Auxiliary radial profile ``h(y, v) = exp(-c (|y|^2 + |v|^2))``, ``c > 1``."""

    c: float
    name = "gauss-h"
    is_radial = True

    def __post_init__(self):
        if not self.c > 1:
            raise ConstraintError(f"c must exceed 1 (got c={self.c}); "
                                  "h * exp(|y|^2+|v|^2) must be integrable")

    @property
    def decay(self):
        return DecayBudget(-self.c, 0, 1.0)

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return np.exp(-self.c * r * r)

    def radial_scaled(self, r):
        r = np.asarray(r, dtype=float)
        return np.ones_like(r), -self.c * r * r

    def render(self):
        return f"gauss-h:c={_fmt(self.c)}"


@dataclass(frozen=True)
class GroupGauss(SymbolSpec):
    """``g0(exp H) = exp(-b H^2)`` on the rank-one flat."""

    b: float
    name = "group-gauss"
    is_radial = True

    def __post_init__(self):
        if not self.b > 0:
            raise ConstraintError(f"b must be positive (got {self.b})")

    @property
    def decay(self):
        return DecayBudget(-self.b, 0, 1.0)

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return np.exp(-self.b * r * r)

    def radial_scaled(self, r):
        r = np.asarray(r, dtype=float)
        return np.ones_like(r), -self.b * r * r

    def render(self):
        return f"group-gauss:b={_fmt(self.b)}"


@dataclass(frozen=True)
class RadialProfile(SymbolSpec):
    """Arbitrary radial profile supplied as a callable ``f(r)`` with its own budget."""

    func: object = field(compare=False)
    budget: DecayBudget = None
    support: tuple = None
    name = "custom-radial"
    is_radial = True

    def __post_init__(self):
        if self.budget is None:
            raise ConstraintError("RadialProfile needs an explicit DecayBudget")

    @property
    def decay(self):
        return self.budget

    def radial(self, r):
        return np.asarray(self.func(np.asarray(r, dtype=float)))


# ---------------------------------------------------------------------------
# grammar

_FLOAT_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")
_UINT_RE = re.compile(r"^\d+$")
_COMPLEX_RE = re.compile(
    r"^(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"(?:(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)?$")

_FIELDS = {
    "one": (),
    "gauss-radial": (("a", "f"),),
    "poly-gauss-radial": (("p", "u"), ("a", "f")),
    "annulus": (("r0", "f"), ("r1", "f")),
    "gauss-yv": (("alpha", "c"), ("beta", "c")),
    "gauss-y": (("a", "f"),),
    "gauss-h": (("c", "f"),),
    "group-gauss": (("b", "f"),),
}

_CLASSES = {
    "one": One,
    "gauss-radial": GaussRadial,
    "poly-gauss-radial": PolyGaussRadial,
    "annulus": Annulus,
    "gauss-yv": GaussYV,
    "gauss-y": GaussY,
    "gauss-h": GaussH,
    "group-gauss": GroupGauss,
}


def _parse_value(token: str, kind: str):
    if kind == "u":
        if not _UINT_RE.match(token):
            raise SymbolParseError(f"expected a nonnegative integer, got {token!r}", token)
        return int(token)
    if kind == "f":
        if not _FLOAT_RE.match(token):
            raise SymbolParseError(f"expected a decimal float, got {token!r}", token)
        return float(token)
    m = _COMPLEX_RE.match(token)
    if not m:
        raise SymbolParseError(f"expected a complex number re+imi, got {token!r}", token)
    im = float(m.group("im")) if m.group("im") else 0.0
    return complex(float(m.group("re")), im)


def parse_symbol(text: str) -> SymbolSpec:
    """Parse the symbol grammar, e.g. ``gauss-radial:a=1.0`` or ``gauss-yv:alpha=-1+0i,beta=-1+0i``."""
    if not isinstance(text, str) or not text:
        raise SymbolParseError("empty symbol text", text)
    head, sep, tail = text.partition(":")
    if head not in _FIELDS:
        raise SymbolParseError(f"unknown symbol family {head!r}", head)
    fields = _FIELDS[head]
    if not fields:
        if sep:
            raise SymbolParseError(f"{head!r} takes no parameters", tail)
        return One()
    if not sep or not tail:
        raise SymbolParseError(f"{head!r} needs parameters "
                               + ",".join(f"{n}=..." for n, _ in fields), head)
    parts = tail.split(",")
    if len(parts) != len(fields):
        raise SymbolParseError(f"{head!r} expects {len(fields)} parameter(s), got {len(parts)}", tail)
    values = []
    for part, (fname, kind) in zip(parts, fields):
        key, eq, raw = part.partition("=")
        if key != fname or not eq:
            raise SymbolParseError(f"expected '{fname}=<value>', got {part!r}", part)
        values.append(_parse_value(raw, kind))
    return _CLASSES[head](*values)


def render_symbol(symbol: SymbolSpec) -> str:
    return symbol.render()


# ---------------------------------------------------------------------------
# sequences and verdicts


@dataclass(frozen=True)
class SequenceReport:
    """A computed sequence ``k -> value`` with a heuristic boundedness verdict.

    The verdict is a numerical reading of the tail, not a proof about the
    operator.
    """

    entries: tuple
    sup_abs: float
    verdict: str
    tail_ratio: float
    tail_power: float

    @property
    def ks(self):
        return [k for k, _ in self.entries]

    @property
    def values(self):
        return np.array([v for _, v in self.entries], dtype=complex)


def _tail_fit(values):
    absval = np.abs(np.asarray(values, dtype=complex))
    n = len(absval)
    start = n - max(n // 3, 3)
    tail = absval[start:]
    j = np.arange(start, n, dtype=float) + 1.0
    logs = np.log(np.maximum(tail, 1e-300))
    design = np.column_stack([np.ones_like(j), np.log(j), j])
    coef, *_ = np.linalg.lstsq(design, logs, rcond=None)
    return math.exp(coef[2]), float(coef[1])


def classify_verdict(values, delta: float = DEFAULT_DELTA):
    """Fit ``|v_j| ~ C j^p rho^j`` on the last third and classify.

    Returns ``(verdict, rho, p)``.  ``j`` is the 1-based position in the
    sequence, so multiplying every value by a constant only moves ``C``.
    """
    values = list(values)
    if len(values) < MIN_ENTRIES:
        raise InsufficientDataError(
            f"need at least {MIN_ENTRIES} entries to classify, got {len(values)}")
    rho, p = _tail_fit(values)
    if rho < 1 - delta or (abs(rho - 1) <= delta and p <= delta):
        verdict = BOUNDED
    elif rho > 1 + delta or (abs(rho - 1) <= delta and p > 2 * delta):
        verdict = UNBOUNDED
    else:
        verdict = INCONCLUSIVE
    return verdict, rho, p


def make_report(ks, values, delta: float = DEFAULT_DELTA) -> SequenceReport:
    values = [complex(v) for v in values]
    entries = tuple((k, v) for k, v in zip(ks, values))
    sup_abs = max((abs(v) for v in values), default=0.0)
    if len(values) >= MIN_ENTRIES:
        verdict, rho, p = classify_verdict(values, delta)
    else:
        verdict, rho, p = INCONCLUSIVE, float("nan"), float("nan")
    return SequenceReport(entries, sup_abs, verdict, rho, p)
