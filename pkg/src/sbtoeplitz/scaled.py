"""Extended-exponent numbers: ``mantissa * exp(log_scale)``.

Values such as ``L_k(-2r^2) e^{r^2}`` leave the double range long before the
quantities built from them do; carrying the natural-log exponent separately
keeps products exact in range and defers rounding to the final conversion.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class ScaledValue:
    """``mantissa * exp(log_scale)`` with ``|mantissa|`` in ``[1, 2)`` or zero."""

    mantissa: complex
    log_scale: float

    def __post_init__(self):
        m = complex(self.mantissa)
        a = abs(m)
        if a == 0.0 or not math.isfinite(a):
            object.__setattr__(self, "mantissa", m if a != 0.0 else 0j)
            object.__setattr__(self, "log_scale", float(self.log_scale) if a else 0.0)
            return
        e = math.floor(math.log2(a))
        m = m / 2.0 ** e
        # guard the log2 rounding at exact powers of two
        if abs(m) >= 2.0:
            m /= 2.0
            e += 1
        elif abs(m) < 1.0:
            m *= 2.0
            e -= 1
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "log_scale", float(self.log_scale) + e * _LN2)

    @classmethod
    def from_value(cls, x) -> "ScaledValue":
        return cls(complex(x), 0.0)

    @classmethod
    def exp(cls, z) -> "ScaledValue":
        """``e^z`` for complex ``z`` without forming it in floating point."""
        z = complex(z)
        return cls(cmath.exp(1j * z.imag), z.real)

    @classmethod
    def from_log(cls, log_abs: float, phase: complex = 1.0) -> "ScaledValue":
        return cls(complex(phase), float(log_abs))

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0

    def log_abs(self) -> float:
        if self.is_zero:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.log_scale

    def to_complex(self) -> complex:
        """Convert to a native complex; overflow gives ``inf`` (read ``log_abs`` instead)."""
        if self.is_zero:
            return 0j
        if self.log_scale > 709.0:
            with np.errstate(over="ignore"):
                mag = np.exp(self.log_scale)
            return complex(self.mantissa * mag) if mag != np.inf else complex(
                math.copysign(math.inf, self.mantissa.real) if self.mantissa.real else 0.0,
                math.copysign(math.inf, self.mantissa.imag) if self.mantissa.imag else 0.0)
        return self.mantissa * math.exp(self.log_scale)

    def to_float(self) -> float:
        c = self.to_complex()
        return c.real

    def __complex__(self):
        return self.to_complex()

    def __float__(self):
        return self.to_float()

    def _coerce(self, other) -> "ScaledValue":
        if isinstance(other, ScaledValue):
            return other
        return ScaledValue.from_value(other)

    def __mul__(self, other):
        o = self._coerce(other)
        return ScaledValue(self.mantissa * o.mantissa, self.log_scale + o.log_scale)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero:
            raise ZeroDivisionError("ScaledValue division by zero")
        return ScaledValue(self.mantissa / o.mantissa, self.log_scale - o.log_scale)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __add__(self, other):
        o = self._coerce(other)
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        hi, lo = (self, o) if self.log_scale >= o.log_scale else (o, self)
        gap = lo.log_scale - hi.log_scale
        m = hi.mantissa + (lo.mantissa * math.exp(gap) if gap > -800 else 0.0)
        return ScaledValue(m, hi.log_scale)

    __radd__ = __add__

    def __neg__(self):
        return ScaledValue(-self.mantissa, self.log_scale)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __pow__(self, k: int):
        if int(k) != k:
            raise ValueError("only integer powers are supported")
        k = int(k)
        if self.is_zero:
            return ScaledValue(0.0 if k else 1.0, 0.0)
        return ScaledValue(self.mantissa ** k, self.log_scale * k)

    def close_to(self, other, rel: float) -> bool:
        o = self._coerce(other)
        diff = self - o
        if diff.is_zero:
            return True
        return diff.log_abs() <= math.log(rel) + max(self.log_abs(), o.log_abs())

    def __repr__(self):
        return f"ScaledValue({self.mantissa!r}, {self.log_scale!r})"


def scaled_from_arrays(mant, logs):
    """Elementwise list of :class:`ScaledValue` from kernel output."""
    mant = np.atleast_1d(np.asarray(mant))
    logs = np.broadcast_to(np.asarray(logs, dtype=float), mant.shape)
    return [ScaledValue(complex(m), float(l)) for m, l in zip(mant.ravel(), logs.ravel())]


def scaled_to_array(mant, logs):
    """Collapse ``mant * exp(logs)`` to native numbers (may overflow to inf)."""
    with np.errstate(over="ignore"):
        return np.asarray(mant) * np.exp(np.asarray(logs, dtype=float))
