import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sbtoeplitz import (BOUNDED, ConstraintError, INCONCLUSIVE, UNBOUNDED, InsufficientDataError,
                        ScaledValue, SymbolParseError, classify_verdict, parse_symbol,
                        render_symbol)
from sbtoeplitz.core import Annulus, GaussRadial, GaussYV, One, PolyGaussRadial

pos = st.floats(0.01, 50.0, allow_nan=False)


@st.composite
def symbols(draw):
    kind = draw(st.sampled_from(["one", "gauss-radial", "poly-gauss-radial", "annulus",
                                 "gauss-yv", "gauss-y", "gauss-h", "group-gauss"]))
    if kind == "one":
        return "one"
    if kind == "poly-gauss-radial":
        return f"{kind}:p={2 * draw(st.integers(0, 4))},a={draw(pos)!r}"
    if kind == "annulus":
        r0 = draw(st.floats(0.0, 5.0))
        return f"annulus:r0={r0!r},r1={r0 + draw(pos)!r}"
    if kind == "gauss-yv":
        a = complex(-draw(pos), draw(st.floats(-3, 3)))
        b = complex(-draw(pos), draw(st.floats(-3, 3)))
        return f"gauss-yv:alpha={a.real!r}{a.imag:+}i,beta={b.real!r}{b.imag:+}i"
    if kind == "gauss-h":
        return f"gauss-h:c={1.0 + draw(pos)!r}"
    key = {"gauss-radial": "a", "gauss-y": "a", "group-gauss": "b"}[kind]
    return f"{kind}:{key}={draw(pos)!r}"


@given(symbols())
@settings(max_examples=200, deadline=None)
def test_parse_render_round_trip(text):
    sym = parse_symbol(text)
    again = parse_symbol(render_symbol(sym))
    assert again == sym
    assert render_symbol(again) == render_symbol(sym)


def test_parse_families():
    assert parse_symbol("one") == One()
    assert parse_symbol("gauss-radial:a=1.0") == GaussRadial(1.0)
    assert parse_symbol("poly-gauss-radial:p=2,a=1") == PolyGaussRadial(2, 1.0)
    assert parse_symbol("annulus:r0=1,r1=2") == Annulus(1.0, 2.0)
    g = parse_symbol("gauss-yv:alpha=-1+0.5i,beta=-2")
    assert g == GaussYV(complex(-1, 0.5), complex(-2, 0))


@pytest.mark.parametrize("bad", [
    "", "gauss", "one:a=1", "gauss-radial", "gauss-radial:b=1", "gauss-radial:a=x",
    "annulus:1,2", "poly-gauss-radial:p=1.5,a=1", "poly-gauss-radial:p=3,a=1", "gauss-radial:a=1,a=2",
    "gauss-yv:alpha=1+i,beta=0",
])
def test_parse_rejects(bad):
    with pytest.raises((SymbolParseError, ConstraintError)):
        parse_symbol(bad)


def test_verdicts():
    k = np.arange(30)
    assert classify_verdict(0.9 ** k)[0] == BOUNDED
    assert classify_verdict(np.ones(30))[0] == BOUNDED
    assert classify_verdict(1.2 ** k)[0] == UNBOUNDED
    assert classify_verdict((k + 1.0) ** 1.5)[0] == UNBOUNDED
    with pytest.raises(InsufficientDataError):
        classify_verdict(np.ones(5))


@given(st.floats(0.7, 1.3), st.floats(-1, 1), st.floats(1e-6, 1e6))
@settings(max_examples=100, deadline=None)
def test_verdict_scale_invariant(rho, p, scale):
    j = np.arange(1, 41, dtype=float)
    v = j ** p * rho ** j
    assert classify_verdict(v)[0] == classify_verdict(scale * v)[0]
    assert classify_verdict(v)[0] in (BOUNDED, UNBOUNDED, INCONCLUSIVE)


finite = st.floats(-1e3, 1e3).filter(lambda x: abs(x) > 1e-3)
logs = st.floats(-2000, 2000)


@given(finite, logs, finite, logs, finite, logs)
@settings(max_examples=200, deadline=None)
def test_scaled_value_associative(a, la, b, lb, c, lc):
    x, y, z = ScaledValue(a, la), ScaledValue(b, lb), ScaledValue(c, lc)
    lhs = (x * y) * z
    rhs = x * (y * z)
    assert lhs.close_to(rhs, 1e-12)
    assert (x / y).close_to(x * (1 / y), 1e-12)


def test_scaled_value_range():
    big = ScaledValue.exp(5000.0)
    small = ScaledValue.exp(-4990.0)
    np.testing.assert_allclose((big * small).to_float(), np.exp(10.0), rtol=1e-12)
    np.testing.assert_allclose((big + big).log_abs(), 5000.0 + np.log(2.0), rtol=1e-14)
    assert ScaledValue.from_value(0.0).is_zero
