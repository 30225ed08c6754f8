import pytest

from sbtoeplitz import suite


def test_check_registry():
    assert len(suite.CHECKS) >= 14
    assert set(suite.DEFAULT_TOLERANCES) == set(suite.CHECKS)


@pytest.mark.parametrize("name", list(suite.CHECKS))
def test_check_passes_at_default_tolerance(name):
    r = suite.run_check(name)
    assert r.passed, r.measured
    d = r.as_dict()
    assert set(d) == {"check", "params", "measured", "tolerance", "pass"}


def test_tolerance_override_can_fail():
    assert not suite.run_check("lemma22", tol=1e-15).passed


def test_overrides_are_forwarded():
    r = suite.run_check("identity37", n=2, t=0.25, kmax=10)
    assert r.params == {"n": [2], "t": [0.25], "kmax": 10}
    assert abs(r.measured["kappa"] - 1 / 16) < 1e-12
