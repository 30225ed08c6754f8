import os
import subprocess
import sys

import numpy as np
import pytest
from scipy import special

from sbtoeplitz import _pykernels, kernels

try:
    from sbtoeplitz import _ckernels
except ImportError:
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def _value(mant, logs):
    return mant * np.exp(logs)


def test_python_laguerre_matches_scipy():
    x = np.linspace(0.0, 30.0, 61)
    ks = np.array([0, 1, 5, 17, 40])
    for a in (0.0, 1.0, 2.5):
        mant, logs = _pykernels.laguerre_rows(ks, a, x)
        ref = np.array([special.eval_genlaguerre(k, a, x) for k in ks])
        np.testing.assert_allclose(_value(mant, logs), ref, rtol=1e-10, atol=1e-12 * np.abs(ref).max())


def test_python_hermite_matches_scipy():
    x = np.linspace(-6.0, 6.0, 49)
    rows = _pykernels.hermite_fn_rows(20, x.astype(complex))
    for k in range(21):
        norm = 1.0 / np.sqrt(2.0 ** k * special.factorial(k) * np.sqrt(np.pi))
        ref = norm * special.eval_hermite(k, x) * np.exp(-x * x / 2)
        np.testing.assert_allclose(rows[k].real, ref, rtol=1e-10, atol=1e-13)


@needs_ext
def test_backends_agree_laguerre():
    x = np.linspace(0.0, 500.0, 301)
    ks = np.arange(0, 300, 11)
    cm, cl = _ckernels.laguerre_rows(ks, 1.0, x)
    pm, pl = _pykernels.laguerre_rows(ks, 1.0, x)
    np.testing.assert_allclose(_value(cm, cl - pl), pm, rtol=1e-12, atol=1e-300)


@needs_ext
def test_backends_agree_hermite():
    z = np.linspace(-20.0, 20.0, 201) + 0.3j
    np.testing.assert_allclose(_ckernels.hermite_fn_rows(80, z), _pykernels.hermite_fn_rows(80, z),
                               rtol=1e-12, atol=1e-300)


@needs_ext
def test_backends_agree_christoffel():
    n = 60
    diag = np.zeros(n)
    off = np.sqrt(np.arange(1, n) / 2.0)
    nodes = np.linalg.eigvalsh(np.diag(off, 1) + np.diag(off, -1))
    np.testing.assert_allclose(_ckernels.christoffel_log(diag, off, np.sqrt(np.pi), nodes),
                               _pykernels.christoffel_log(diag, off, np.sqrt(np.pi), nodes),
                               rtol=1e-12)


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert kernels.BACKEND == "cython"


def test_pure_python_switch():
    env = dict(os.environ, SBTOEPLITZ_PURE_PYTHON="1")
    code = ("import sbtoeplitz; from sbtoeplitz import fock, core;"
            "print(sbtoeplitz.BACKEND);"
            "print(repr(float(fock.radial_seq_direct(core.GaussRadial(1.0), 1, 10).values[-1].real)))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    assert out[0] == "python"
    from sbtoeplitz import core, fock
    here = fock.radial_seq_direct(core.GaussRadial(1.0), 1, 10).values[-1].real
    np.testing.assert_allclose(float(out[1]), here, rtol=1e-12)
