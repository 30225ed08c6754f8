"""Pure numpy implementations of the recurrence kernels.

Same signatures as the compiled ``_ckernels`` module; used when the
extension is not built or ``SBTOEPLITZ_PURE_PYTHON`` is set.
"""
import math

import numpy as np

_BIG = 1e150
_LOG_BIG = math.log(_BIG)


def laguerre_rows(ks, a, x):
    """Rows ``L_k^a(x)`` for each ``k`` in the ascending array ``ks``.

    Returns ``(mant, logs)`` with value ``mant * exp(logs)``.
    """
    ks = np.asarray(ks, dtype=np.int64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    out_m = np.empty((ks.size, x.size))
    out_l = np.zeros((ks.size, x.size))
    if ks.size == 0:
        return out_m, out_l
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    logs = np.zeros_like(x)
    row = 0
    kmax = int(ks[-1])
    for j in range(kmax + 1):
        while row < ks.size and ks[row] == j:
            out_m[row] = cur
            out_l[row] = logs
            row += 1
        if j == kmax:
            break
        nxt = ((2 * j + 1 + a - x) * cur - (j + a) * prev) / (j + 1)
        prev, cur = cur, nxt
        big = np.abs(cur) > _BIG
        if big.any():
            cur = np.where(big, cur / _BIG, cur)
            prev = np.where(big, prev / _BIG, prev)
            logs = np.where(big, logs + _LOG_BIG, logs)
    return out_m, out_l


def hermite_fn_rows(kmax, z):
    """Normalised Hermite functions ``Phi_0..Phi_kmax`` at complex points."""
    z = np.ascontiguousarray(z, dtype=np.complex128)
    out = np.empty((kmax + 1, z.size), dtype=np.complex128)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * z * z)
    if kmax >= 1:
        out[1] = math.sqrt(2.0) * z * out[0]
    for k in range(1, kmax):
        out[k + 1] = (math.sqrt(2.0 / (k + 1)) * z * out[k]
                      - math.sqrt(k / (k + 1.0)) * out[k - 1])
    return out


def christoffel_log(diag, offdiag, mu0, x):
    """``log sum_{j<m} p_j(x)^2`` for the orthonormal family of a Jacobi matrix.

    ``diag`` has length m, ``offdiag`` length m-1.
    """
    diag = np.asarray(diag, dtype=np.float64)
    offdiag = np.asarray(offdiag, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    m = diag.size
    prev = np.zeros_like(x)
    cur = np.full_like(x, 1.0 / math.sqrt(mu0))
    logs = np.zeros_like(x)      # common scale: p_j = cur * exp(logs)
    acc = cur * cur              # sum scaled by exp(-2*logs)
    for j in range(m - 1):
        nxt = ((x - diag[j]) * cur - (offdiag[j - 1] if j > 0 else 0.0) * prev) / offdiag[j]
        prev, cur = cur, nxt
        acc = acc + cur * cur
        big = np.abs(cur) > _BIG
        if big.any():
            cur = np.where(big, cur / _BIG, cur)
            prev = np.where(big, prev / _BIG, prev)
            acc = np.where(big, acc / (_BIG * _BIG), acc)
            logs = np.where(big, logs + _LOG_BIG, logs)
    return np.log(acc) + 2.0 * logs
