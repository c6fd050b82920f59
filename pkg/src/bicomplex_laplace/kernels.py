"""Hot numeric loops.

Each kernel exists twice: an explicit-loop version compiled with numba and a
vectorized numpy version.  ``_jit.USE_NUMBA`` picks which pair is exported
under the public names; both are importable for testing and benchmarking.

Polynomial coefficient arrays are complex128 in ascending degree order.
"""

import math

import numpy as np

from ._jit import USE_NUMBA, njit

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------- loop kernels


def _horner_loop(coeffs, z):
    n = coeffs.shape[0]
    out = np.empty(z.shape[0], dtype=np.complex128)
    for i in range(z.shape[0]):
        acc = 0j
        for k in range(n - 1, -1, -1):
            acc = acc * z[i] + coeffs[k]
        out[i] = acc
    return out


def _bromwich_line_loop(num, den, x, t, h, n, half_line):
    nn = num.shape[0]
    nd = den.shape[0]
    total = 0j
    start = 0 if half_line else -n
    for j in range(start, n + 1):
        s = complex(x, j * h)
        p = 0j
        for k in range(nn - 1, -1, -1):
            p = p * s + num[k]
        q = 0j
        for k in range(nd - 1, -1, -1):
            q = q * s + den[k]
        term = np.exp(s * t) * p / q
        if j == n or j == -n or (half_line and j == 0):
            term = 0.5 * term
        total += term
    if half_line:
        return complex(total.real * h / math.pi, 0.0)
    return total * h / TWO_PI


def _aberth_loop(coeffs, z0, max_iter, tol):
    # coeffs ascending, leading coefficient nonzero; z0 holds the starting guesses.
    n = coeffs.shape[0] - 1
    z = z0.copy()
    done = np.zeros(n, dtype=np.bool_)
    eps = 2.220446049250313e-16
    iterations = 0
    for it in range(max_iter):
        iterations = it + 1
        n_done = 0
        for k in range(n):
            if done[k]:
                n_done += 1
                continue
            zk = z[k]
            p = coeffs[n]
            dp = 0j
            scale = abs(coeffs[n])
            az = abs(zk)
            for m in range(n - 1, -1, -1):
                dp = dp * zk + p
                p = p * zk + coeffs[m]
                scale = scale * az + abs(coeffs[m])
            if abs(p) <= 4.0 * eps * scale:
                done[k] = True
                n_done += 1
                continue
            if dp == 0:
                dp = complex(eps, eps)
            ratio = p / dp
            acc = 0j
            for j in range(n):
                if j != k:
                    d = zk - z[j]
                    if d == 0:
                        d = complex(eps, 0.0)
                    acc += 1.0 / d
            corr = ratio / (1.0 - ratio * acc)
            z[k] = zk - corr
            if abs(corr) <= tol * (1.0 + abs(z[k])):
                done[k] = True
        if n_done == n:
            break
    converged = True
    for k in range(n):
        if not done[k]:
            converged = False
    return z, iterations, converged


# --------------------------------------------------------------- numpy kernels


def _horner_np(coeffs, z):
    out = np.zeros(z.shape, dtype=np.complex128)
    for c in coeffs[::-1]:
        out = out * z + c
    return out


def _bromwich_line_np(num, den, x, t, h, n, half_line):
    j = np.arange(0 if half_line else -n, n + 1)
    s = x + 1j * (j * h)
    w = np.ones(j.shape[0])
    w[-1] = 0.5
    w[0] = 0.5
    terms = w * np.exp(s * t) * _horner_np(num, s) / _horner_np(den, s)
    total = terms.sum()
    if half_line:
        return complex(total.real * h / math.pi, 0.0)
    return complex(total * h / TWO_PI)


def _aberth_np(coeffs, z0, max_iter, tol):
    n = coeffs.shape[0] - 1
    z = z0.astype(np.complex128).copy()
    deriv = coeffs[1:] * np.arange(1, n + 1)
    abs_coeffs = np.abs(coeffs).astype(np.complex128)
    eps = np.finfo(float).eps
    done = np.zeros(n, dtype=bool)
    iterations = 0
    for it in range(max_iter):
        iterations = it + 1
        p = _horner_np(coeffs, z)
        scale = _horner_np(abs_coeffs, np.abs(z).astype(np.complex128)).real
        done |= np.abs(p) <= 4.0 * eps * scale
        if done.all():
            break
        dp = _horner_np(deriv, z)
        dp = np.where(dp == 0, eps + 1j * eps, dp)
        ratio = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        diff = np.where(diff == 0, eps, diff)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        corr = ratio / (1.0 - ratio * inv.sum(axis=1))
        corr[done] = 0.0
        z = z - corr
        done |= np.abs(corr) <= tol * (1.0 + np.abs(z))
        if done.all():
            break
    return z, iterations, bool(done.all())


# ------------------------------------------------------------------- selection

horner_jit = njit(_horner_loop)
bromwich_line_jit = njit(_bromwich_line_loop)
aberth_jit = njit(_aberth_loop)

if USE_NUMBA:
    _horner, _bromwich_line, _aberth = horner_jit, bromwich_line_jit, aberth_jit
else:
    _horner, _bromwich_line, _aberth = _horner_np, _bromwich_line_np, _aberth_np

BACKEND = "numba" if USE_NUMBA else "numpy"


def horner(coeffs, z):
    """Evaluate the ascending-order polynomial ``coeffs`` at every point of ``z``."""
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    zz = np.ascontiguousarray(np.atleast_1d(z), dtype=np.complex128).ravel()
    return _horner(c, zz)


def bromwich_line(num, den, x, t, h, n, half_line=False):
    """Trapezoid sum of ``(1/2pi) * exp(s t) num(s)/den(s)`` over ``s = x + i*j*h``.

    ``j`` runs over ``-n..n``.  With ``half_line`` only ``j >= 0`` is visited and
    the conjugate half is folded in, which is valid for real-coefficient
    rationals only.
    """
    return _bromwich_line(
        np.ascontiguousarray(num, dtype=np.complex128),
        np.ascontiguousarray(den, dtype=np.complex128),
        float(x), float(t), float(h), int(n), bool(half_line),
    )


def aberth(coeffs, z0, max_iter=500, tol=1e-14):
    """Simultaneous Aberth-Ehrlich iteration.

    Returns ``(roots, iterations, converged)``.
    """
    return _aberth(
        np.ascontiguousarray(coeffs, dtype=np.complex128),
        np.ascontiguousarray(z0, dtype=np.complex128),
        int(max_iter), float(tol),
    )
