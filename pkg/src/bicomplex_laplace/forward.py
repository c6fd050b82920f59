"""Numerical bicomplex Laplace transform ``F(xi) = int_0^inf f(t) exp(-xi t) dt``.

The integral is split along the idempotents: ``F1(xi1)`` and ``F2(xi2)`` are
ordinary complex transforms, recombined as ``F1 e1 + F2 e2``.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bicomplex import Bicomplex, IdempotentPair, from_idempotent, to_idempotent
from .errors import (
    BicomplexLaplaceError,
    ConvergenceRegionError,
    InvalidArgumentError,
    TruncationError,
)

REGION_MARGIN = 1e-6
GL_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)


@dataclass(frozen=True)
class QuadratureConfig:
    t_max: float = 40.0
    n_panels: int = 16
    tail_tol: float = 1e-10
    rule: str = "adaptive-subdivision"
    max_panels: int = 1 << 16
    t_cap: float = 1e5

    def __post_init__(self):
        if not self.t_max > 0:
            raise InvalidArgumentError("t_max must be positive")
        if self.n_panels < 8:
            raise InvalidArgumentError("n_panels must be at least 8")
        if not self.tail_tol > 0:
            raise InvalidArgumentError("tail_tol must be positive")
        if self.rule not in ("adaptive-subdivision", "fixed-composite"):
            raise InvalidArgumentError(f"unknown quadrature rule {self.rule!r}")


def in_region(xi, k):
    """True iff both idempotent components of ``xi`` have real part strictly above ``k``."""
    pair = to_idempotent(xi)
    return pair.xi1.real > k and pair.xi2.real > k


def _composite_gl(edges):
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    weights = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return nodes, weights


def _panel_edges(t_end, n, knots):
    edges = np.linspace(0.0, t_end, n + 1)
    if knots:
        inner = np.asarray([k for k in knots if 0.0 < k < t_end], dtype=float)
        if inner.size:
            edges = np.union1d(edges, inner)
    return edges


def _tail_bound(m, k, sigma_re, t_end):
    gap = sigma_re - k
    return m * math.exp(-gap * t_end) / gap


def laplace_complex(f, s, cfg=None):
    """Complex Laplace transform of ``f`` at a single point ``s`` with ``Re s > k``."""
    cfg = cfg or QuadratureConfig()
    s = complex(s)
    k = f.order_k
    if not s.real >= k + REGION_MARGIN:
        raise ConvergenceRegionError(
            f"Re(s) = {s.real:g} is not inside the convergence half-plane Re(s) > {k:g}"
        )
    m = max(f.bound_m, 1e-300)

    t_end = cfg.t_max
    while _tail_bound(m, k, s.real, t_end) >= cfg.tail_tol:
        t_end *= 2.0
        if t_end > cfg.t_cap:
            raise TruncationError(
                f"tail bound for s={s} still above {cfg.tail_tol:g} at t={cfg.t_cap:g}"
            )

    # a quarter oscillation per panel at most, and a bounded exponential drop per panel
    n = cfg.n_panels
    if s.imag:
        n = max(n, math.ceil(t_end * 4.0 * abs(s.imag) / math.pi))
    n = max(n, math.ceil(t_end * abs(s.real) / 4.0))
    if n > cfg.max_panels:
        raise TruncationError(f"{n} panels needed for s={s}, cap is {cfg.max_panels}")

    def integrate(n_pan):
        nodes, weights = _composite_gl(_panel_edges(t_end, n_pan, f.knots))
        return complex(np.sum(weights * f.values(nodes) * np.exp(-s * nodes)))

    value = integrate(n)
    if cfg.rule == "fixed-composite":
        return value
    while True:
        n *= 2
        if n > cfg.max_panels:
            raise TruncationError(
                f"panel refinement for s={s} did not settle below {cfg.tail_tol:g} "
                f"within {cfg.max_panels} panels"
            )
        refined = integrate(n)
        if abs(refined - value) < cfg.tail_tol * max(1.0, abs(refined)):
            return refined
        value = refined


def laplace_point(f, xi, cfg=None):
    """Bicomplex transform ``F1(xi1) e1 + F2(xi2) e2`` of the signal ``f`` at ``xi``."""
    cfg = cfg or QuadratureConfig()
    xi = Bicomplex.coerce(xi)
    pair = to_idempotent(xi)
    k = f.order_k
    for name, comp in (("xi1", pair.xi1), ("xi2", pair.xi2)):
        if not comp.real >= k + REGION_MARGIN:
            raise ConvergenceRegionError(
                f"{name} = {comp} has Re <= k + margin ({k:g} + {REGION_MARGIN:g}); "
                f"xi = {xi!r} is outside the region of convergence"
            )
    v1 = laplace_complex(f, pair.xi1, cfg)
    # xi1 == xi2 means xi is an ordinary complex number: one transform suffices
    v2 = v1 if pair.xi2 == pair.xi1 else laplace_complex(f, pair.xi2, cfg)
    return from_idempotent(IdempotentPair(v1, v2))


@dataclass(frozen=True)
class PointResult:
    xi: Bicomplex
    value: Optional[Bicomplex]
    status: str = "ok"
    error: str = ""

    @property
    def ok(self):
        return self.status == "ok"


def laplace_grid(f, xis, cfg=None):
    """Evaluate :func:`laplace_point` at every ``xi``; failures are recorded per point."""
    out = []
    for xi in xis:
        xi = Bicomplex.coerce(xi)
        try:
            out.append(PointResult(xi, laplace_point(f, xi, cfg)))
        except BicomplexLaplaceError as exc:
            out.append(PointResult(xi, None, type(exc).__name__, str(exc)))
    return out
