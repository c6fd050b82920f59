"""Inverse bicomplex Laplace transform.

Two engines, both working one idempotent component at a time and recombining
``f = c1 e1 + c2 e2``:

* Bromwich: trapezoid quadrature of ``(1/2pi) int exp((x+iy)t) Fj(x+iy) dy``
  along a vertical line right of every singularity, symmetric truncation
  ``|y| <= Y`` (principal value), refined by doubling ``Y`` and halving ``h``.
* Residues: for rational components, ``cj = sum Res{exp(s t) Fj(s)}`` over the
  poles of ``Fj``.  Poles of any multiplicity are handled through Taylor
  coefficients at the pole; simple poles are the textbook case.
"""

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .bicomplex import Bicomplex, IdempotentPair, from_idempotent
from .errors import (
    AmplificationWarning,
    BicomplexLaplaceError,
    DomainError,
    InvalidArgumentError,
    InvalidImageError,
    InvalidPoleError,
    InversionConvergenceError,
    NonRealObjectWarning,
    NumericFailureError,
)
from .signals import ImageFunction, RationalFunction, decay_check

log = logging.getLogger(__name__)

MAX_DEGREE = 64
ABERTH_MAX_ITER = 500
CLUSTER_TOL = 1e-7
ROOT_TOL = 1e-8
# candidate clusters up to this spread are merged only if the derivative test confirms them
LOOSE_CLUSTER_TOL = 1e-3
MULTIPLICITY_TOL = 1e-10
# aliasing of the trapezoid sum is ~exp(-delta * 2pi/h); keep delta*2pi/h above this
ALIAS_EXPONENT = 36.0


@dataclass(frozen=True)
class BromwichConfig:
    abscissa_offset: float = 1.0
    half_height: float = 100.0
    step: float = 0.25
    refine_tol: float = 1e-6
    max_refinements: int = 6
    reality_tol: float = 1e-6
    max_exponent: float = 30.0
    min_offset: float = 0.05

    def __post_init__(self):
        for name in ("abscissa_offset", "half_height", "step", "refine_tol", "reality_tol",
                     "max_exponent", "min_offset"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InvalidArgumentError(f"{name} must be a positive finite number, got {v!r}")
        if int(self.max_refinements) != self.max_refinements or self.max_refinements < 0:
            raise InvalidArgumentError("max_refinements must be a nonnegative integer")


@dataclass(frozen=True)
class PoleSet:
    poles: tuple  # of (location: complex, multiplicity: int)

    def __iter__(self):
        return iter(self.poles)

    def __len__(self):
        return len(self.poles)

    @property
    def locations(self):
        return [p for p, _ in self.poles]

    @property
    def total_multiplicity(self):
        return sum(m for _, m in self.poles)


@dataclass
class InversionResult:
    """One inverted sample ``f(t)`` plus its diagnostics."""

    t: float
    value: float = math.nan
    bicomplex: Optional[Bicomplex] = None
    components: tuple = (math.nan, math.nan)
    reality_defect: float = math.nan
    refinements: int = 0
    method: str = ""
    warnings: list = field(default_factory=list)
    error: str = ""

    @property
    def ok(self):
        return not self.error

    def __float__(self):
        return float(self.value)


# ------------------------------------------------------------------ poles


def _taylor_at(coeffs, p, order):
    """First ``order`` Taylor coefficients ``c^(j)(p)/j!`` of an ascending polynomial."""
    work = np.array(coeffs, dtype=np.complex128)[::-1].copy()  # descending
    out = []
    n = len(work)
    for j in range(min(order, n)):
        # synthetic division by (x - p); the remainder is the next Taylor coefficient
        acc = work[0]
        for i in range(1, n - j):
            acc = acc * p + work[i]
            work[i] = acc
        out.append(acc)
    out.extend([0j] * (order - len(out)))
    return np.array(out, dtype=np.complex128)


def _scale_at(coeffs, z):
    return float(np.sum(np.abs(coeffs) * np.abs(z) ** np.arange(len(coeffs))))


def _aberth_start(monic):
    n = len(monic) - 1
    center = -monic[n - 1] / n
    ratios = [abs(monic[i]) ** (1.0 / (n - i)) for i in range(n) if monic[i] != 0]
    radius = 2.0 * max(ratios) if ratios else 1.0
    radius = max(radius, 1e-3) + abs(center)
    angles = 2.0 * math.pi * np.arange(n) / n + 0.4
    return center + radius * np.exp(1j * angles)


def _is_multiple(monic, c, m):
    taylor = _taylor_at(monic, c, m)
    absc = np.abs(monic)
    for j in range(m):
        # scale_j = sum_i |a_i| binom(i, j) |c|^(i-j)
        scale = sum(absc[i] * math.comb(i, j) * abs(c) ** (i - j) for i in range(j, len(monic)))
        if abs(taylor[j]) > MULTIPLICITY_TOL * max(scale, 1e-300):
            return False
    return True


def _single_link(roots, tol_fn):
    groups = []
    for r in sorted(roots, key=lambda z: (z.real, z.imag)):
        placed = None
        for g in groups:
            if any(abs(r - q) <= tol_fn(q) for q in g):
                placed = g
                break
        if placed is None:
            groups.append([r])
        else:
            placed.append(r)
    # single pass may leave chains split; merge overlapping groups
    merged = True
    while merged:
        merged = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if any(abs(a - b) <= tol_fn(b) for a in groups[i] for b in groups[j]):
                    groups[i].extend(groups.pop(j))
                    merged = True
                    break
            if merged:
                break
    return groups


def _polish(monic, c, m, max_iter=50):
    """Newton on the (m-1)-th derivative, where an m-fold root is simple."""
    P = np.polynomial.polynomial
    d = P.polyder(monic, m - 1) if m > 1 else monic
    dd = P.polyder(d)
    for _ in range(max_iter):
        denom = complex(kernels.horner(dd, c)[0])
        if denom == 0:
            break
        step = complex(kernels.horner(d, c)[0]) / denom
        if not np.isfinite(step):
            break
        c -= step
        if abs(step) <= 4e-16 * (1.0 + abs(c)):
            break
    return c


def _cluster(monic, roots):
    tight = lambda z: CLUSTER_TOL * (1.0 + abs(z))  # noqa: E731
    loose = lambda z: LOOSE_CLUSTER_TOL * (1.0 + abs(z))  # noqa: E731
    out = []
    for group in _single_link(list(roots), loose):
        m = len(group)
        mean = complex(np.mean(group))
        c = _polish(monic, mean, m)
        if m == 1:
            out.append((c if abs(c - mean) <= 10 * tight(mean) else mean, 1))
            continue
        if abs(c - mean) <= loose(mean) and _is_multiple(monic, c, m):
            out.append((c, m))
            continue
        for sub in _single_link(group, tight):
            mean = complex(np.mean(sub))
            c = _polish(monic, mean, len(sub))
            out.append((c if abs(c - mean) <= tight(mean) * 10 else mean, len(sub)))
    return out


def find_poles(r):
    """Denominator roots of ``r`` with multiplicities."""
    if not isinstance(r, RationalFunction):
        raise InvalidArgumentError("find_poles needs a RationalFunction")
    den = r.den
    if den[-1] == 0:
        raise InvalidArgumentError("leading denominator coefficient is zero")
    n = len(den) - 1
    if n < 1:
        raise InvalidArgumentError("denominator has no roots")
    if n > MAX_DEGREE:
        raise InvalidArgumentError(f"denominator degree {n} exceeds the cap of {MAX_DEGREE}")
    monic = den / den[-1]
    if n == 1:
        return PoleSet(((complex(-monic[0]), 1),))

    roots, iters, converged = kernels.aberth(monic, _aberth_start(monic), ABERTH_MAX_ITER)
    if not np.all(np.isfinite(roots)):
        raise NumericFailureError("root finder diverged")
    for z in roots:
        if abs(complex(kernels.horner(monic, z)[0])) > ROOT_TOL * _scale_at(monic, z):
            raise NumericFailureError(
                f"root finder did not converge after {iters} iterations (residual too large at {z})"
            )
    if not converged:
        log.debug("aberth hit the iteration cap; residual check passed")

    poles = _cluster(monic, roots)
    for c, m in poles:
        if abs(complex(kernels.horner(monic, c)[0])) > ROOT_TOL * _scale_at(monic, c):
            raise NumericFailureError(f"clustered pole {c} (multiplicity {m}) fails the residual check")
    poles.sort(key=lambda pm: (-pm[0].real, pm[0].imag))
    return PoleSet(tuple(poles))


def rightmost_pole(r):
    return max(p.real for p in find_poles(r).locations)


# --------------------------------------------------------------- residues


def _residue(r, p, m, t):
    if m == 1:
        dden = np.polynomial.polynomial.polyder(r.den)
        num = complex(kernels.horner(r.num, p)[0])
        return np.exp(p * t) * num / complex(kernels.horner(dden, p)[0])
    # den = (s - p)^m q(s): q's Taylor coefficients at p are den's, shifted by m
    n_tay = _taylor_at(r.num, p, m)
    q_tay = _taylor_at(r.den, p, 2 * m)[m:]
    h = np.zeros(m, dtype=np.complex128)
    for j in range(m):
        acc = n_tay[j] - sum(q_tay[i] * h[j - i] for i in range(1, j + 1))
        h[j] = acc / q_tay[0]
    total = sum(h[j] * t ** (m - 1 - j) / math.factorial(m - 1 - j) for j in range(m))
    return np.exp(p * t) * total


def residue_at(r, pole, m, t):
    """``Res{exp(s t) r(s); s = pole}`` for a pole of multiplicity ``m``."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    pole = complex(pole)
    for loc, mult in find_poles(r):
        if abs(loc - pole) <= 10 * CLUSTER_TOL * (1.0 + abs(loc)):
            if mult != m:
                raise InvalidPoleError(f"pole {pole} has multiplicity {mult}, not {m}")
            return complex(_residue(r, pole, m, t))
    raise InvalidPoleError(f"{pole} is not a pole of {r!r}")


def _residue_sum(r, t, poles=None):
    poles = find_poles(r) if poles is None else poles
    return complex(sum(_residue(r, p, m, t) for p, m in poles))


# --------------------------------------------------------------- bromwich


def _abscissa(base, t, cfg):
    delta = cfg.abscissa_offset
    notes = []
    if (base + delta) * t > cfg.max_exponent:
        shrunk = cfg.max_exponent / t - base
        if shrunk >= cfg.min_offset:
            delta = min(delta, shrunk)
        else:
            delta = min(delta, cfg.min_offset)
            notes.append(
                f"x*t = {(base + delta) * t:.3g} exceeds the cap {cfg.max_exponent:g}; "
                "exp(x t) amplification may cost accuracy"
            )
    return base + delta, delta, notes


def _line_values(F, x, y):
    if isinstance(F, RationalFunction):
        return F(x + 1j * y)
    vals = np.asarray(F(x + 1j * np.asarray(y)), dtype=np.complex128)
    if vals.shape != np.shape(y):
        vals = np.array([complex(F(complex(x, v))) for v in np.ravel(y)], dtype=np.complex128)
    return vals


def _end_corrections(F, x, t, Y, h):
    """Euler-Maclaurin endpoint term plus asymptotic tails beyond ``|y| = Y``.

    With ``H(y) = exp(x t) F(x + i y)``, integration by parts gives
    ``int_Y^inf exp(iyt) H dy = -exp(iYt) sum_n (-1)^n H^(n)(Y) / (it)^(n+1)``.
    """
    eta = 1e-3 * Y
    ys = np.array([-Y - eta, -Y, -Y + eta, Y - eta, Y, Y + eta])
    H = math.exp(x * t) * _line_values(F, x, ys)
    it = 1j * t
    out = 0j
    for sign, (hm, h0, hp) in ((-1, H[:3]), (1, H[3:])):
        d1 = (hp - hm) / (2 * eta)
        d2 = (hp - 2 * h0 + hm) / (eta * eta)
        phase = np.exp(sign * 1j * Y * t)
        series = h0 / it - d1 / it**2 + d2 / it**3
        out += -sign * phase * series
        # trapezoid overshoot: (h^2/12) G'(end), G = exp(iyt) H
        out -= sign * (h * h / 12.0) * phase * (it * h0 + d1)
    return out


def _line_integral(F, x, t, Y, h):
    n = max(1, math.ceil(Y / h))
    Y = n * h
    if isinstance(F, RationalFunction):
        core = kernels.bromwich_line(F.num, F.den, x, t, h, n, F.has_real_coeffs)
    else:
        j = np.arange(-n, n + 1)
        w = np.ones(j.shape[0])
        w[0] = w[-1] = 0.5
        y = j * h
        core = complex(np.sum(w * np.exp((x + 1j * y) * t) * _line_values(F, x, y)) * h / kernels.TWO_PI)
    return core + _end_corrections(F, x, t, Y, h) / kernels.TWO_PI


def _bromwich(F, k, t, cfg):
    """Returns ``(value, refinements, notes)``."""
    if not t > 0:
        raise DomainError(f"Bromwich inversion needs t > 0, got {t}")
    base = float(k)
    if isinstance(F, RationalFunction):
        base = max(base, rightmost_pole(F))
    x, delta, notes = _abscissa(base, t, cfg)
    # alias damping exp(-2 pi delta / h) and at most one radian of exp(iyt) per step
    h = min(cfg.step, 2.0 * math.pi * delta / ALIAS_EXPONENT, 1.0 / t)
    Y = max(cfg.half_height, 10.0 / t)

    prev = _line_integral(F, x, t, Y, h)
    for i in range(1, int(cfg.max_refinements) + 1):
        Y *= 2.0
        h *= 0.5
        cur = _line_integral(F, x, t, Y, h)
        # relative once |f| > 1, so large e^{xt} values can still settle
        if abs(cur - prev) < cfg.refine_tol * max(1.0, abs(cur)):
            return cur, i, notes
        prev, last = cur, prev
    if cfg.max_refinements == 0:
        return prev, 0, notes
    raise InversionConvergenceError(
        f"Bromwich integral at t={t} did not settle below {cfg.refine_tol:g} "
        f"after {cfg.max_refinements} refinements",
        iterates=(last, prev),
    )


def _require_decay(Fj):
    report = decay_check(Fj)
    if not report.passes:
        raise InvalidImageError(
            f"image fails the arc-decay probe (est. p = {report.est_p:.3g}, "
            f"max |F| on largest arc = {report.max_on_largest:.3g})"
        )


def bromwich_component(Fj, k, t, cfg=None, assume_decay=False):
    """``(1/2pi i) int exp(s t) Fj(s) ds`` along ``Re s = x > k`` for one component.

    ``Fj`` is a complex callable or a :class:`RationalFunction`.  Callables are
    put through the arc-decay probe unless ``assume_decay`` is set.
    """
    cfg = cfg or BromwichConfig()
    if not isinstance(Fj, RationalFunction) and not assume_decay:
        _require_decay(Fj)
    value, _, notes = _bromwich(Fj, k, t, cfg)
    for n in notes:
        warnings.warn(n, AmplificationWarning, stacklevel=2)
    return complex(value)


def _same_component(F):
    if F.f1 is F.f2:
        return True
    return F.is_rational and F.f1.same_as(F.f2)


def _recombine(t, c1, c2, cfg, method, refinements=0, notes=()):
    b = from_idempotent(IdempotentPair(c1, c2))
    defect = max(abs(b.a1), abs(b.a2), abs(b.a3))
    res = InversionResult(t, b.a0, b, (complex(c1), complex(c2)), defect, refinements, method,
                          list(notes))
    for n in notes:
        warnings.warn(n, AmplificationWarning, stacklevel=3)
    if defect > cfg.reality_tol:
        msg = (f"recombined value at t={t} is not real: i1/i2/i1i2 content {defect:.3g} "
               f"> {cfg.reality_tol:g}")
        res.warnings.append(msg)
        warnings.warn(msg, NonRealObjectWarning, stacklevel=3)
    return res


def bromwich_invert(F, t, cfg=None):
    """Numerical inversion of ``F`` at ``t``, recombining both components."""
    cfg = cfg or BromwichConfig()
    if not isinstance(F, ImageFunction):
        raise InvalidArgumentError("bromwich_invert needs an ImageFunction")
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    if not F.is_rational and not F.decay_report.passes:
        rep = F.decay_report
        raise InvalidImageError(
            f"image fails the arc-decay probe (est. p = {rep.est_p:.3g}, "
            f"max |F| on largest arc = {rep.max_on_largest:.3g})"
        )
    c1, r1, notes = _bromwich(F.f1, F.abscissa_k, t, cfg)
    if _same_component(F):
        c2, r2 = c1, r1
    else:
        c2, r2, notes2 = _bromwich(F.f2, F.abscissa_k, t, cfg)
        notes = notes + [n for n in notes2 if n not in notes]
    return _recombine(t, c1, c2, cfg, "bromwich", max(r1, r2), notes)


def residue_invert(F, t, cfg=None, _poles=None):
    """Exact inversion of a rational image: ``cj = sum of residues of exp(s t) rj(s)``."""
    cfg = cfg or BromwichConfig()
    if not isinstance(F, ImageFunction) or not F.is_rational:
        raise InvalidArgumentError("residue inversion needs a rational ImageFunction")
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    p1, p2 = _poles if _poles is not None else (find_poles(F.f1), None)
    c1 = _residue_sum(F.f1, t, p1)
    if _same_component(F):
        c2 = c1
    else:
        c2 = _residue_sum(F.f2, t, p2)
    return _recombine(t, c1, c2, cfg, "residue")


def _check_grid(t_grid):
    ts = np.asarray(list(t_grid), dtype=float)
    if ts.ndim != 1 or ts.size == 0:
        raise DomainError("time grid is empty")
    if not np.all(np.isfinite(ts)) or np.any(ts <= 0):
        raise DomainError("every grid time must be finite and > 0")
    if np.any(np.diff(ts) <= 0):
        raise DomainError("time grid must be strictly increasing")
    return ts


def invert_grid(F, t_grid, cfg=None, method="auto", workers=1):
    """Invert ``F`` at each grid time; numeric failures are reported per point.

    ``method`` is ``"bromwich"``, ``"residue"`` or ``"auto"`` (residue for
    rational images).  Results come back in grid order whatever ``workers`` is.
    """
    cfg = cfg or BromwichConfig()
    ts = _check_grid(t_grid)
    if method == "auto":
        method = "residue" if F.is_rational else "bromwich"
    if method not in ("bromwich", "residue"):
        raise InvalidArgumentError(f"unknown inversion method {method!r}")

    if method == "residue":
        if not F.is_rational:
            raise InvalidArgumentError("residue method needs a rational image")
        poles = (find_poles(F.f1), None if _same_component(F) else find_poles(F.f2))

        def one(t):
            return residue_invert(F, t, cfg, _poles=poles)
    else:
        if not F.is_rational:
            F.decay_report  # probe once, before any worker starts

        def one(t):
            return bromwich_invert(F, t, cfg)

    def guarded(t):
        t = float(t)
        try:
            return one(t)
        except BicomplexLaplaceError as exc:
            return InversionResult(t, method=method, error=f"{type(exc).__name__}: {exc}")

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(guarded, ts))
    return [guarded(t) for t in ts]
