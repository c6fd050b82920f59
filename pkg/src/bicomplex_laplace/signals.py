"""Object functions, image functions and the table of transform pairs."""

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from . import kernels
from .bicomplex import Bicomplex, IdempotentPair, from_idempotent, to_idempotent
from .errors import InvalidArgumentError, InvalidImageError, PoleProximityError

DEN_EPS = 1e-10
P_MIN = 0.5
DECAY_TOL = 1e-3
DEFAULT_PROBE_RADII = tuple(np.logspace(2, 5, 7))
PROBE_GRID = np.linspace(0.0, 20.0, 401)


def _as_complex_coeffs(coeffs, name):
    try:
        arr = np.array([complex(*c) if isinstance(c, (list, tuple)) else complex(c)
                        for c in coeffs], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"bad {name} coefficients {coeffs!r}") from exc
    if arr.size == 0:
        raise InvalidArgumentError(f"{name} coefficients are empty")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"non-finite {name} coefficients")
    return arr


def _trim(arr):
    nz = np.flatnonzero(arr)
    if nz.size == 0:
        return arr[:1] * 0
    return arr[: nz[-1] + 1]


class RationalFunction:
    """Strictly proper ``num(s)/den(s)`` with complex coefficients, ascending degree."""

    def __init__(self, num, den):
        num = _trim(_as_complex_coeffs(num, "numerator"))
        den = _as_complex_coeffs(den, "denominator")
        if den[-1] == 0:
            raise InvalidArgumentError("leading denominator coefficient is zero")
        if len(den) < 2:
            raise InvalidArgumentError("denominator must have degree >= 1")
        if len(num) >= len(den):
            raise InvalidArgumentError(
                f"rational function is not strictly proper "
                f"(deg num {len(num) - 1} >= deg den {len(den) - 1})"
            )
        self.num = num
        self.den = den
        self.num.setflags(write=False)
        self.den.setflags(write=False)

    @property
    def degree(self):
        return len(self.den) - 1

    @property
    def has_real_coeffs(self):
        return not (np.any(self.num.imag) or np.any(self.den.imag))

    def __repr__(self):
        return f"RationalFunction(num={self.num.tolist()}, den={self.den.tolist()})"

    def same_as(self, other):
        return (
            isinstance(other, RationalFunction)
            and np.array_equal(self.num, other.num)
            and np.array_equal(self.den, other.den)
        )

    def __call__(self, s):
        """Vectorized evaluation; no pole-proximity check (see :func:`rational_eval`)."""
        s_arr = np.asarray(s, dtype=np.complex128)
        flat = s_arr.ravel()
        out = kernels.horner(self.num, flat) / kernels.horner(self.den, flat)
        if s_arr.ndim == 0:
            return complex(out[0])
        return out.reshape(s_arr.shape)

    def derivative(self):
        """Coefficients ``(num' den - num den', den**2)`` of F', not reduced."""
        P = np.polynomial.polynomial
        dnum = P.polyder(self.num) if len(self.num) > 1 else np.zeros(1, complex)
        top = P.polysub(P.polymul(dnum, self.den), P.polymul(self.num, P.polyder(self.den)))
        return top, P.polymul(self.den, self.den)

    def eval_derivative(self, s):
        top, bottom = self.derivative()
        s = np.asarray(s, dtype=np.complex128).ravel()
        return kernels.horner(top, s) / kernels.horner(bottom, s)

    # Linear combinations over a common denominator.
    def __add__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        P = np.polynomial.polynomial
        if np.array_equal(self.den, other.den):
            return RationalFunction(P.polyadd(self.num, other.num), self.den)
        num = P.polyadd(P.polymul(self.num, other.den), P.polymul(other.num, self.den))
        return RationalFunction(num, P.polymul(self.den, other.den))

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float, complex, np.number)):
            return NotImplemented
        return RationalFunction(self.num * scalar, self.den)

    __rmul__ = __mul__

    def to_dict(self):
        return {
            "num": [[c.real, c.imag] for c in self.num],
            "den": [[c.real, c.imag] for c in self.den],
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text) if isinstance(text, str) else text
            return cls(data["num"], data["den"])
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise InvalidArgumentError(f"bad rational-function JSON: {exc}") from exc


def rational_eval(r, s):
    """``num(s)/den(s)`` at a single point, refusing points too close to a pole."""
    s = complex(s)
    den = complex(kernels.horner(r.den, s)[0])
    if abs(den) <= DEN_EPS * (1.0 + abs(s) ** r.degree):
        raise PoleProximityError(f"{s} is within pole-proximity tolerance of a pole")
    return complex(kernels.horner(r.num, s)[0]) / den


def _vectorized(fn):
    """Wrap a scalar complex callable so it accepts numpy arrays."""

    def call(s):
        s_arr = np.asarray(s, dtype=np.complex128)
        try:
            out = np.asarray(fn(s_arr), dtype=np.complex128)
            if out.shape == s_arr.shape:
                return out
        except (TypeError, ValueError, ZeroDivisionError):
            pass
        return np.array([complex(fn(complex(v))) for v in s_arr.ravel()],
                        dtype=np.complex128).reshape(s_arr.shape)

    return call


@dataclass(frozen=True)
class ImageFunction:
    """Image F held as its two idempotent components ``F1`` (on A1) and ``F2`` (on A2).

    ``kind`` is ``"components"`` for plain callables or ``"rational"`` when both
    components are :class:`RationalFunction` objects.
    """

    kind: str
    f1: Callable
    f2: Callable
    abscissa_k: float
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("components", "rational"):
            raise InvalidArgumentError(f"unknown image kind {self.kind!r}")
        if self.kind == "rational" and not (
            isinstance(self.f1, RationalFunction) and isinstance(self.f2, RationalFunction)
        ):
            raise InvalidArgumentError("rational images need RationalFunction components")
        if not math.isfinite(self.abscissa_k):
            raise InvalidArgumentError("abscissa_k must be finite")

    @classmethod
    def from_components(cls, f1, f2=None, abscissa_k=0.0, label=""):
        return cls("components", f1, f1 if f2 is None else f2, float(abscissa_k), label)

    @classmethod
    def from_rational(cls, r1, r2=None, abscissa_k=None, label=""):
        r2 = r1 if r2 is None else r2
        if abscissa_k is None:
            from .inversion import rightmost_pole

            abscissa_k = max(rightmost_pole(r1), rightmost_pole(r2))
        return cls("rational", r1, r2, float(abscissa_k), label)

    @property
    def is_rational(self):
        return self.kind == "rational"

    def component(self, j):
        if j not in (1, 2):
            raise InvalidArgumentError("component index must be 1 or 2")
        return self.f1 if j == 1 else self.f2

    def eval_component(self, j, s):
        fn = self.component(j)
        if isinstance(fn, RationalFunction):
            return fn(s)
        return _vectorized(fn)(s)

    def __call__(self, xi):
        """Evaluate ``F(xi) = F1(xi1) e1 + F2(xi2) e2``."""
        pair = to_idempotent(xi)
        v1 = complex(np.asarray(self.eval_component(1, pair.xi1)))
        v2 = complex(np.asarray(self.eval_component(2, pair.xi2)))
        return from_idempotent(IdempotentPair(v1, v2))

    @cached_property
    def decay_report(self):
        return decay_check(self)


@dataclass(frozen=True)
class SignalSpec:
    """Real object function on ``t >= 0`` with declared exponential order ``order_k``.

    ``eval`` should accept numpy arrays; scalar-only callables are wrapped.
    ``knots`` lists points where ``eval`` is not smooth (panel edges for the
    forward quadrature).
    """

    eval: Callable
    order_k: float
    label: str = ""
    knots: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not math.isfinite(self.order_k):
            raise InvalidArgumentError("order_k must be finite")
        vals = self.values(PROBE_GRID)
        if not np.all(np.isfinite(vals)):
            raise InvalidArgumentError(f"signal {self.label!r} is not finite on the probe grid")
        if np.any(np.abs(np.imag(vals)) > 0):
            raise InvalidArgumentError(f"signal {self.label!r} is not real-valued")

    def values(self, t):
        t = np.asarray(t, dtype=float)
        try:
            out = np.asarray(self.eval(t))
            if out.shape != t.shape:
                out = np.broadcast_to(out, t.shape)
        except (TypeError, ValueError):
            out = np.array([self.eval(float(v)) for v in t.ravel()]).reshape(t.shape)
        if np.iscomplexobj(out):
            if np.any(out.imag):
                return out
            out = out.real
        return out.astype(float)

    @cached_property
    def bound_m(self):
        """Probe estimate of ``M`` in ``|f(t)| <= M exp(k t)``."""
        return float(np.max(np.abs(self.values(PROBE_GRID)) * np.exp(-self.order_k * PROBE_GRID)))

    def satisfies_order(self, m, t_max=20.0, n=2001):
        t = np.linspace(0.0, t_max, n)
        return bool(np.all(np.abs(self.values(t)) <= m * np.exp(self.order_k * t) * (1 + 1e-12)))

    @classmethod
    def from_samples(cls, t, f, order_k, label="samples"):
        """Piecewise-linear signal through ``(t, f)``; constant beyond the last sample."""
        t = np.asarray(t, dtype=float)
        f = np.asarray(f, dtype=float)
        if t.ndim != 1 or t.shape != f.shape or t.size < 2:
            raise InvalidArgumentError("need at least two (t, f) samples of equal length")
        if t[0] < 0 or np.any(np.diff(t) <= 0):
            raise InvalidArgumentError("sample times must be nonnegative and increasing")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(f))):
            raise InvalidArgumentError("non-finite samples")
        tt, ff = t.copy(), f.copy()
        return cls(lambda x: np.interp(x, tt, ff), float(order_k), label, tuple(tt.tolist()))

    def __add__(self, other):
        if not isinstance(other, SignalSpec):
            return NotImplemented
        a, b = self, other
        return SignalSpec(
            lambda t: a.values(t) + b.values(t),
            max(a.order_k, b.order_k),
            f"({a.label})+({b.label})",
            tuple(sorted(set(a.knots) | set(b.knots))),
        )

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float, np.floating, np.integer)):
            return NotImplemented
        a, c = self, float(scalar)
        return SignalSpec(lambda t: c * a.values(t), a.order_k, f"{c!r}*({a.label})", a.knots)

    __rmul__ = __mul__


# ----------------------------------------------------------------- catalog

CATALOG_IDS = ("unit_step", "sin", "cos", "damped_cos", "damped_sin")
_USES = {
    "unit_step": (),
    "sin": ("omega",),
    "cos": ("omega",),
    "damped_cos": ("omega", "a"),
    "damped_sin": ("omega", "a"),
}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    params: dict
    image: RationalFunction
    object: SignalSpec
    order_k: float
    image_formula: str
    object_formula: str
    asymptotic_order: int

    def image_function(self):
        return ImageFunction.from_rational(self.image, self.image, self.order_k, label=self.id)

    def closed_form(self, t):
        return self.object.values(t)


def catalog_lookup(id, params=None, **kwargs):
    """Instantiate a transform pair by id.

    >>> e = catalog_lookup("sin", omega=1.0)
    >>> e.image.den.real.tolist()
    [1.0, 0.0, 1.0]
    """
    params = dict(params or {}, **kwargs)
    if id not in _USES:
        raise InvalidArgumentError(f"unknown pair id {id!r}; choose from {', '.join(CATALOG_IDS)}")
    unknown = set(params) - {"omega", "a"}
    if unknown:
        raise InvalidArgumentError(f"unknown pair parameters {sorted(unknown)}")
    w = float(params.get("omega", 1.0))
    a = float(params.get("a", 0.0))
    if not (math.isfinite(w) and math.isfinite(a)):
        raise InvalidArgumentError("pair parameters must be finite")
    if "omega" in _USES[id] and w <= 0:
        raise InvalidArgumentError(f"omega must be positive, got {w}")
    used = {k: (w if k == "omega" else a) for k in _USES[id]}

    if id == "unit_step":
        image = RationalFunction([1.0], [0.0, 1.0])
        obj, k, p = (lambda t: np.ones_like(np.asarray(t, dtype=float))), 0.0, 1
        img_s, obj_s = "1/xi", "1"
    elif id == "sin":
        image = RationalFunction([w], [w * w, 0.0, 1.0])
        obj, k, p = (lambda t: np.sin(w * np.asarray(t, dtype=float))), 0.0, 2
        img_s, obj_s = f"{w:g}/(xi^2+{w * w:g})", f"sin({w:g} t)"
    elif id == "cos":
        image = RationalFunction([0.0, 1.0], [w * w, 0.0, 1.0])
        obj, k, p = (lambda t: np.cos(w * np.asarray(t, dtype=float))), 0.0, 1
        img_s, obj_s = f"xi/(xi^2+{w * w:g})", f"cos({w:g} t)"
    elif id == "damped_cos":
        image = RationalFunction([a, 1.0], [a * a + w * w, 2.0 * a, 1.0])
        obj = lambda t: np.exp(-a * np.asarray(t, dtype=float)) * np.cos(w * np.asarray(t, dtype=float))  # noqa: E731
        k, p = -a, 1
        img_s, obj_s = f"(xi+{a:g})/((xi+{a:g})^2+{w * w:g})", f"exp(-{a:g} t) cos({w:g} t)"
    else:
        image = RationalFunction([w], [a * a + w * w, 2.0 * a, 1.0])
        obj = lambda t: np.exp(-a * np.asarray(t, dtype=float)) * np.sin(w * np.asarray(t, dtype=float))  # noqa: E731
        k, p = -a, 2
        img_s, obj_s = f"{w:g}/((xi+{a:g})^2+{w * w:g})", f"exp(-{a:g} t) sin({w:g} t)"

    signal = SignalSpec(obj, k, obj_s)
    return CatalogEntry(id, used, image, signal, k, img_s, obj_s, p)


# ------------------------------------------------------------------ decay probe


@dataclass(frozen=True)
class DecayReport:
    passes: bool
    est_p: float
    est_M: float
    max_on_largest: float


def _arc_maxima(fn, center, radii, n_theta=65):
    theta = np.linspace(0.5 * math.pi, 1.5 * math.pi, n_theta)
    maxima = []
    for r in radii:
        s = center + r * np.exp(1j * theta)
        try:
            vals = np.asarray(fn(s), dtype=np.complex128)
        except (ZeroDivisionError, FloatingPointError, PoleProximityError) as exc:
            raise InvalidImageError(f"image could not be evaluated on the arc R={r:g}") from exc
        mags = np.abs(vals)
        if mags.shape != s.shape or not np.all(np.isfinite(mags)):
            raise InvalidImageError(f"non-finite image samples on the arc R={r:g}")
        maxima.append(mags.max())
    return np.array(maxima)


def probe_decay(fn, center=1.0, radii=DEFAULT_PROBE_RADII, p_min=P_MIN, decay_tol=DECAY_TOL):
    """Fit ``log max|F|`` against ``log R`` on left semicircles of the given radii."""
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size < 3:
        raise InvalidArgumentError("decay probe needs at least three radii")
    if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise InvalidArgumentError("probe radii must be positive and increasing")
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        maxima = _arc_maxima(_vectorized(fn), center, radii)
        if np.any(maxima == 0):
            # identically zero on the probe: decays as fast as anything can
            return DecayReport(True, math.inf, 0.0, 0.0)
        slope, intercept = np.polyfit(np.log(radii), np.log(maxima), 1)
    est_p = -float(slope)
    est_m = float(np.max(maxima * radii**est_p))
    passes = est_p >= p_min and maxima[-1] <= decay_tol
    return DecayReport(bool(passes), est_p, est_m, float(maxima[-1]))


def decay_check(F, probe=DEFAULT_PROBE_RADII):
    """Arc-decay test ``|F| < M/|xi|**p`` on both components of ``F``.

    ``F`` may be an :class:`ImageFunction` (worst component is reported) or a
    single complex callable.  Arcs are centred one unit right of the abscissa.
    """
    if isinstance(F, ImageFunction):
        center = F.abscissa_k + 1.0
        fns = [F.f1] if F.f1 is F.f2 else [F.f1, F.f2]
        reports = [probe_decay(fn, center, probe) for fn in fns]
        return DecayReport(
            all(r.passes for r in reports),
            min(r.est_p for r in reports),
            max(r.est_M for r in reports),
            max(r.max_on_largest for r in reports),
        )
    return probe_decay(F, 1.0, probe)
