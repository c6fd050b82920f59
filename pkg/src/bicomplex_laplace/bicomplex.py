"""Bicomplex numbers ``a0 + i1*a1 + i2*a2 + i1*i2*a3``.

The two imaginary units commute, ``i1**2 == i2**2 == -1`` and
``(i1*i2)**2 == +1``.  Python's ``complex`` stands in for the i1-complex
plane C1, so ``z1 = a0 + 1j*a1`` and ``z2 = a2 + 1j*a3`` give the
``xi = z1 + i2*z2`` view.

Along the idempotents ``e1 = (1 + i1*i2)/2`` and ``e2 = (1 - i1*i2)/2`` every
number splits as ``xi = xi1*e1 + xi2*e2`` with ``xi1 = z1 - i1*z2`` and
``xi2 = z1 + i1*z2``; ring operations act componentwise on that pair.
"""

import json
import math
from dataclasses import dataclass
from numbers import Complex, Real

from .errors import InvalidArgumentError, SingularElementError

SINGULAR_EPS = 1e-12


def _finite(*values):
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True)
class IdempotentPair:
    """Projections ``(P1(xi), P2(xi))`` onto the auxiliary spaces A1, A2."""

    xi1: complex
    xi2: complex

    def __post_init__(self):
        object.__setattr__(self, "xi1", complex(self.xi1))
        object.__setattr__(self, "xi2", complex(self.xi2))

    def __iter__(self):
        yield self.xi1
        yield self.xi2

    def to_json(self):
        return json.dumps(
            {"xi1": [self.xi1.real, self.xi1.imag], "xi2": [self.xi2.real, self.xi2.imag]}
        )

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text) if isinstance(text, str) else text
            return cls(complex(*data["xi1"]), complex(*data["xi2"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"bad idempotent pair JSON: {text!r}") from exc


@dataclass(frozen=True, eq=False)
class Bicomplex:
    """Immutable bicomplex number stored by its four real coefficients.

    ``==`` is identity only; compare values with :func:`approx_eq`.
    """

    a0: float = 0.0
    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0

    def __post_init__(self):
        vals = []
        for name in ("a0", "a1", "a2", "a3"):
            v = getattr(self, name)
            if not isinstance(v, Real):
                raise InvalidArgumentError(f"{name} must be real, got {v!r}")
            vals.append(float(v))
        if not _finite(*vals):
            raise InvalidArgumentError(f"non-finite bicomplex coefficients {tuple(vals)}")
        for name, v in zip(("a0", "a1", "a2", "a3"), vals):
            object.__setattr__(self, name, v)

    # -- views ---------------------------------------------------------------

    @property
    def z1(self):
        return complex(self.a0, self.a1)

    @property
    def z2(self):
        return complex(self.a2, self.a3)

    @property
    def coeffs(self):
        return (self.a0, self.a1, self.a2, self.a3)

    @property
    def xi1(self):
        return self.z1 - 1j * self.z2

    @property
    def xi2(self):
        return self.z1 + 1j * self.z2

    def __iter__(self):
        return iter(self.coeffs)

    @classmethod
    def from_complex_pair(cls, z1, z2=0j):
        z1, z2 = complex(z1), complex(z2)
        return cls(z1.real, z1.imag, z2.real, z2.imag)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Bicomplex):
            return value
        if isinstance(value, Real):
            return cls(float(value))
        if isinstance(value, Complex):
            return cls.from_complex_pair(complex(value))
        raise TypeError(f"cannot interpret {value!r} as a bicomplex number")

    # -- ring ----------------------------------------------------------------

    def __add__(self, other):
        try:
            o = Bicomplex.coerce(other)
        except TypeError:
            return NotImplemented
        return Bicomplex(self.a0 + o.a0, self.a1 + o.a1, self.a2 + o.a2, self.a3 + o.a3)

    __radd__ = __add__

    def __neg__(self):
        return Bicomplex(-self.a0, -self.a1, -self.a2, -self.a3)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = Bicomplex.coerce(other)
        except TypeError:
            return NotImplemented
        return Bicomplex(self.a0 - o.a0, self.a1 - o.a1, self.a2 - o.a2, self.a3 - o.a3)

    def __rsub__(self, other):
        return Bicomplex.coerce(other) - self

    def __mul__(self, other):
        try:
            o = Bicomplex.coerce(other)
        except TypeError:
            return NotImplemented
        # (z1 + i2 z2)(w1 + i2 w2) = z1 w1 - z2 w2 + i2 (z1 w2 + z2 w1)
        z1, z2, w1, w2 = self.z1, self.z2, o.z1, o.z2
        return Bicomplex.from_complex_pair(z1 * w1 - z2 * w2, z1 * w2 + z2 * w1)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = Bicomplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self * inverse(o)

    def __rtruediv__(self, other):
        return Bicomplex.coerce(other) * inverse(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return inverse(self) ** (-n)
        pair = to_idempotent(self)
        return from_idempotent(IdempotentPair(pair.xi1**n, pair.xi2**n))

    def __abs__(self):
        return norm(self)

    def __repr__(self):
        return f"Bicomplex({self.a0!r}, {self.a1!r}, {self.a2!r}, {self.a3!r})"

    def __str__(self):
        return to_text(self)


def from_components(a0, a1=0.0, a2=0.0, a3=0.0):
    """Build ``a0 + i1*a1 + i2*a2 + i1*i2*a3``; rejects non-finite input."""
    return Bicomplex(a0, a1, a2, a3)


ZERO = Bicomplex(0.0)
ONE = Bicomplex(1.0)
I1 = Bicomplex(0.0, 1.0)
I2 = Bicomplex(0.0, 0.0, 1.0)
J = Bicomplex(0.0, 0.0, 0.0, 1.0)  # i1*i2, the hyperbolic unit
E1 = Bicomplex(0.5, 0.0, 0.0, 0.5)
E2 = Bicomplex(0.5, 0.0, 0.0, -0.5)


def add(x, y):
    return Bicomplex.coerce(x) + y


def sub(x, y):
    return Bicomplex.coerce(x) - y


def neg(x):
    return -Bicomplex.coerce(x)


def mul(x, y):
    return Bicomplex.coerce(x) * y


def to_idempotent(x):
    x = Bicomplex.coerce(x)
    return IdempotentPair(x.xi1, x.xi2)


def from_idempotent(pair):
    """Recompose ``xi1*e1 + xi2*e2``: ``z1 = (xi1+xi2)/2``, ``z2 = i1*(xi1-xi2)/2``."""
    if not isinstance(pair, IdempotentPair):
        pair = IdempotentPair(*pair)
    xi1, xi2 = pair.xi1, pair.xi2
    if not _finite(xi1.real, xi1.imag, xi2.real, xi2.imag):
        raise InvalidArgumentError(f"non-finite idempotent components {pair!r}")
    return Bicomplex.from_complex_pair(0.5 * (xi1 + xi2), 0.5j * (xi1 - xi2))


def norm(x):
    x = Bicomplex.coerce(x)
    return math.sqrt(x.a0 * x.a0 + x.a1 * x.a1 + x.a2 * x.a2 + x.a3 * x.a3)


def singularity_defect(x):
    """``|z1**2 + z2**2|``, which equals ``|xi1 * xi2|``."""
    x = Bicomplex.coerce(x)
    return abs(x.z1 * x.z1 + x.z2 * x.z2)


def is_singular(x, eps=SINGULAR_EPS):
    """True when ``x`` belongs to O2, i.e. ``|z1**2 + z2**2| <= eps * (1 + ||x||**2)``."""
    x = Bicomplex.coerce(x)
    return singularity_defect(x) <= eps * (1.0 + norm(x) ** 2)


def inverse(x):
    x = Bicomplex.coerce(x)
    if is_singular(x):
        raise SingularElementError(
            f"{x!r} lies in the singular set O2 (a complex multiple of e1 or e2) "
            "and has no inverse"
        )
    pair = to_idempotent(x)
    return from_idempotent(IdempotentPair(1.0 / pair.xi1, 1.0 / pair.xi2))


def approx_eq(x, y, tol=1e-12):
    """Max-coefficient comparison, relative to ``1 + max(||x||, ||y||)``."""
    x, y = Bicomplex.coerce(x), Bicomplex.coerce(y)
    err = max(abs(a - b) for a, b in zip(x.coeffs, y.coeffs))
    return err <= tol * (1.0 + max(norm(x), norm(y)))


def to_text(x):
    """Serialize as ``"a0,a1,a2,a3"`` using round-trippable reprs."""
    x = Bicomplex.coerce(x)
    return ",".join(repr(v) for v in x.coeffs)


def parse(text):
    """Inverse of :func:`to_text`; whitespace around fields is ignored."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 4:
        raise InvalidArgumentError(f"expected four comma-separated reals, got {text!r}")
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise InvalidArgumentError(f"cannot parse bicomplex {text!r}") from exc
    return Bicomplex(*values)
