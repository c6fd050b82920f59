import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bicomplex_laplace import (
    E1,
    E2,
    I1,
    I2,
    J,
    ONE,
    ZERO,
    Bicomplex,
    IdempotentPair,
    add,
    approx_eq,
    from_components,
    from_idempotent,
    inverse,
    is_singular,
    mul,
    neg,
    norm,
    sub,
    to_idempotent,
)
from bicomplex_laplace.bicomplex import parse, singularity_defect, to_text
from bicomplex_laplace.errors import InvalidArgumentError, SingularElementError

from .conftest import random_bicomplex

# basis order 1, i1, i2, i1i2; TABLE[p][q] = (sign, index) of e_p * e_q
TABLE = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
    [(1, 2), (1, 3), (-1, 0), (-1, 1)],
    [(1, 3), (-1, 2), (-1, 1), (1, 0)],
]


def brute_mul(x, y):
    out = [0.0] * 4
    for p, xp in enumerate(x.coeffs):
        for q, yq in enumerate(y.coeffs):
            sign, idx = TABLE[p][q]
            out[idx] += sign * xp * yq
    return out


def exact(x, coeffs):
    return list(x.coeffs) == [float(c) for c in coeffs]


def close(x, y, tol=1e-12):
    return approx_eq(x, y, tol)


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
bicomplexes = st.builds(Bicomplex, finite, finite, finite, finite)


class TestConstruction:
    def test_identity(self):
        assert exact(from_components(1, 0, 0, 0), (1, 0, 0, 0))
        assert close(mul(from_components(1, 0, 0, 0), Bicomplex(3, -2, 5, 7)), Bicomplex(3, -2, 5, 7))

    def test_e1(self):
        e1 = from_components(0.5, 0, 0, 0.5)
        assert exact(e1, (0.5, 0, 0, 0.5))
        assert exact(mul(e1, e1), e1.coeffs)

    def test_zero(self):
        z = from_components(0, 0, 0, 0)
        assert exact(add(z, Bicomplex(1, 2, 3, 4)), (1, 2, 3, 4))

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite_rejected(self, bad):
        with pytest.raises(InvalidArgumentError):
            from_components(0, bad, 0, 0)

    def test_views_lossless(self, rng):
        for _ in range(50):
            x = random_bicomplex(rng)
            y = Bicomplex.from_complex_pair(x.z1, x.z2)
            assert exact(y, x.coeffs)


class TestRing:
    def test_unit_relations(self):
        assert exact(mul(I1, I1), (-1, 0, 0, 0))
        assert exact(mul(I2, I2), (-1, 0, 0, 0))
        assert exact(mul(I1, I2), J.coeffs)
        assert exact(mul(I2, I1), J.coeffs)
        assert exact(mul(J, J), (1, 0, 0, 0))

    def test_idempotents(self):
        assert exact(mul(E1, E1), E1.coeffs)
        assert exact(mul(E2, E2), E2.coeffs)
        assert exact(mul(E1, E2), (0, 0, 0, 0))
        assert exact(mul(E2, E1), (0, 0, 0, 0))
        assert exact(add(E1, E2), (1, 0, 0, 0))

    def test_mul_matches_sixteen_term_expansion(self, rng):
        for _ in range(200):
            x, y = random_bicomplex(rng), random_bicomplex(rng)
            np.testing.assert_allclose(mul(x, y).coeffs, brute_mul(x, y), rtol=1e-14, atol=1e-12)

    def test_sub_neg(self):
        x, y = Bicomplex(1, 2, 3, 4), Bicomplex(0.5, -1, 2, 8)
        assert exact(sub(x, y), (0.5, 3, 1, -4))
        assert exact(neg(x), (-1, -2, -3, -4))
        assert exact(x - x, (0, 0, 0, 0))

    def test_scalar_mixing(self):
        x = Bicomplex(1, 2, 3, 4)
        assert exact(2 * x, (2, 4, 6, 8))
        assert exact(x + 1, (2, 2, 3, 4))
        # a Python complex is the i1-plane
        assert exact(x * 1j, mul(x, I1).coeffs)

    def test_equality_is_identity(self):
        assert not (Bicomplex(1, 0, 0, 0) == Bicomplex(1, 0, 0, 0))

    @settings(max_examples=200, deadline=None)
    @given(bicomplexes, bicomplexes, bicomplexes)
    def test_ring_axioms(self, x, y, z):
        assert close(x * y, y * x, 1e-12)
        assert close((x * y) * z, x * (y * z), 1e-10)
        assert close(x * (y + z), x * y + x * z, 1e-10)
        assert close(x + (y + z), (x + y) + z, 1e-12)

    @settings(max_examples=200, deadline=None)
    @given(bicomplexes, bicomplexes)
    def test_idempotent_homomorphism(self, x, y):
        px, py, pxy = to_idempotent(x), to_idempotent(y), to_idempotent(x * y)
        scale = 1 + norm(x) * norm(y)
        assert abs(pxy.xi1 - px.xi1 * py.xi1) <= 1e-10 * scale
        assert abs(pxy.xi2 - px.xi2 * py.xi2) <= 1e-10 * scale


class TestIdempotent:
    def test_e1_pair(self):
        p = to_idempotent(E1)
        assert (p.xi1, p.xi2) == (1, 0)

    def test_one_pair(self):
        p = to_idempotent(ONE)
        assert (p.xi1, p.xi2) == (1, 1)

    def test_formula(self):
        x = Bicomplex(1, 2, 3, 4)
        p = to_idempotent(x)
        assert p.xi1 == x.z1 - 1j * x.z2
        assert p.xi2 == x.z1 + 1j * x.z2

    def test_recompose_e1(self):
        assert exact(from_idempotent(IdempotentPair(1, 0)), E1.coeffs)

    @pytest.mark.parametrize("c", [-3.5, 0.0, 1.0, 2.25])
    def test_real_scalar(self, c):
        assert exact(from_idempotent(IdempotentPair(c, c)), (c, 0, 0, 0))

    def test_mixed_pair_round_trip(self):
        pair = IdempotentPair(2 + 1j, 3 - 1j)
        x = from_idempotent(pair)
        # z1 = (5+0i)/2, z2 = i(-1+2i)/2 = (-2-i)/2
        assert exact(x, (2.5, 0.0, -1.0, -0.5))
        back = to_idempotent(x)
        assert back.xi1 == pair.xi1 and back.xi2 == pair.xi2

    def test_round_trip_random(self, rng):
        for _ in range(500):
            x = random_bicomplex(rng, 100.0)
            y = from_idempotent(to_idempotent(x))
            err = max(abs(a - b) for a, b in zip(x.coeffs, y.coeffs))
            assert err <= 1e-12 * (1 + norm(x))

    def test_norm_identity(self, rng):
        for _ in range(500):
            x = random_bicomplex(rng)
            p = to_idempotent(x)
            assert math.isclose(norm(x) ** 2, (abs(p.xi1) ** 2 + abs(p.xi2) ** 2) / 2, rel_tol=1e-10)


class TestSingularInverse:
    def test_e1_singular(self):
        assert is_singular(E1)
        assert is_singular(E2)
        assert is_singular(Bicomplex.from_complex_pair(0, 0))

    def test_complex_multiples_of_idempotents(self, rng):
        for _ in range(50):
            c = complex(*rng.uniform(-5, 5, 2))
            assert is_singular(from_idempotent(IdempotentPair(c, 0)))
            assert is_singular(from_idempotent(IdempotentPair(0, c)))

    def test_one_not_singular(self):
        assert not is_singular(ONE)

    def test_defect_is_product_of_components(self, rng):
        for _ in range(200):
            x = random_bicomplex(rng)
            p = to_idempotent(x)
            assert math.isclose(singularity_defect(x), abs(p.xi1 * p.xi2), rel_tol=1e-10, abs_tol=1e-12)

    def test_random_nonsingular_invertible(self, rng):
        for _ in range(200):
            x = random_bicomplex(rng)
            assert not is_singular(x)
            prod = x * inverse(x)
            assert approx_eq(prod, ONE, 1e-12)

    def test_inverse_one(self):
        assert exact(inverse(ONE), (1, 0, 0, 0))

    def test_inverse_singular_raises(self):
        with pytest.raises(SingularElementError, match="O2"):
            inverse(E1)

    def test_inverse_componentwise(self):
        x = 2 * E1 + 4 * E2
        y = inverse(x)
        assert approx_eq(y, 0.5 * E1 + 0.25 * E2, 1e-15)
        assert approx_eq(x * y, ONE, 1e-15)

    def test_division(self):
        x, y = Bicomplex(1, 2, 3, 4), Bicomplex(2, 0, 1, 0)
        assert approx_eq((x / y) * y, x, 1e-12)


class TestNorm:
    def test_values(self):
        assert norm(Bicomplex(1, 1, 1, 1)) == 2.0
        assert math.isclose(norm(E1), math.sqrt(2) / 2, rel_tol=1e-15)
        assert norm(ZERO) == 0.0

    def test_e1_via_idempotent_identity(self):
        p = to_idempotent(E1)
        assert math.isclose(norm(E1) ** 2, (abs(p.xi1) ** 2 + abs(p.xi2) ** 2) / 2)


class TestSerialization:
    def test_text_round_trip(self, rng):
        for _ in range(50):
            x = random_bicomplex(rng)
            assert exact(parse(to_text(x)), x.coeffs)

    def test_parse_spaces(self):
        assert exact(parse(" 1, 2 ,3,4 "), (1, 2, 3, 4))

    @pytest.mark.parametrize("bad", ["1,2,3", "a,b,c,d", "1,2,3,4,5", "1,2,nan,4"])
    def test_parse_rejects(self, bad):
        with pytest.raises(InvalidArgumentError):
            parse(bad)

    def test_pair_json(self):
        p = IdempotentPair(1 + 2j, -3 + 0.5j)
        assert p.to_json() == '{"xi1": [1.0, 2.0], "xi2": [-3.0, 0.5]}'
        q = IdempotentPair.from_json(p.to_json())
        assert (q.xi1, q.xi2) == (p.xi1, p.xi2)

    def test_pair_json_bad(self):
        with pytest.raises(InvalidArgumentError):
            IdempotentPair.from_json('{"xi1": [1, 2]}')
