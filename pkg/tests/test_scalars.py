import random
from fractions import Fraction

import mpmath
import pytest

from kodaira.scalars import (
    ComplexApprox,
    NOT_REPRESENTABLE,
    QuadExt,
    SymbolicScalar,
    quadext,
    rational_sqrt,
    scalar_from_json,
    scalar_to_json,
    scalars_equal,
    sqrt_in_tower,
    symbols,
)


def rand_fraction(rng, height=20):
    num = rng.randint(-height, height)
    den = rng.randint(1, height)
    return Fraction(num, den)


def test_rational_field_ops():
    assert Fraction(1, 2) + Fraction(1, 3) == Fraction(5, 6)
    with pytest.raises(ZeroDivisionError):
        Fraction(1) / Fraction(0)


def test_field_axioms_randomized_rationals():
    rng = random.Random(7)
    for _ in range(200):
        x, y, z = (rand_fraction(rng) for _ in range(3))
        assert (x + y) + z == x + (y + z)
        assert x * y == y * x
        if x != 0:
            assert x * (1 / x) == 1


def test_quadext_norm_identity():
    q = quadext(Fraction(3), Fraction(2), Fraction(5))
    assert q * q.conjugate() == Fraction(9 - 4 * 5)


def test_quadext_field_axioms_randomized():
    rng = random.Random(11)
    rad = Fraction(7)  # non-square radicand
    for _ in range(150):
        vals = [quadext(rand_fraction(rng), rand_fraction(rng), rad) for _ in range(3)]
        x, y, z = vals
        assert (x + y) + z == x + (y + z)
        assert x * y == y * x
        assert (x + y) * z == x * z + y * z
        if not (isinstance(x, Fraction) and x == 0):
            inv = 1 / x if isinstance(x, QuadExt) else Fraction(1) / x
            assert x * inv == 1


def test_quadext_canonical_collapse():
    # b = 0 collapses to a rational; square radicand collapses entirely
    assert quadext(Fraction(3), Fraction(0), Fraction(2)) == Fraction(3)
    assert quadext(Fraction(1), Fraction(2), Fraction(9)) == Fraction(7)
    q = quadext(Fraction(1), Fraction(1), Fraction(2))
    assert isinstance(q, QuadExt)
    # products that cancel the radical part land back in the rationals
    assert isinstance(q * q.conjugate(), Fraction)


def test_quadext_interop_with_fractions():
    q = quadext(0, 1, Fraction(2))
    assert q + Fraction(1, 2) == quadext(Fraction(1, 2), 1, Fraction(2))
    assert Fraction(1, 2) + q == q + Fraction(1, 2)
    assert 2 * q == q + q
    assert (q * q) == Fraction(2)


def test_sqrt_in_tower_rational_square():
    assert sqrt_in_tower(Fraction(9, 4)) == Fraction(3, 2)


def test_sqrt_in_tower_radicand_multiple():
    # lam = 1: sqrt(lam) is rational
    assert sqrt_in_tower(Fraction(1), radicand=Fraction(1)) == 1
    # lam = 2: sqrt(lam) = 0 + 1*sqrt(2)
    root = sqrt_in_tower(Fraction(2), radicand=Fraction(2))
    assert root == quadext(0, 1, Fraction(2))
    assert root * root == Fraction(2)
    # 8 = 2 * (2^2): in the tower over sqrt(2)
    root8 = sqrt_in_tower(Fraction(8), radicand=Fraction(2))
    assert root8 * root8 == Fraction(8)


def test_sqrt_in_tower_not_representable():
    assert sqrt_in_tower(Fraction(3), radicand=Fraction(2)) is NOT_REPRESENTABLE
    assert sqrt_in_tower(Fraction(-1)) is NOT_REPRESENTABLE
    assert not NOT_REPRESENTABLE  # falsy sentinel, a normal outcome


def test_sqrt_of_quadext_element():
    # (1 + sqrt(2))^2 = 3 + 2*sqrt(2)
    target = quadext(3, 2, Fraction(2))
    root = sqrt_in_tower(target)
    assert root is not NOT_REPRESENTABLE
    assert root * root == target


def test_rational_sqrt():
    assert rational_sqrt(Fraction(49, 64)) == Fraction(7, 8)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-4)) is None


class TestComplexApprox:
    def test_construction_and_equality(self):
        z = ComplexApprox.of(Fraction(1, 3), prec=256, tol=1e-30)
        w = ComplexApprox.of(Fraction(1, 3), prec=256, tol=1e-30)
        assert z.approx_equal(w)
        assert not z.approx_equal(w + ComplexApprox.of(1, 256, 1e-30))

    def test_division_by_zero(self):
        z = ComplexApprox.of(1)
        with pytest.raises(ZeroDivisionError):
            z / ComplexApprox.of(0)

    def test_reproduces_exact_arithmetic(self):
        # at precision p the error on rational work stays below 2^(-p+8)
        rng = random.Random(3)
        for prec in (128, 256):
            bound = mpmath.mpf(2) ** (-prec + 8)
            for _ in range(50):
                x, y = rand_fraction(rng, 50), rand_fraction(rng, 50)
                exact = x * y + x - y
                zx = ComplexApprox.of(x, prec)
                zy = ComplexApprox.of(y, prec)
                approx = zx * zy + zx - zy
                assert approx.distance(exact) < bound

    def test_precision_carries_through_negation(self):
        z = ComplexApprox.of(Fraction(1, 3), prec=256)
        assert (-(-z)).distance(z) < mpmath.mpf(2) ** -250

    def test_sqrt(self):
        z = ComplexApprox.of(Fraction(2), prec=256)
        assert (z.sqrt() * z.sqrt()).distance(Fraction(2)) < 1e-70


def test_scalars_equal_dispatch():
    assert scalars_equal(Fraction(1, 2), Fraction(1, 2))
    assert not scalars_equal(Fraction(1, 2), Fraction(1, 3))
    assert scalars_equal(ComplexApprox.of(Fraction(1, 2)), Fraction(1, 2))
    q = quadext(0, 1, Fraction(5))
    assert scalars_equal(ComplexApprox.of(q), q)


class TestSymbolicScalar:
    def test_canonical_form_idempotent(self):
        gamma, r = symbols("gamma", "r")
        e = (gamma - 1) * (4 * r + 19)
        again = SymbolicScalar(e.expr)
        assert e == again
        assert e.expr == again.expr

    def test_cancellation(self):
        gamma, r = symbols("gamma", "r")
        expr = ((2 * gamma - 2) * (4 + r)) / (gamma - 1)
        assert expr == 2 * (4 + r)
        assert "gamma" not in expr.free_symbol_names()

    def test_substitution_to_fraction(self):
        gamma, r = symbols("gamma", "r")
        e = (8 + 2 * r) * (2 * gamma - 2) + 3 * (gamma - 1)
        assert e.substitute({"r": 8, "gamma": 2}).as_fraction() == 51

    def test_division_by_zero(self):
        gamma = symbols("gamma")
        with pytest.raises(ZeroDivisionError):
            gamma / SymbolicScalar(0)

    def test_normalize_twice_is_normalize_once(self):
        rng = random.Random(5)
        gamma, r = symbols("gamma", "r")
        for _ in range(20):
            a, b = rand_fraction(rng), rand_fraction(rng)
            e = a * gamma + b * r + a * b
            assert SymbolicScalar(e.expr) == e


def test_scalar_json_round_trip():
    values = [
        Fraction(-7, 3),
        quadext(Fraction(1, 2), Fraction(-3), Fraction(5)),
        ComplexApprox.from_re_im_strings("0.5", "0.25"),
        symbols("gamma") * 2 + 1,
    ]
    for v in values:
        back = scalar_from_json(scalar_to_json(v))
        if isinstance(v, ComplexApprox):
            assert back.approx_equal(v)
        else:
            assert back == v
