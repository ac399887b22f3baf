import time
from fractions import Fraction

import pytest

from kodaira.elliptic import EllipticCurve, EllipticPoint
from kodaira.generic_points import (
    GenericityCertificate,
    SearchExhausted,
    find_generic_points,
    find_rational_point,
    verify_certificate,
)
from kodaira.scalars import ComplexApprox


@pytest.fixture
def curve1():
    return EllipticCurve(Fraction(1))


def test_rational_point_search(curve1):
    p = find_rational_point(curve1, bound=10)
    assert p == EllipticPoint(Fraction(0), Fraction(1))


def test_stride_three_for_lam_one(curve1):
    # strides 1 and 2 both produce an excluded value ([2]P is exactly the
    # branch-image difference) and must be rejected by evaluation
    cert = find_generic_points(curve1, 4)
    assert cert.stride == 3
    assert cert.mode == "exact"
    e2, e3, e4 = cert.points
    base = cert.base_point
    assert e2 == curve1.multiply(6, base)
    assert e3 == curve1.multiply(9, base)
    assert e4 == curve1.multiply(12, base)
    assert cert.all_passed


def test_stride_one_rejected_because_double_is_delta(curve1):
    # the multiplier-2 candidate equals the excluded difference exactly
    base = EllipticPoint(Fraction(0), Fraction(1))
    assert curve1.multiply(2, base) == curve1.delta()
    cert = find_generic_points(curve1, 2)
    assert cert.stride > 1


def test_identity_always_excluded(curve1):
    cert = find_generic_points(curve1, 3)
    for p in cert.points:
        assert not p.is_infinity


def test_certificate_verifies_and_mutations_fail(curve1):
    cert = find_generic_points(curve1, 4)
    assert verify_certificate(cert)

    # e2 replaced by delta: an exclusion now fails
    mutated = GenericityCertificate.from_json(cert.to_json())
    mutated.points[0] = curve1.delta()
    assert not verify_certificate(mutated)

    # e2 == e3 makes a difference equal to the identity
    mutated = GenericityCertificate.from_json(cert.to_json())
    mutated.points[1] = mutated.points[0]
    assert not verify_certificate(mutated)


def test_certificate_is_self_contained(curve1):
    cert = find_generic_points(curve1, 3)
    round_tripped = GenericityCertificate.from_json(cert.to_json())
    assert verify_certificate(round_tripped)
    assert round_tripped.points == cert.points
    assert round_tripped.to_json() == cert.to_json()


def test_large_r_exact_within_budget(curve1):
    start = time.perf_counter()
    cert = find_generic_points(curve1, 12)
    elapsed = time.perf_counter() - start
    assert cert.mode == "exact"
    assert verify_certificate(cert)
    assert elapsed < 5.0


def test_excluded_set_pairwise_distinct(curve1):
    # offsets together with the difference point, its inverse and the
    # identity must stay pairwise distinct for the rank argument
    cert = find_generic_points(curve1, 5)
    special = [cert.delta, curve1.neg(cert.delta)]
    seen = []
    for p in cert.points + special:
        for q in seen:
            assert p != q
        seen.append(p)


def test_complex_parameter_certificate():
    lam = ComplexApprox.from_re_im_strings("0.5", "0.25")
    curve = EllipticCurve(lam)
    cert = find_generic_points(curve, 4)
    assert cert.mode == "approximate"
    assert cert.all_passed
    assert verify_certificate(cert)


def test_rational_strategy_exhaustion():
    # a curve chosen to have no small rational point in a tiny search box
    curve = EllipticCurve(Fraction(6))
    found = find_rational_point(curve, bound=2)
    if found is None:
        with pytest.raises(SearchExhausted):
            find_generic_points(curve, 3, strategy="rational", bound=2)
    else:
        pytest.skip("parameter has a small rational point after all")


def test_ladder_exhausts_all_bases(curve1):
    # with the stride budget capped below the first passing stride every
    # rung of the base-point ladder fails by evaluation, including the
    # complex-approximation fallback
    with pytest.raises(SearchExhausted):
        find_generic_points(curve1, 4, max_stride=2)
    cert = find_generic_points(curve1, 4, max_stride=3)
    assert cert.stride == 3


def test_fallback_base_point_when_no_rational():
    # with the rational search exhausted the search uses (0, sqrt(lam));
    # for lam = 2 that lives in the quadratic extension, still exact
    curve = EllipticCurve(Fraction(2))
    if find_rational_point(curve, bound=3) is not None:
        pytest.skip("parameter has a small rational point after all")
    cert = find_generic_points(curve, 3, bound=3)
    assert cert.mode == "exact"
    assert verify_certificate(cert)
