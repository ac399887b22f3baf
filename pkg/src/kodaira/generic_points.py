"""Search for translation offsets on the elliptic curve with a certificate.

The configuration curve construction needs points ``e_2, ..., e_r`` on
the elliptic curve such that every ``e_i`` and every difference
``e_i - e_j`` avoids three excluded values: the identity, the difference
``delta`` of the two cover-branch images, and ``-delta``.  This module
finds such points and records every comparison in a self-contained,
re-verifiable certificate.

Default strategy: locate one rational point ``P`` by searching x
coordinates of bounded height, then take ``e_i = [stride * i] P`` for the
smallest stride whose exclusion checks all pass.  No torsion or rank
assumption is made -- each exclusion is decided by evaluating the group
law.  When the parameter is not rational (or no rational point exists in
range) the search falls back to the known point ``(0, sqrt(lam))`` and,
for complex parameters, to ComplexApprox arithmetic with distance-based
checks; such certificates are marked ``approximate``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .elliptic import EC_INFINITY, EllipticCurve, EllipticPoint, points_equal
from .scalars import (
    Fraction,
    NOT_REPRESENTABLE,
    as_approx,
    is_approx,
    rational_sqrt,
    scalar_to_json,
    scalar_from_json,
)

EXCLUDED_NAMES = ("infinity", "delta", "neg_delta")


class SearchExhausted(RuntimeError):
    """No suitable base point or stride found within the given bounds."""


@dataclass(frozen=True)
class ExclusionCheck:
    subject: str        # "e2" or "e3-e2"
    excluded: str       # one of EXCLUDED_NAMES
    passed: bool

    def to_json_dict(self):
        return {"subject": self.subject, "excluded": self.excluded, "passed": self.passed}


@dataclass
class GenericityCertificate:
    """Exact (or distance-certified) record that chosen offsets are generic."""

    lam: object
    r: int
    mode: str            # "exact" or "approximate"
    stride: int
    base_point: EllipticPoint
    delta: EllipticPoint
    points: list = field(default_factory=list)   # e_2 .. e_r
    checks: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def offsets(self) -> list:
        return list(self.points)

    def to_json_dict(self):
        return {
            "schema": "1",
            "lam": scalar_to_json(self.lam),
            "r": self.r,
            "mode": self.mode,
            "stride": self.stride,
            "base_point": _point_to_json(self.base_point),
            "delta": _point_to_json(self.delta),
            "points": [_point_to_json(p) for p in self.points],
            "checks": [c.to_json_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "GenericityCertificate":
        obj = json.loads(text)
        return cls(
            lam=scalar_from_json(obj["lam"]),
            r=int(obj["r"]),
            mode=obj["mode"],
            stride=int(obj["stride"]),
            base_point=_point_from_json(obj["base_point"]),
            delta=_point_from_json(obj["delta"]),
            points=[_point_from_json(p) for p in obj["points"]],
            checks=[ExclusionCheck(c["subject"], c["excluded"], c["passed"])
                    for c in obj["checks"]],
        )


def _point_to_json(p: EllipticPoint):
    if p.is_infinity:
        return {"infinity": True}
    return {"x": scalar_to_json(p.x), "y": scalar_to_json(p.y)}


def _point_from_json(obj) -> EllipticPoint:
    if obj.get("infinity"):
        return EC_INFINITY
    return EllipticPoint(scalar_from_json(obj["x"]), scalar_from_json(obj["y"]))


def _distinct(curve: EllipticCurve, p: EllipticPoint, q: EllipticPoint,
              guard: float = 10.0) -> bool:
    """Certified inequality of two points.

    Exact coordinates compare exactly.  Approximate coordinates must be
    separated by at least ``guard * tol`` in some coordinate; anything
    closer counts as not-distinct so that marginal configurations are
    rejected rather than silently accepted.
    """
    if p.is_infinity or q.is_infinity:
        return p.is_infinity != q.is_infinity
    if is_approx(p.x) or is_approx(q.x):
        tol = max(getattr(p.x, "tol", 0.0), getattr(q.x, "tol", 0.0), curve.tol)
        dx = as_approx(p.x, curve.prec, curve.tol).distance(q.x)
        dy = as_approx(p.y, curve.prec, curve.tol).distance(q.y)
        return max(dx, dy) >= guard * tol
    return not points_equal(p, q)


def _exclusion_checks(curve, subject_name, point, delta, checks):
    neg_delta = curve.neg(delta)
    for name, excluded in zip(EXCLUDED_NAMES, (EC_INFINITY, delta, neg_delta)):
        checks.append(ExclusionCheck(subject_name, name, _distinct(curve, point, excluded)))


def _run_all_checks(curve, points, delta) -> list:
    """Every exclusion for the offsets e_2..e_r, in a fixed order."""
    checks: list = []
    r_top = len(points) + 1
    for idx, e in enumerate(points, start=2):
        _exclusion_checks(curve, f"e{idx}", e, delta, checks)
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            diff = curve.sub(points[j], points[i])
            _exclusion_checks(curve, f"e{j + 2}-e{i + 2}", diff, delta, checks)
    assert len(checks) == 3 * (r_top - 1 + (r_top - 1) * (r_top - 2) // 2)
    return checks


def find_rational_point(curve: EllipticCurve, bound: int):
    """Smallest-height rational point, by x = a/b search with |a|, b <= bound."""
    if not isinstance(curve.lam, Fraction):
        return None
    seen = set()
    for a_abs in range(0, bound + 1):
        for b in range(1, bound + 1):
            for a in sorted({a_abs, -a_abs}):
                x = Fraction(a, b)
                if x in seen:
                    continue
                seen.add(x)
                y = rational_sqrt(curve.rhs(x))
                if y is not None:
                    return EllipticPoint(x, y)
    return None


def _base_point_ladder(curve: EllipticCurve, strategy: str, bound: int):
    """Base-point candidates in decreasing order of preference.

    Rational point of small height first, then the known point
    ``(0, sqrt(lam))`` in the exact tower, finally the same point in
    complex approximation (covers a torsion rational point or torsion
    multiples of the known point).
    """
    if strategy in ("auto", "rational") and isinstance(curve.lam, Fraction):
        found = find_rational_point(curve, bound)
        if found is not None:
            yield found, "exact"
        if strategy == "rational":
            if found is None:
                raise SearchExhausted(f"no rational point with height bound {bound}")
            return
    known = curve.branch_image(+1)
    yield known, ("approximate" if is_approx(known.y) else "exact")
    if not is_approx(known.y):
        yield EllipticPoint(as_approx(known.x, curve.prec, curve.tol),
                            as_approx(known.y, curve.prec, curve.tol)), "approximate"


def find_generic_points(curve: EllipticCurve, r: int, strategy: str = "auto",
                        bound: int = 30, max_stride: int = 200) -> GenericityCertificate:
    """Offsets ``e_2..e_r`` passing all exclusions, with full certificate.

    Sweeps strides over each base-point candidate in turn; every
    exclusion is decided by evaluation, so a torsion base simply fails
    its strides and the search moves down the ladder.  Raises
    :class:`SearchExhausted` when no combination passes.
    """
    if r < 2:
        raise ValueError("r must be at least 2")

    delta = curve.delta()
    for base, base_mode in _base_point_ladder(curve, strategy, bound):
        mode = "approximate" if (base_mode == "approximate"
                                 or is_approx(delta.x)) else "exact"
        for stride in range(1, max_stride + 1):
            step = curve.multiply(stride, base)
            points = []
            current = step  # [stride * 1] base
            for _ in range(2, r + 1):
                current = curve.add(current, step)
                points.append(current)    # e_i = [stride * i] base
            checks = _run_all_checks(curve, points, delta)
            if all(c.passed for c in checks):
                return GenericityCertificate(
                    lam=curve.lam, r=r, mode=mode, stride=stride,
                    base_point=base, delta=delta, points=points, checks=checks,
                )
    raise SearchExhausted(f"no stride up to {max_stride} passed the exclusions")


def verify_certificate(cert: GenericityCertificate) -> bool:
    """Recompute every exclusion from scratch; True iff all hold.

    Self-contained: depends only on the certificate contents.  Exact
    certificates are re-verified with exact arithmetic.
    """
    curve = EllipticCurve(cert.lam)
    if len(cert.points) != cert.r - 1:
        return False
    delta_check = curve.delta()
    if not _distinct_is_false(curve, cert.delta, delta_check):
        return False
    for p in cert.points:
        if not curve.contains(p):
            return False
    checks = _run_all_checks(curve, cert.points, cert.delta)
    return all(c.passed for c in checks)


def _distinct_is_false(curve, p, q) -> bool:
    """True when two points agree (exactly or within tolerance)."""
    return not _distinct(curve, p, q)
