"""The configuration curve inside the r-fold product of the genus-2 curve.

Given offsets ``e_2, ..., e_r`` on the elliptic quotient, the
configuration curve consists of the r-tuples ``(p_1, ..., p_r)`` of
genus-2 points with ``cover(p_i) = cover(p_1) + e_i`` for ``2 <= i <= r``
(group law on the elliptic curve).  This module provides everything that
can be computed about it at desk scale: membership, fibers over the
first coordinate, Jacobian matrices and their rank (smoothness), the
branch points of the forget-last-coordinate tower and their count
``2^r``, the genus by Riemann-Hurwitz recursion against its closed form
``r * 2^(r-1) + 1``, and coordinate-projection degrees ``2^(r-1)``.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .elliptic import EllipticPoint
from .genus2 import (
    GenusTwoCurve,
    GenusTwoPoint,
    genus2_point_distance,
    genus2_points_equal,
)
from .generic_points import GenericityCertificate
from .scalars import ComplexApprox, as_approx, is_approx, scalar_to_json

DEFAULT_RANK_RTOL = 1e-12


class MixedKindError(ValueError):
    """A tuple mixes exact and approximate coordinates."""


class AmbiguousCoincidenceError(RuntimeError):
    """A distance fell between the coincidence and separation thresholds.

    Carries enough context for the escalation policy to re-run the check
    at doubled precision.
    """

    def __init__(self, message, check_name=None, distance=None, tol=None):
        super().__init__(message)
        self.check_name = check_name
        self.distance = distance
        self.tol = tol


@dataclass(frozen=True)
class ConfigTuple:
    """Candidate member of the configuration curve: r genus-2 points."""

    points: tuple

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @property
    def is_exact(self) -> bool:
        return all(p.is_exact for p in self.points)

    def kinds_uniform(self) -> bool:
        kinds = {p.is_exact for p in self.points if not p.is_infinity}
        return len(kinds) <= 1

    def as_approx(self, prec: int, tol: float) -> "ConfigTuple":
        converted = []
        for p in self.points:
            if p.is_infinity:
                converted.append(p)
            else:
                converted.append(GenusTwoPoint.affine(
                    as_approx(p.x, prec, tol), as_approx(p.y, prec, tol)))
        return ConfigTuple(tuple(converted))

    def to_json_dict(self):
        out = []
        for p in self.points:
            if p.is_infinity:
                out.append({"infinity": p.infinity_sign})
            else:
                out.append({"x": scalar_to_json(p.x), "y": scalar_to_json(p.y)})
        return out


@dataclass
class JacobianReport:
    matrix: list                 # (r-1) x r entries
    rank: int
    method: str                  # "exact-elimination" or "singular-values"
    singular_values: list = field(default_factory=list)
    full_rank: bool = True       # False flags a genericity violation


@dataclass
class TowerReport:
    """Counts and genera for the forget-last-coordinate tower."""

    r: int
    branch_count: int
    per_level_branch_counts: dict
    genus_by_recursion: int
    genus_closed_form: int
    fiber_degree_estimate: int
    deg_cover: int = 1
    base_genus: int = 0
    base_euler_relation: str = ""
    notes: str = ""

    def consistent(self) -> bool:
        return self.genus_by_recursion == self.genus_closed_form

    def to_json_dict(self):
        return {
            "r": self.r,
            "branch_count": self.branch_count,
            "per_level_branch_counts": {str(k): v for k, v in
                                        sorted(self.per_level_branch_counts.items())},
            "genus_by_recursion": self.genus_by_recursion,
            "genus_closed_form": self.genus_closed_form,
            "fiber_degree_estimate": self.fiber_degree_estimate,
            "deg_cover": self.deg_cover,
            "base_genus": self.base_genus,
            "base_euler_relation": self.base_euler_relation,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


# ---------------------------------------------------------------------------
# Genus of the tower
# ---------------------------------------------------------------------------


def tower_genus_recursion(r: int) -> int:
    """Genus via the double-cover recursion.

    Level 1 is the genus-2 curve itself; each step is a double cover with
    ``2^k`` simple branch points, so ``2*g_k - 2 = 2*(2*g_{k-1} - 2) + 2^k``.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    euler_neg = 2  # 2*g - 2 at level 1 (genus 2)
    for k in range(2, r + 1):
        euler_neg = 2 * euler_neg + 2 ** k
    assert euler_neg % 2 == 0
    return euler_neg // 2 + 1


def tower_genus_closed_form(r: int) -> int:
    """Closed form ``r * 2^(r-1) + 1``."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return r * 2 ** (r - 1) + 1


def genus(r: int) -> tuple:
    """Both computations of the genus; they must agree."""
    return tower_genus_recursion(r), tower_genus_closed_form(r)


def base_genus_from_cover_degree(r: int, deg_cover: int = 1) -> int:
    """Genus of an unramified degree-``deg_cover`` cover of the tower top.

    Riemann-Hurwitz with no ramification:
    ``2*gamma - 2 = deg_cover * (2*g - 2)`` with ``g = r*2^(r-1) + 1``,
    hence ``gamma = 1 + deg_cover * r * 2^(r-1)``.
    """
    return 1 + deg_cover * r * 2 ** (r - 1)


BASE_EULER_RELATION = "2*gamma - 2 = deg_cover * (2*(r*2^(r-1)+1) - 2)"

BASE_EULER_NOTE = (
    "base genus follows the unramified-cover relation "
    "2*gamma - 2 = deg_cover * (2*g_top - 2) with g_top = r*2^(r-1)+1; "
    "the shorter normalisation 2*gamma - 2 = deg_cover * 2^r is inconsistent "
    "with the per-section pullback count (gamma-1)/r = deg_cover * 2^(r-1) "
    "that the projection-degree check measures, and is not used"
)


# ---------------------------------------------------------------------------
# The configuration curve
# ---------------------------------------------------------------------------


class ConfigurationCurve:
    """Membership, fibers, Jacobians and branch data for given offsets."""

    def __init__(self, curve: GenusTwoCurve, offsets: list,
                 rank_rtol: float = DEFAULT_RANK_RTOL,
                 coincidence_guard: float = 10.0):
        self.curve = curve
        self.elliptic = curve.elliptic_quotient()
        self.offsets = list(offsets)          # e_2 .. e_r
        self.r = len(self.offsets) + 1
        self.rank_rtol = rank_rtol
        self.coincidence_guard = coincidence_guard

    @classmethod
    def from_certificate(cls, cert: GenericityCertificate,
                         prec: int = None, tol: float = None, **kw) -> "ConfigurationCurve":
        lam = cert.lam
        curve = GenusTwoCurve(lam,
                              prec if prec is not None else 256,
                              tol if tol is not None else 1e-30)
        return cls(curve, cert.offsets(), **kw)

    # -- distance classification ------------------------------------------------

    def _classify(self, distance, check_name: str) -> str:
        """'coincident' / 'distinct', raising on the in-between band.

        Distances below tol are coincidences; distances beyond
        ``coincidence_guard * tol`` are certified distinct; the band in
        between is ambiguous and triggers the escalation policy rather
        than a silent call either way.
        """
        tol = self.curve.tol
        if distance < tol:
            return "coincident"
        if distance < self.coincidence_guard * tol:
            raise AmbiguousCoincidenceError(
                f"distance {mpmath.nstr(mpmath.mpf(distance), 8)} within the ambiguity band "
                f"[{tol}, {self.coincidence_guard * tol}) during {check_name}",
                check_name=check_name, distance=distance, tol=tol)
        return "distinct"

    def _points_coincide(self, p: GenusTwoPoint, q: GenusTwoPoint, check_name: str) -> bool:
        if p.is_exact and q.is_exact:
            return genus2_points_equal(p, q)
        d = genus2_point_distance(p, q, self.curve.prec)
        return self._classify(d, check_name) == "coincident"

    # -- membership ---------------------------------------------------------------

    def contains(self, tup: ConfigTuple) -> bool:
        """Full membership test: on-curve, cover conditions, distinctness.

        Mixed exact/approximate coordinate kinds are rejected outright.
        """
        if len(tup) != self.r:
            return False
        if not tup.kinds_uniform():
            raise MixedKindError("tuple mixes exact and approximate coordinates")
        for p in tup:
            if not self.curve.contains(p):
                return False
        base_image = self.curve.cover(tup[0])
        for i, e in enumerate(self.offsets, start=2):
            expected = self.elliptic.add(base_image, e)
            got = self.curve.cover(tup[i - 1])
            if not self._elliptic_points_match(got, expected):
                return False
        # tuples with two coincident coordinates are excluded by definition
        for i, j in itertools.combinations(range(self.r), 2):
            if self._points_coincide(tup[i], tup[j], "membership-distinctness"):
                return False
        return True

    def _elliptic_points_match(self, p: EllipticPoint, q: EllipticPoint) -> bool:
        if p.is_infinity or q.is_infinity:
            return p.is_infinity and q.is_infinity
        if is_approx(p.x) or is_approx(q.x):
            prec = self.curve.prec
            dx = as_approx(p.x, prec).distance(as_approx(q.x, prec))
            dy = as_approx(p.y, prec).distance(as_approx(q.y, prec))
            return max(dx, dy) < self.curve.tol
        return p.x == q.x and p.y == q.y

    # -- fibers over the first coordinate ------------------------------------------

    def fiber_over_first(self, p1: GenusTwoPoint) -> list:
        """All tuples of the configuration curve with first coordinate ``p1``.

        Generically ``2^(r-1)`` tuples: an independent two-point fiber
        choice for each later slot; a slot whose target hits a branch
        image contributes a single choice.  Results are converted to a
        uniform coordinate kind.
        """
        base_image = self.curve.cover(p1)
        slot_choices = []
        for e in self.offsets:
            target = self.elliptic.add(base_image, e)
            slot_choices.append(self.curve.fiber(target))
        tuples = []
        for combo in itertools.product(*slot_choices):
            tuples.append(self._uniform(ConfigTuple((p1,) + combo)))
        return tuples

    def _uniform(self, tup: ConfigTuple) -> ConfigTuple:
        if tup.kinds_uniform():
            return tup
        return tup.as_approx(self.curve.prec, self.curve.tol)

    # -- Jacobian and rank -----------------------------------------------------------

    def jacobian(self, tup: ConfigTuple) -> JacobianReport:
        """The (r-1) x r Jacobian of the defining map at a member tuple.

        Row ``i-1`` expresses the condition on slot ``i``: its first
        column holds ``-d(cover)/dx`` at ``p_1`` and column ``i`` holds
        ``d(cover)/dx`` at ``p_i`` (value ``2x`` in the affine chart, a
        unit at the chart boundary); all other entries vanish.
        """
        r = self.r
        d_first = self.curve.cover_derivative(tup[0])
        matrix = []
        for i in range(1, r):
            row = [None] * r
            row[0] = -d_first
            for k in range(1, r):
                if k != i:
                    row[k] = Fraction(0)
            row[i] = self.curve.cover_derivative(tup[i])
            matrix.append(row)
        if tup.is_exact:
            rank = _exact_rank(matrix)
            return JacobianReport(matrix, rank, "exact-elimination",
                                  full_rank=(rank == r - 1))
        rank, sv = _numeric_rank(matrix, self.curve.prec, self.rank_rtol)
        return JacobianReport(matrix, rank, "singular-values", sv,
                              full_rank=(rank == r - 1))

    # -- branch points of the forget-last-coordinate tower ------------------------------

    def branch_points(self) -> list:
        """The branch points of the double cover forgetting the last slot.

        These are exactly the member tuples whose last coordinate is one
        of the two cover-critical points; the enumeration walks both
        critical points, the two first-slot choices over the forced
        image, and the independent choices in the middle slots.
        """
        if self.r < 2:
            raise ValueError("the forget-last-coordinate tower needs r >= 2")
        found = []
        e_last = self.offsets[-1]
        for sign in (+1, -1):
            p_last = self.curve.branch_point(sign)
            image_last = self.curve.cover(p_last)
            first_image = self.elliptic.sub(image_last, e_last)
            for p1 in self.curve.fiber(first_image):
                base_image = self.curve.cover(p1)
                middle_choices = []
                for e in self.offsets[:-1]:
                    target = self.elliptic.add(base_image, e)
                    middle_choices.append(self.curve.fiber(target))
                for combo in itertools.product(*middle_choices):
                    found.append(self._uniform(ConfigTuple((p1,) + combo + (p_last,))))
        self._check_pairwise_distinct(found, "branch-point-enumeration")
        return found

    def _check_pairwise_distinct(self, tuples: list, check_name: str):
        for a, b in itertools.combinations(tuples, 2):
            coincide = True
            for pa, pb in zip(a, b):
                if not self._points_coincide(pa, pb, check_name):
                    coincide = False
                    break
            if coincide:
                raise AmbiguousCoincidenceError(
                    f"two enumerated tuples coincide during {check_name}",
                    check_name=check_name, distance=0.0, tol=self.curve.tol)

    # -- projection degrees ---------------------------------------------------------

    def projection_fiber(self, j: int, value: GenusTwoPoint,
                         with_slot_sizes: bool = False):
        """All member tuples whose j-th coordinate equals ``value`` (1-based)."""
        if not 1 <= j <= self.r:
            raise ValueError("projection index out of range")
        tuples = []
        slot_sizes = []
        if j == 1:
            p1_choices = [value]
        else:
            e_j = self.offsets[j - 2]
            first_image = self.elliptic.sub(self.curve.cover(value), e_j)
            p1_choices = self.curve.fiber(first_image)
            slot_sizes.append(len(p1_choices))
        for p1 in p1_choices:
            base_image = self.curve.cover(p1)
            slot_choices = []
            for i, e in enumerate(self.offsets, start=2):
                if i == j:
                    slot_choices.append([value])
                else:
                    target = self.elliptic.add(base_image, e)
                    fib = self.curve.fiber(target)
                    slot_choices.append(fib)
            if p1 is p1_choices[0]:
                slot_sizes.extend(len(c) for i, c in enumerate(slot_choices, start=2)
                                  if i != j)
            for combo in itertools.product(*slot_choices):
                tuples.append(self._uniform(ConfigTuple((p1,) + combo)))
        if with_slot_sizes:
            return tuples, slot_sizes
        return tuples

    def projection_degree_estimate(self, j: int, samples: int = 10, seed: int = 0) -> int:
        """Fiber cardinality of the j-th projection; must be ``2^(r-1)``.

        Counts the fiber over both cover-critical points and over
        ``samples`` generic points.  A draw is ramified -- and re-drawn --
        when some *other* slot's elliptic target lands on a branch image
        (detectable as a one-point slot fiber); the count itself is never
        used to decide a re-draw.  Returns the common cardinality or
        raises on disagreement.
        """
        counts = {}
        for sign in (+1, -1):
            pt = self.curve.branch_point(sign)
            counts[f"critical{sign:+d}"] = len(self.projection_fiber(j, pt))
        drawn = 0
        attempts = 0
        rng = random.Random(seed * 1_000_003 + j)
        while drawn < samples:
            attempts += 1
            if attempts > 50 * max(1, samples):
                raise RuntimeError("sampling failed to find generic draws")
            pt = sample_genus2_point(self.curve, rng)
            if pt is None:
                continue
            fiber, slot_sizes = self.projection_fiber(j, pt, with_slot_sizes=True)
            if any(size < 2 for size in slot_sizes):
                continue  # ramified draw, re-draw
            counts[f"sample{drawn}"] = len(fiber)
            drawn += 1
        values = set(counts.values())
        if len(values) != 1:
            raise RuntimeError(f"projection fiber sizes disagree: {counts}")
        return values.pop()

    # -- reports ----------------------------------------------------------------------

    def tower_report(self, deg_cover: int = 1) -> TowerReport:
        """Branch counts per level, genus both ways, and degree estimate."""
        per_level = {}
        for level in range(2, self.r + 1):
            sub = ConfigurationCurve(self.curve, self.offsets[:level - 1],
                                     self.rank_rtol, self.coincidence_guard)
            per_level[level] = len(sub.branch_points())
        rec, closed = genus(self.r)
        est = self.projection_degree_estimate(1, samples=3)
        return TowerReport(
            r=self.r,
            branch_count=per_level.get(self.r, 0),
            per_level_branch_counts=per_level,
            genus_by_recursion=rec,
            genus_closed_form=closed,
            fiber_degree_estimate=est,
            deg_cover=deg_cover,
            base_genus=base_genus_from_cover_degree(self.r, deg_cover),
            base_euler_relation=BASE_EULER_RELATION,
            notes=BASE_EULER_NOTE,
        )

    def enumeration_to_csv(self, tuples: list) -> str:
        """One tuple per row, coordinates rendered as strings."""
        lines = []
        header = []
        for i in range(1, self.r + 1):
            header += [f"x{i}", f"y{i}"]
        lines.append(",".join(header))
        for tup in tuples:
            row = []
            for p in tup:
                if p.is_infinity:
                    row += [f"infinity{p.infinity_sign:+d}", ""]
                else:
                    row += [_scalar_str(p.x), _scalar_str(p.y)]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def _scalar_str(x) -> str:
    if isinstance(x, ComplexApprox):
        return x.to_str()
    return str(x)


def sample_genus2_point(curve: GenusTwoCurve, rng) -> GenusTwoPoint:
    """Random approximate point: x uniform in the radius-2 disk, y solved.

    Draws with ``|x|`` below ten times the tolerance are rejected (too
    close to the cover-critical locus for stable rank checks).  Returns
    None when the draw was rejected so the caller can re-draw.
    """
    with mpmath.workprec(curve.prec):
        radius = 2 * mpmath.sqrt(rng.random())
        angle = 2 * mpmath.pi * rng.random()
        x = ComplexApprox.of(mpmath.mpc(radius * mpmath.cos(angle),
                                        radius * mpmath.sin(angle)),
                             curve.prec, curve.tol)
    if x.abs_value() < 10 * curve.tol:
        return None
    y = as_approx(curve.rhs(x), curve.prec, curve.tol).sqrt()
    return GenusTwoPoint.affine(x, y)


# ---------------------------------------------------------------------------
# Rank computations
# ---------------------------------------------------------------------------


def _exact_rank(matrix: list) -> int:
    """Gaussian elimination over exact scalars (fractions and quadratic
    extension elements interoperate)."""
    rows = [list(row) for row in matrix]
    n_rows, n_cols = len(rows), len(rows[0])
    rank = 0
    col = 0
    for col in range(n_cols):
        pivot_row = None
        for i in range(rank, n_rows):
            if rows[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pivot = rows[rank][col]
        for i in range(rank + 1, n_rows):
            if rows[i][col] != 0:
                factor = rows[i][col] / pivot
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == n_rows:
            break
    return rank


def _numeric_rank(matrix: list, prec: int, rtol: float) -> tuple:
    """Rank by singular values: count of sigma > rtol * sigma_max."""
    with mpmath.workprec(prec):
        m = mpmath.matrix(len(matrix), len(matrix[0]))
        for i, row in enumerate(matrix):
            for j, entry in enumerate(row):
                z = as_approx(entry, prec).mpc
                m[i, j] = z
        sv = mpmath.svd_c(m, compute_uv=False)
        values = [mpmath.mpf(sv[i]) for i in range(sv.rows)]
        top = max(values) if values else mpmath.mpf(0)
        if top == 0:
            return 0, [str(v) for v in values]
        rank = sum(1 for v in values if v > rtol * top)
    return rank, [mpmath.nstr(v, 20) for v in values]
