"""Monte-Carlo and exhaustive numeric verification of the exact claims.

Ties the integer-valued claims -- membership, Jacobian rank ``r - 1``,
``2^r`` branch points, projection degrees ``2^(r-1)``, the genus closed
form -- to floating-point evidence at controlled precision.  Runs are
deterministic: a fixed ``(seed, lam, r, schedule)`` reproduces identical
tallies and identical report bytes (wall time is kept out of the
serialized report for that reason).

A coincidence decision that falls into the ambiguity band (closer than
ten tolerances but not within one) triggers the escalation policy: the
affected check is re-executed once from scratch at doubled precision;
if it stays ambiguous the run fails loudly with a distinct status
instead of silently merging nearby points.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .config_curve import (
    AmbiguousCoincidenceError,
    ConfigurationCurve,
    genus,
    sample_genus2_point,
)
from .elliptic import SingularCurveError
from .generic_points import find_generic_points, verify_certificate
from .genus2 import GenusTwoCurve, genus2_point_distance, genus2_points_equal
from .scalars import (
    ComplexApprox,
    DEFAULT_PREC_BITS,
    DEFAULT_TOL,
    format_rational,
    parse_rational,
)

import random


class PrecisionExhausted(RuntimeError):
    """Ambiguity persisted after the escalation schedule ran out."""


def parse_lambda_spec(text: str):
    """Parse ``"num/den"`` into a Fraction or ``"re,im"`` into a string pair."""
    text = text.strip()
    if "," in text:
        re_part, im_part = text.split(",", 1)
        return (re_part.strip(), im_part.strip())
    return parse_rational(text)


def lambda_at(spec, prec: int, tol: float):
    """Materialise a lambda spec at a given precision."""
    if isinstance(spec, Fraction):
        return spec
    re_part, im_part = spec
    return ComplexApprox.from_re_im_strings(re_part, im_part, prec, tol)


def lambda_spec_json(spec):
    if isinstance(spec, Fraction):
        return {"kind": "rational", "value": format_rational(spec)}
    return {"kind": "complex", "re": spec[0], "im": spec[1]}


@dataclass
class CheckTally:
    checked: int = 0
    passed: int = 0
    failed: int = 0
    escalated: bool = False
    info: dict = field(default_factory=dict)

    def record(self, ok: bool, n: int = 1):
        self.checked += n
        if ok:
            self.passed += n
        else:
            self.failed += n

    def to_json_dict(self):
        return {
            "checked": self.checked,
            "passed": self.passed,
            "failed": self.failed,
            "escalated": self.escalated,
            "info": {k: self.info[k] for k in sorted(self.info)},
        }


@dataclass
class VerificationRun:
    seed: int
    lam_spec: object
    r: int
    precision_schedule: list
    tol: float
    sample_count: int
    tallies: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)
    escalations: list = field(default_factory=list)
    status: str = "pass"
    wall_time_s: float = 0.0     # excluded from the serialized report

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json_dict(self):
        return {
            "schema": "1",
            "seed": self.seed,
            "lambda": lambda_spec_json(self.lam_spec),
            "r": self.r,
            "precision_schedule": list(self.precision_schedule),
            "tol": repr(self.tol),
            "sample_count": self.sample_count,
            "tallies": {name: tally.to_json_dict()
                        for name, tally in self.tallies.items()},
            "counterexamples": list(self.counterexamples),
            "escalations": list(self.escalations),
            "status": self.status,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


class _Context:
    """Curves and certificate rebuilt from scratch at one precision."""

    def __init__(self, lam_spec, r: int, prec: int, tol: float):
        self.prec = prec
        self.tol = tol
        lam = lambda_at(lam_spec, prec, tol)
        self.curve = GenusTwoCurve(lam, prec, tol)
        self.elliptic = self.curve.elliptic_quotient()
        self.certificate = find_generic_points(self.elliptic, r)
        self.config = ConfigurationCurve(self.curve, self.certificate.offsets())


def _check_discriminant(ctx: _Context, run: VerificationRun, tally: CheckTally, rng):
    disc = ctx.elliptic.discriminant()
    if isinstance(disc, Fraction):
        ok = disc != 0
    else:
        ok = not disc.is_zero()
    tally.record(ok)
    if not ok:
        run.counterexamples.append({"check": "discriminant", "value": str(disc)})


def _check_genericity(ctx: _Context, run: VerificationRun, tally: CheckTally, rng):
    ok = ctx.certificate.all_passed and verify_certificate(ctx.certificate)
    tally.record(ok)
    tally.info["mode"] = ctx.certificate.mode
    tally.info["stride"] = ctx.certificate.stride
    if not ok:
        run.counterexamples.append({"check": "genericity",
                                    "certificate": ctx.certificate.to_json_dict()})


def _check_membership_and_rank(ctx: _Context, run: VerificationRun, tally: CheckTally, rng):
    config = ctx.config
    r = config.r
    want_rank = r - 1
    for _ in range(run.sample_count):
        p1 = sample_genus2_point(ctx.curve, rng)
        if p1 is None:
            continue
        for tup in config.fiber_over_first(p1):
            ok_member = config.contains(tup)
            report = config.jacobian(tup)
            ok_rank = report.rank == want_rank
            tally.record(ok_member and ok_rank)
            if not (ok_member and ok_rank):
                run.counterexamples.append({
                    "check": "membership_and_rank",
                    "member": ok_member,
                    "rank": report.rank,
                    "expected_rank": want_rank,
                    "tuple": tup.to_json_dict(),
                })
    if run.sample_count > 0 and tally.checked == 0:
        tally.record(False)  # all draws rejected: not a vacuous pass
        run.counterexamples.append({"check": "membership_and_rank",
                                    "detail": "no samples enumerated"})
    tally.info["expected_rank"] = want_rank


def _check_branch_count(ctx: _Context, run: VerificationRun, tally: CheckTally, rng):
    config = ctx.config
    r = config.r
    points = config.branch_points()
    expected = 2 ** r
    ok_count = len(points) == expected
    tally.record(ok_count)
    tally.info["expected"] = expected
    tally.info["found"] = len(points)
    # split by the sign of the forced last coordinate
    half = expected // 2
    split = {+1: 0, -1: 0}
    for tup in points:
        sign = _branch_sign(ctx, tup[-1])
        split[sign] += 1
    ok_split = split[+1] == half and split[-1] == half
    tally.record(ok_split)
    tally.info["split"] = {"+1": split[+1], "-1": split[-1]}
    if not (ok_count and ok_split):
        run.counterexamples.append({
            "check": "branch_count",
            "expected": expected,
            "found": len(points),
            "split": {"+1": split[+1], "-1": split[-1]},
            "points": [t.to_json_dict() for t in points],
        })
    # every branch point is a smooth member
    for tup in points:
        ok = config.contains(tup) and config.jacobian(tup).rank == r - 1
        tally.record(ok)
        if not ok:
            run.counterexamples.append({"check": "branch_membership",
                                        "tuple": tup.to_json_dict()})


def _branch_sign(ctx: _Context, point) -> int:
    plus = ctx.curve.branch_point(+1)
    if point.is_exact and plus.is_exact:
        return +1 if genus2_points_equal(point, plus) else -1
    d = genus2_point_distance(point, plus, ctx.prec)
    return +1 if d < ctx.tol else -1


def _check_projection_degrees(ctx: _Context, run: VerificationRun, tally: CheckTally, rng):
    config = ctx.config
    r = config.r
    expected = 2 ** (r - 1)
    indices = sorted({1, 2 if r >= 2 else 1, r})
    for j in indices:
        got = config.projection_degree_estimate(j, samples=3, seed=run.seed)
        ok = got == expected
        tally.record(ok)
        if not ok:
            run.counterexamples.append({"check": "projection_degrees",
                                        "j": j, "expected": expected, "found": got})
    tally.info["expected"] = expected
    tally.info["indices"] = indices


def _check_genus(ctx: _Context, run: VerificationRun, tally: CheckTally, rng):
    rec, closed = genus(ctx.config.r)
    ok = rec == closed
    tally.record(ok)
    tally.info["recursion"] = rec
    tally.info["closed_form"] = closed
    if not ok:
        run.counterexamples.append({"check": "genus", "recursion": rec,
                                    "closed_form": closed})


_CHECKS = (
    ("discriminant", _check_discriminant),
    ("genericity", _check_genericity),
    ("membership_and_rank", _check_membership_and_rank),
    ("branch_count", _check_branch_count),
    ("projection_degrees", _check_projection_degrees),
    ("genus", _check_genus),
)


def verify_claim(lam_spec, r: int, samples: int = 50, seed: int = 0,
                 prec: int = DEFAULT_PREC_BITS, tol: float = DEFAULT_TOL,
                 escalation_steps: int = 1) -> VerificationRun:
    """Run the whole verification pipeline, deterministically.

    ``lam_spec`` is a Fraction or a pair of decimal strings ``(re, im)``
    so that every precision level can rebuild the parameter exactly.
    Raises ValueError for the excluded parameter values (0 and -27/4)
    before any sampling.
    """
    if isinstance(lam_spec, str):
        lam_spec = parse_lambda_spec(lam_spec)
    schedule = [prec * 2 ** k for k in range(escalation_steps + 1)]
    run = VerificationRun(seed=seed, lam_spec=lam_spec, r=r,
                          precision_schedule=schedule, tol=tol,
                          sample_count=samples)
    start = time.perf_counter()

    try:
        base_ctx = _Context(lam_spec, r, prec, tol)
    except SingularCurveError as exc:
        raise ValueError(str(exc)) from exc

    contexts = {prec: base_ctx}

    for index, (name, check) in enumerate(_CHECKS):
        level = 0
        escalated = False
        while True:
            level_prec = schedule[level]
            if level_prec not in contexts:
                contexts[level_prec] = _Context(lam_spec, r, level_prec, tol)
            ctx = contexts[level_prec]
            rng = random.Random(seed * 1_000_003 + index)
            tally = CheckTally(escalated=escalated)
            snapshot = len(run.counterexamples)
            try:
                check(ctx, run, tally, rng)
            except AmbiguousCoincidenceError as exc:
                del run.counterexamples[snapshot:]  # drop the aborted attempt
                run.escalations.append({
                    "check": name,
                    "from_prec": level_prec,
                    "detail": str(exc),
                })
                escalated = True
                level += 1
                if level >= len(schedule):
                    run.status = "precision_exhausted"
                    run.wall_time_s = time.perf_counter() - start
                    raise PrecisionExhausted(
                        f"check {name!r} stayed ambiguous at "
                        f"{schedule[-1]} bits") from exc
                continue
            run.tallies[name] = tally
            break

    if any(t.failed for t in run.tallies.values()):
        run.status = "fail"
    run.wall_time_s = time.perf_counter() - start
    return run


def precision_escalation_policy(run: VerificationRun) -> VerificationRun:
    """Re-execute the escalated checks of a finished run at the next
    precision level; identical to what :func:`verify_claim` does inline.

    Provided as a standalone entry point so an ambiguous report can be
    retried without repeating the clean checks.
    """
    if not run.escalations:
        return run
    top = run.precision_schedule[-1]
    retry = verify_claim(run.lam_spec, run.r, run.sample_count, run.seed,
                         prec=top, tol=run.tol, escalation_steps=0)
    merged = VerificationRun(
        seed=run.seed, lam_spec=run.lam_spec, r=run.r,
        precision_schedule=run.precision_schedule + [top * 2],
        tol=run.tol, sample_count=run.sample_count,
        tallies=retry.tallies, counterexamples=retry.counterexamples,
        escalations=run.escalations + retry.escalations, status=retry.status,
        wall_time_s=run.wall_time_s + retry.wall_time_s,
    )
    return merged
