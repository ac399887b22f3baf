from fractions import Fraction

import pytest

import kodaira.verifier as verifier_module
from kodaira.config_curve import AmbiguousCoincidenceError
from kodaira.verifier import (
    PrecisionExhausted,
    lambda_at,
    parse_lambda_spec,
    verify_claim,
)


def test_parse_lambda_spec():
    assert parse_lambda_spec("3/7") == Fraction(3, 7)
    assert parse_lambda_spec("2") == Fraction(2)
    assert parse_lambda_spec("0.5, 0.25") == ("0.5", "0.25")


def test_lambda_at_precisions():
    z256 = lambda_at(("0.5", "0.25"), 256, 1e-30)
    z512 = lambda_at(("0.5", "0.25"), 512, 1e-30)
    assert z256.prec == 256 and z512.prec == 512
    assert z512.distance(z256) == 0  # the decimals are dyadic here


def test_singular_parameters_rejected_before_sampling():
    with pytest.raises(ValueError):
        verify_claim("-27/4", 2)
    with pytest.raises(ValueError):
        verify_claim("0/1", 2)


def test_full_run_rational_lam():
    run = verify_claim("1/1", 3, samples=20, seed=0)
    assert run.passed
    tallies = run.tallies
    assert tallies["discriminant"].failed == 0
    assert tallies["genericity"].passed == 1
    assert tallies["membership_and_rank"].failed == 0
    assert tallies["membership_and_rank"].checked > 0
    assert tallies["branch_count"].info["found"] == 8
    assert tallies["branch_count"].info["split"] == {"+1": 4, "-1": 4}
    assert tallies["projection_degrees"].info["expected"] == 4
    assert tallies["genus"].info == {"recursion": 13, "closed_form": 13}
    assert run.counterexamples == []


def test_full_run_complex_lam():
    # the construction imposes no reality condition on the parameter
    run = verify_claim("0.5,0.25", 2, samples=8, seed=3)
    assert run.passed
    assert run.tallies["branch_count"].info["found"] == 4


def test_determinism_byte_identical():
    a = verify_claim("1/1", 2, samples=10, seed=42).to_json()
    b = verify_claim("1/1", 2, samples=10, seed=42).to_json()
    assert a == b


def test_different_seeds_still_pass():
    for seed in (0, 1, 2):
        assert verify_claim("1/1", 2, samples=5, seed=seed).passed


def test_wall_time_not_serialized():
    run = verify_claim("1/1", 2, samples=5, seed=0)
    assert run.wall_time_s > 0
    assert "wall_time" not in run.to_json()


def test_adversarial_tolerance_triggers_escalation():
    # with tol = 1e-1 some branch coordinates fall into the ambiguity
    # band; escalation is triggered deterministically and, since the
    # separation is genuine geometry rather than roundoff, doubling the
    # precision cannot resolve it: the run fails loudly
    with pytest.raises(PrecisionExhausted):
        verify_claim("1/1", 3, samples=2, seed=0, tol=1e-1)


def test_escalation_resolves_roundoff_band(monkeypatch):
    # policy mechanics: a check that is ambiguous at the base precision
    # and clean at doubled precision must be retried exactly once and
    # then recorded as escalated
    calls = []

    def flaky(ctx, run, tally, rng):
        calls.append(ctx.prec)
        if ctx.prec == 256:
            raise AmbiguousCoincidenceError("simulated roundoff band",
             check_name="flaky", distance=1e-31, tol=1e-30)
        tally.record(True)

    monkeypatch.setattr(verifier_module, "_CHECKS", (("flaky", flaky),))
    run = verify_claim("1/1", 2, samples=1, seed=0, prec=256)
    assert calls == [256, 512]
    assert run.passed
    assert run.tallies["flaky"].escalated
    assert run.escalations and run.escalations[0]["from_prec"] == 256


def test_persistent_ambiguity_fails_loudly(monkeypatch):
    def always_ambiguous(ctx, run, tally, rng):
        raise AmbiguousCoincidenceError("persistent", check_name="bad",
                                        distance=1e-31, tol=1e-30)

    monkeypatch.setattr(verifier_module, "_CHECKS",
                        (("bad", always_ambiguous),))
    with pytest.raises(PrecisionExhausted):
        verify_claim("1/1", 2, samples=1, seed=0)


def test_clean_run_not_escalated():
    run = verify_claim("1/1", 2, samples=5, seed=0)
    assert run.escalations == []
    assert not any(t.escalated for t in run.tallies.values())


def test_standalone_policy_leaves_clean_run_unchanged():
    from kodaira.verifier import precision_escalation_policy

    run = verify_claim("1/1", 2, samples=5, seed=0)
    assert precision_escalation_policy(run) is run


def test_standalone_policy_retries_escalated_run(monkeypatch):
    from kodaira.verifier import precision_escalation_policy

    def flaky(ctx, run, tally, rng):
        if ctx.prec <= 256:
            raise AmbiguousCoincidenceError("band", check_name="flaky",
                                            distance=1e-31, tol=1e-30)
        tally.record(True)

    monkeypatch.setattr(verifier_module, "_CHECKS", (("flaky", flaky),))
    first = verify_claim("1/1", 2, samples=1, seed=0)
    assert first.escalations
    retried = precision_escalation_policy(first)
    assert retried.passed
    assert retried.escalations  # original events preserved


def test_counterexample_dump_on_failure(monkeypatch):
    def failing(ctx, run, tally, rng):
        tally.record(False)
        run.counterexamples.append({"check": "failing", "detail": "forced"})

    monkeypatch.setattr(verifier_module, "_CHECKS", (("failing", failing),))
    run = verify_claim("1/1", 2, samples=1, seed=0)
    assert run.status == "fail"
    assert run.counterexamples == [{"check": "failing", "detail": "forced"}]


def test_exact_and_numeric_counts_agree():
    # integer-valued quantities agree between the exact certificate route
    # and the numeric enumeration for a rational parameter
    run = verify_claim("1/1", 3, samples=5, seed=1)
    assert run.tallies["branch_count"].info["found"] == 2 ** 3
    assert run.tallies["genus"].info["recursion"] == \
        run.tallies["genus"].info["closed_form"]
    assert run.tallies["projection_degrees"].info["expected"] == 2 ** 2
