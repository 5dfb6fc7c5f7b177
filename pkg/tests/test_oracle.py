import random

import pytest

from sharlin.existential import UNDEFINED, canonicalize, ematch
from sharlin.multiset import parse_group
from sharlin.oracle import (
    NotInMatch,
    TrialConfig,
    check_equivalences,
    check_match_correct,
    check_optimality,
    gen_existential,
    render_report,
    run_correctness,
    run_optimality,
    witness_theta1,
    witness_theta2,
)
from sharlin.shlin_omega import alpha_omega, leq_omega, parse_omega
from sharlin.shlin2 import parse_two
from sharlin.shlin_sl import parse_sl
from sharlin.terms import parse_substitution, preimage_var

EX3_T1 = canonicalize(
    parse_substitution("{x/r(w1,w2,w2,w3,w3), y/a, z/r(w1)}"), {"x", "y", "z"}
)
EX3_T2 = canonicalize(
    parse_substitution("{x/r(w4,w5,w6,w8,w8), u/r(w4,w7), v/r(w7,w8)}"), {"u", "v", "x"}
)


def test_gen_deterministic_and_idempotent():
    cfg = TrialConfig(seed=99, trials=1)
    a = gen_existential({"x", "y"}, cfg)
    b = gen_existential({"x", "y"}, cfg)
    assert a == b
    rng = random.Random("invariants")
    for _ in range(10_000):
        c = gen_existential({"u", "x", "y"}, cfg, rng)
        assert c.rep.is_idempotent()
        assert c.rep.domain <= c.interest


def test_check_match_correct_on_worked_pair():
    for domain in ("omega", "two", "sl"):
        assert check_match_correct(EX3_T1, EX3_T2, domain)
    # swapped direction is undefined, hence vacuously correct
    assert ematch(EX3_T2, EX3_T1) is UNDEFINED
    for domain in ("omega", "two", "sl"):
        assert check_match_correct(EX3_T2, EX3_T1, domain)


def test_witness_theta2_realizes_groups():
    xs = {parse_group("ux"): 2}
    theta2 = witness_theta2(xs, {"u", "v", "x"})
    groups = {
        preimage_var(theta2, v).restrict({"u", "v", "x"})
        for v in theta2.range_vars()
    }
    assert parse_group("ux") in groups
    # the abstraction sits between the needed groups and any second argument
    a = alpha_omega(canonicalize(theta2, {"u", "v", "x"}))
    assert a == parse_omega("[ux]_{u,v,x}")

    theta2 = witness_theta2({parse_group("uv"): 1}, {"u", "v"})
    got = {preimage_var(theta2, v).restrict({"u", "v"}) for v in theta2.range_vars()}
    assert got == {parse_group("uv")}

    ground = witness_theta2({}, {"u", "v"})
    assert str(ground) == "{u/a, v/a}"


def test_witness_theta1_cases():
    e1 = parse_omega("[x^2, xz]_{x,y,z}")
    # combined-group case, with the fixed second substitution of the example
    for b in (parse_group("xz"), parse_group("u^2x^2"), parse_group("ux^2")):
        theta1 = witness_theta1(e1, EX3_T2, b)
        res = ematch(theta1, EX3_T2)
        assert res is not UNDEFINED
        assert b in alpha_omega(res).groups
        assert leq_omega(alpha_omega(theta1), e1)
    # pass-through case
    theta1 = witness_theta1(e1, EX3_T2, parse_group("uv"))
    res = ematch(theta1, EX3_T2)
    assert parse_group("uv") in alpha_omega(res).groups
    with pytest.raises(NotInMatch):
        witness_theta1(e1, EX3_T2, parse_group("y^5"))


def test_check_optimality_worked_instance():
    e1 = parse_omega("[x^2, xz]_{x,y,z}")
    e2 = parse_omega("[uv, ux, vx^2, x]_{u,v,x}")
    reports = check_optimality(e1, e2, "omega", TrialConfig(seed=1, trials=1))
    nonempty = [r for r in reports if r.group]
    assert len(nonempty) == 7
    assert all(r.verified for r in reports)
    got = {str(r.group) for r in nonempty}
    assert got == {"uv", "uxz", "xz", "u^2x^2", "ux^2", "vx^2", "x^2"}


def test_check_optimality_lemma_mode():
    e1 = parse_omega("[x^2, xz]_{x,y,z}")
    reports = check_optimality(e1, EX3_T2, "omega", TrialConfig(seed=1, trials=1))
    assert reports and all(r.verified for r in reports)
    assert all(r.theta2 == EX3_T2 for r in reports)


def test_check_optimality_two_and_sl():
    cfg = TrialConfig(seed=1, trials=1)
    reports = check_optimality(
        parse_two("[x^*, xz]_{x,y,z}"), parse_two("[uv, ux, vx^*, x]_{u,v,x}"), "two", cfg
    )
    assert reports and all(r.verified for r in reports)
    maxima = {str(g) for g in parse_two(
        "[uv, u^*v^*x^*, uxz, u^*x^*, v^*x^*, vxz, x^*, xz]_{u,v,x,y,z}"
    ).maximals}
    assert len(reports) == len(maxima)

    sl_reports = check_optimality(
        parse_sl("[{x, xz}, lin={y,z}]_{x,y,z}"),
        parse_sl("[{uv, ux, vx, x}, lin={u,v}]_{u,v,x}"),
        "sl",
        cfg,
    )
    assert sl_reports and all(r.verified for r in sl_reports)


def test_check_optimality_empty_first_argument():
    # the element with only the empty group: pass-through groups only
    e1 = parse_omega("[0]_{x,y}")
    e2 = parse_omega("[uv, ux]_{u,v,x}")
    reports = check_optimality(e1, e2, "omega", TrialConfig(seed=1, trials=1))
    assert reports and all(r.verified for r in reports)
    assert {str(r.group) for r in reports} == {"0", "uv"}


def test_suites_pass_and_render_deterministically():
    cfg = TrialConfig(seed=5, trials=300)
    rep1 = run_correctness(cfg)
    rep2 = run_correctness(cfg)
    assert not rep1["failures"]
    assert render_report(rep1) == render_report(rep2)
    assert rep1["defined"] > 100  # generation bias keeps the suite non-vacuous

    opt = run_optimality(TrialConfig(seed=5, trials=40), "omega")
    assert not opt["failures"]
    eq = check_equivalences(TrialConfig(seed=5, trials=150))
    assert not eq["failures"]
    assert render_report(eq).startswith("kind=equivalence seed=5 trials=150")


def test_suites_chunk_merge_invariance():
    # the same trials computed in two halves give the same per-trial results
    cfg = TrialConfig(seed=8, trials=100)
    whole = run_correctness(cfg)
    lo = run_correctness(cfg, hi=50)
    hi = run_correctness(cfg, lo=50, hi=100)
    assert whole["defined"] == lo["defined"] + hi["defined"]
    assert whole["domains"]["omega"] == lo["domains"]["omega"] + hi["domains"]["omega"]


def test_trial_config_validation():
    with pytest.raises(ValueError):
        TrialConfig(trials=0)
    with pytest.raises(ValueError):
        TrialConfig(max_vars=-1)
