import random

import pytest

from sharlin.existential import canonicalize, ematch
from sharlin.multiset import EMPTY, Multiset, parse_group
from sharlin.shlin_omega import (
    InterestMismatch,
    alpha_omega,
    approx_omega,
    leq_omega,
    match_omega,
    omega_element,
    parse_omega,
    project_omega,
    rename_omega,
    star_decompose,
    union_omega,
)
from sharlin.terms import EPSILON, parse_substitution


def _class(text, u):
    return canonicalize(parse_substitution(text), u)


EX2 = _class("{x/s(y,u,y), z/s(u,u), v/u}", {"w", "x", "y", "z"})
EX3_T1 = _class("{x/r(w1,w2,w2,w3,w3), y/a, z/r(w1)}", {"x", "y", "z"})
EX3_T2 = _class("{x/r(w4,w5,w6,w8,w8), u/r(w4,w7), v/r(w7,w8)}", {"u", "v", "x"})


def test_alpha_examples():
    assert alpha_omega(EX2) == parse_omega("[x^2y, xz^2, w]_{w,x,y,z}")
    assert alpha_omega(EX3_T1) == parse_omega("[x^2, xz]_{x,y,z}")
    free = canonicalize(EPSILON, {"x"})
    assert alpha_omega(free) == parse_omega("[x]_{x}")


def test_leq():
    assert leq_omega(parse_omega("[x]_{x}"), parse_omega("[x, x^2]_{x}"))
    assert not leq_omega(parse_omega("[x]_{x}"), parse_omega("[x]_{x,y}"))
    concrete = ematch(EX3_T1, EX3_T2)
    abstract = match_omega(alpha_omega(EX3_T1), alpha_omega(EX3_T2))
    assert leq_omega(alpha_omega(concrete), abstract)


def test_approx():
    assert approx_omega(parse_omega("[x^2y, xz^2, w]_{w,x,y,z}"), EX2)
    assert approx_omega(parse_omega("[x]_{x}"), _class("{x/a}", {"x"}))
    assert not approx_omega(parse_omega("[w]_{w,x}"), canonicalize(EPSILON, {"w", "x"}))


def test_star_decompose():
    s = [parse_group("ux"), parse_group("vx^2"), parse_group("x")]
    ok, witness = star_decompose(parse_group("u^2x^2"), s, {"x", "y", "z"})
    assert ok and dict(witness) == {parse_group("ux"): 2}
    ok, witness = star_decompose(EMPTY, s)
    assert ok and witness == ()
    ok, witness = star_decompose(parse_group("ux^3"), s)
    assert ok and dict(witness) == {parse_group("ux"): 1, parse_group("x"): 2}
    ok, witness = star_decompose(parse_group("u"), s)
    assert not ok and witness is None


def test_match_worked_example():
    r = match_omega(parse_omega("[x^2, xz]_{x,y,z}"), parse_omega("[uv, ux, vx^2, x]_{u,v,x}"))
    assert r == parse_omega("[uv, uxz, xz, u^2x^2, ux^2, vx^2, x^2]_{u,v,x,y,z}")
    # groups of the concrete match abstraction are all in there
    assert leq_omega(parse_omega("[uv, uxz, vx^2, x^2]_{u,v,x,y,z}"), r)


def test_match_bottom_first_argument_passes_groups_through():
    e2 = parse_omega("[uv, ux]_{u,v,x}")
    r = match_omega(omega_element((), {"x", "y"}), e2)
    assert r == parse_omega("[uv]_{u,v,x,y}")


def test_match_additive_in_first_argument():
    rng = random.Random(3)
    for _ in range(100):
        e1 = _random_element(rng, frozenset("xyz"))
        e2 = _random_element(rng, frozenset("uvx"))
        whole = match_omega(e1, e2)
        parts = omega_element((), e1.interest | e2.interest)
        for b in e1.groups:
            single = omega_element({b}, e1.interest)
            parts = union_omega(parts, match_omega(single, e2))
        if e1.groups:
            assert parts == whole
        else:
            assert whole == match_omega(e1, e2)


def test_match_output_restriction_and_pass_through():
    rng = random.Random(9)
    for _ in range(150):
        e1 = _random_element(rng, frozenset("wxyz"))
        e2 = _random_element(rng, frozenset("uvx"))
        r = match_omega(e1, e2)
        pass_through = {b for b in e2.groups if not b.support & e1.interest}
        assert pass_through <= r.groups
        for x in r.groups:
            if x in pass_through:
                continue
            assert x.restrict(e1.interest) in e1.groups


def test_project():
    assert project_omega(parse_omega("[uvx, vwz]_{u,v,w,x,z}"), {"u", "v", "w"}) == parse_omega(
        "[uv, vw]_{u,v,w}"
    )
    e = parse_omega("[x^2y]_{x,y}")
    assert project_omega(e, e.interest) == e
    assert project_omega(e, set()) == parse_omega("[0]_{}")


def test_rename_and_union():
    assert rename_omega(parse_omega("[xz]_{x,z}"), {"x": "u", "z": "w"}) == parse_omega(
        "[uw]_{u,w}"
    )
    assert union_omega(parse_omega("[x]_{x}"), parse_omega("[x^2]_{x}")) == parse_omega(
        "[x, x^2]_{x}"
    )
    with pytest.raises(InterestMismatch):
        union_omega(parse_omega("[x]_{x}"), parse_omega("[y]_{y}"))
    with pytest.raises(ValueError):
        rename_omega(parse_omega("[x, y]_{x,y}"), {"x": "y"})


def test_normalization_inserts_empty_group():
    e = omega_element({parse_group("x")}, {"x"})
    assert EMPTY in e.groups
    assert omega_element((), {"x"}).is_bottom()
    with pytest.raises(ValueError):
        omega_element({parse_group("xq")}, {"x"})


def test_parse_print_round_trip():
    for text in ("[]_{x}", "[0]_{x}", "[x^2, xz]_{x, y, z}", "[uv, uxz]_{u, v, x, z}"):
        assert str(parse_omega(text)) == text


def _random_element(rng, variables):
    groups = set()
    for _ in range(rng.randint(0, 3)):
        groups.add(
            Multiset({v: rng.randint(1, 3) for v in variables if rng.random() < 0.5})
        )
    return omega_element(groups, variables)


def test_match_result_mass_is_bounded():
    # every emitted group's shared-part mass equals the mass of a first
    # argument group, which bounds the result size
    rng = random.Random(13)
    for _ in range(100):
        e1 = _random_element(rng, frozenset("xyz"))
        e2 = _random_element(rng, frozenset("uvx"))
        common = e1.interest & e2.interest
        r = match_omega(e1, e2)
        bound = max((b.mass() for b in e1.groups), default=0)
        for x in r.groups:
            if x.support & e1.interest or x in e2.groups:
                continue
            assert x.restrict(common).mass() <= bound
