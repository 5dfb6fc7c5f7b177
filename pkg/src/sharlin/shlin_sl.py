"""The reduced product of set-sharing with a linearity component.

An element is a triple: set-sharing groups (plain variable sets), the set
of variables linear in every group, and the interest set. Ground
variables (those in no sharing group) are always linear, and nonempty
sharing components contain the empty group, mirroring the other domains.

Matching glues first-argument groups with subsets of the second argument's
groups agreeing on the shared variables, provided no first-argument linear
variable would be used twice; groups whose variables are all possibly
non-linear may be counted twice, which wipes the linearity of their
variables. This computes exactly the abstraction of the maximal-antichain
matching run on the embedding into 2-sharing groups.

Textual form: ``[{uv, ux}, lin={u,v}]_{u,v,x}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .multiset import parse_group
from .shlin_omega import InterestMismatch
from .shlin2 import (
    INF,
    ShLin2Element,
    TwoSharingGroup,
    antichain_max,
    two_element,
    two_group,
)

__all__ = [
    "ShLinElement",
    "sl_element",
    "alpha_sl",
    "gamma_sl_maximals",
    "gamma_sl",
    "nl",
    "leq_sl",
    "match_sl",
    "project_sl",
    "rename_sl",
    "union_sl",
    "parse_sl",
]


@dataclass(frozen=True)
class ShLinElement:
    sharing: frozenset[frozenset[str]]
    linear: frozenset[str]
    interest: frozenset[str]

    def is_bottom(self) -> bool:
        return not self.sharing

    def __str__(self) -> str:
        gs = sorted(("".join(sorted(g)) for g in self.sharing if g))
        if not gs and self.sharing:
            gs = ["0"]
        lin = ", ".join(sorted(self.linear))
        vs = ", ".join(sorted(self.interest))
        return "[{" + ", ".join(gs) + "}, lin={" + lin + "}]_{" + vs + "}"

    def __repr__(self) -> str:
        return (
            f"ShLinElement({set(''.join(sorted(g)) for g in self.sharing)!r}, "
            f"{set(self.linear)!r}, {set(self.interest)!r})"
        )


def sl_element(sharing, linear, interest) -> ShLinElement:
    """Normalize: add the empty group to nonempty sharing, keep linearity
    within the interest set, and mark ground variables linear."""
    u = frozenset(interest)
    groups = {frozenset(g) for g in sharing}
    for g in groups:
        if not g <= u:
            raise ValueError(f"group {sorted(g)} not over interest set {sorted(u)}")
    if groups:
        groups.add(frozenset())
    covered = frozenset().union(*groups) if groups else frozenset()
    lin = (frozenset(linear) & u) | (u - covered)
    return ShLinElement(frozenset(groups), lin, u)


def alpha_sl(e: ShLin2Element) -> ShLinElement:
    """Forget exponents: supports become sharing groups, variables that are
    nowhere infinite stay linear."""
    sharing = {g.support for g in e.maximals}
    linear = {
        x for x in e.interest if all(m.exp(x) <= 1 for m in e.maximals)
    }
    return sl_element(sharing, linear, e.interest)


def gamma_sl_maximals(e: ShLinElement) -> frozenset[TwoSharingGroup]:
    """Best 2-sharing description of each group: linear variables get
    exponent 1, the rest infinity. Distinct groups have distinct supports,
    so the result is already an antichain."""
    out = set()
    for b in e.sharing:
        out.add(two_group({v: (1 if v in e.linear else INF) for v in b}))
    return antichain_max(out)


def gamma_sl(e: ShLinElement) -> ShLin2Element:
    return two_element(gamma_sl_maximals(e), e.interest)


def nl(x: Iterable[frozenset[str]]) -> frozenset[str]:
    """Variables occurring in at least two distinct groups of ``x``."""
    seen: set[str] = set()
    out: set[str] = set()
    for g in set(map(frozenset, x)):
        out |= g & seen
        seen |= g
    return frozenset(out)


def leq_sl(e1: ShLinElement, e2: ShLinElement) -> bool:
    return (
        e1.interest == e2.interest
        and e1.sharing <= e2.sharing
        and e1.linear >= e2.linear
    )


def match_sl(e1: ShLinElement, e2: ShLinElement) -> ShLinElement:
    s1, l1, u1 = e1.sharing, e1.linear, e1.interest
    s2, l2, u2 = e2.sharing, e2.linear, e2.interest
    u = u1 | u2
    s2_pass = {b for b in s2 if not b & u1}
    s2_rest = sorted(s2 - s2_pass, key=sorted)
    s_bar = {b for b in s2_rest if not b & l1}

    pairs: set[tuple[frozenset[str], frozenset[str]]] = {
        (b, l2) for b in s2_pass
    }
    for b in sorted(s1, key=sorted):
        b_shared = b & u2
        for mask in range(1 << len(s2_rest)):
            x = [s2_rest[i] for i in range(len(s2_rest)) if mask >> i & 1]
            union_x = frozenset().union(*x) if x else frozenset()
            if b_shared != union_x & u1:
                continue
            nlx = nl(x)
            if l1 & nlx:
                continue
            doubled = frozenset().union(*(g for g in x if g in s_bar)) if x else frozenset()
            pairs.add((b | union_x, l2 - nlx - doubled))

    sharing = {b for b, _ in pairs}
    if pairs:
        linear = frozenset(u)
        for b, l in pairs:
            linear &= l1 | l | (u - b)
    else:
        linear = frozenset(u)
    return sl_element(sharing, linear, u)


def project_sl(e: ShLinElement, variables: Iterable[str]) -> ShLinElement:
    v = frozenset(variables)
    return sl_element(
        {g & v for g in e.sharing}, e.linear & v, e.interest & v
    )


def rename_sl(e: ShLinElement, rho: Mapping[str, str]) -> ShLinElement:
    relevant = {v: rho.get(v, v) for v in e.interest}
    if len(set(relevant.values())) != len(relevant):
        raise ValueError("renaming is not injective on the interest set")
    return sl_element(
        {frozenset(relevant[v] for v in g) for g in e.sharing},
        {relevant[v] for v in e.linear},
        set(relevant.values()),
    )


def union_sl(e1: ShLinElement, e2: ShLinElement) -> ShLinElement:
    if e1.interest != e2.interest:
        raise InterestMismatch(f"{sorted(e1.interest)} vs {sorted(e2.interest)}")
    return sl_element(e1.sharing | e2.sharing, e1.linear & e2.linear, e1.interest)


def parse_sl(text: str) -> ShLinElement:
    """Parse ``[{uv, ux}, lin={u,v}]_{u,v,x}``."""
    s = text.strip()
    if not s.startswith("[{"):
        raise ValueError(f"bad sharing+linearity element {text!r}")
    close = s.index("}")
    body = s[2:close].strip()
    rest = s[close + 1 :].strip()
    if not rest.startswith(","):
        raise ValueError(f"missing linear component in {text!r}")
    rest = rest[1:].strip()
    if not rest.startswith("lin={"):
        raise ValueError(f"missing linear component in {text!r}")
    lin_close = rest.index("}")
    lin_body = rest[5:lin_close].strip()
    tail = rest[lin_close + 1 :].strip()
    if not tail.startswith("]"):
        raise ValueError(f"bad sharing+linearity element {text!r}")
    suffix = tail[1:].strip()
    if not (suffix.startswith("_{") and suffix.endswith("}")):
        raise ValueError(f"missing interest set in {text!r}")
    inner = suffix[2:-1].strip()
    interest = [n.strip() for n in inner.split(",")] if inner else []

    groups = []
    if body:
        for part in body.split(","):
            part = part.strip()
            g = parse_group(part)
            if any(n > 1 for _, n in g.items()):
                raise ValueError(f"set-sharing group {part!r} has a repeated variable")
            groups.append(g.support)
    linear = [n.strip() for n in lin_body.split(",")] if lin_body else []
    return sl_element(groups, linear, interest)
