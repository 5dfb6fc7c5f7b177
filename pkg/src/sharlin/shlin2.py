"""2-sharing groups: multiplicities clipped to {0, 1, infinity}.

A 2-sharing group records, per variable, whether a hidden existential
variable occurs never, exactly once, or possibly more than once. Groups
with equal support are ordered by pointwise exponent comparison, elements
are downward-closed sets of groups, and an element is represented by its
maximal groups (an antichain) plus the interest set. As in the exact
multiplicity domain, nonempty elements contain the empty group.

Two matching operators are provided. ``match2_ref`` is the literal
set-level definition, enumerating all candidate groups over the joint
interest set; it is exponential in the number of variables and exists as a
small-input reference and oracle. ``match2_opt`` works directly on maximal
antichains, choosing subsets of the second argument's groups and repeating
the ones whose shared variables are all non-linear; it is the production
operator and provably computes the same downward-closed set.

The textual form writes infinity as ``^*`` (``^inf`` accepted on input),
e.g. ``[x^*y, xz^*]_{x,y,z}``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .multiset import EMPTY, Multiset
from .shlin_omega import (
    InterestMismatch,
    ShLinOmegaElement,
    omega_element,
    _split_element,
)

__all__ = [
    "INF",
    "TwoSharingGroup",
    "ShLin2Element",
    "EMPTY2",
    "TooLarge",
    "two_group",
    "alpha2_group",
    "oplus",
    "square",
    "two_element",
    "antichain_max",
    "down_closure",
    "alpha2",
    "gamma2_contains",
    "el2_contains",
    "leq2",
    "match2_ref",
    "match2_opt",
    "match2",
    "project2",
    "rename2",
    "union2",
    "embed_cap2",
    "prop_abstraction2_check",
    "parse_two",
    "parse_two_group",
]

INF = float("inf")


class TooLarge(Exception):
    """Joint interest set exceeds the reference matcher's enumeration cap."""


@dataclass(frozen=True)
class TwoSharingGroup:
    """Map from variables to exponents 1 or INF; absent means 0."""

    items: tuple[tuple[str, float], ...]

    def exp(self, var: str) -> float:
        for v, e in self.items:
            if v == var:
                return e
        return 0

    @property
    def support(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.items)

    def restrict(self, variables) -> "TwoSharingGroup":
        return TwoSharingGroup(tuple((v, e) for v, e in self.items if v in variables))

    def leq(self, other: "TwoSharingGroup") -> bool:
        """Same support and pointwise exponent order."""
        if len(self.items) != len(other.items):
            return False
        return all(v == w and e <= f for (v, e), (w, f) in zip(self.items, other.items))

    def sort_key(self):
        return (tuple(v for v, _ in self.items), self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def __str__(self) -> str:
        if not self.items:
            return "0"
        return "".join(v if e == 1 else f"{v}^*" for v, e in self.items)

    def __repr__(self) -> str:
        return f"TwoSharingGroup({str(self)!r})"


def two_group(exps: Mapping[str, float] | Iterable[tuple[str, float]]) -> TwoSharingGroup:
    pairs = exps.items() if isinstance(exps, Mapping) else exps
    clean: dict[str, float] = {}
    for v, e in pairs:
        if e == 0:
            continue
        if e not in (1, INF):
            raise ValueError(f"exponent for {v!r} must be 1 or INF")
        clean[v] = max(clean.get(v, 0), e)
    return TwoSharingGroup(tuple(sorted(clean.items())))


EMPTY2 = TwoSharingGroup(())


def alpha2_group(b: Multiset) -> TwoSharingGroup:
    """Clip exact multiplicities: 1 stays, anything larger becomes INF."""
    return TwoSharingGroup(
        tuple((v, 1 if n == 1 else INF) for v, n in b.items())
    )


def _add(e: float, f: float) -> float:
    if e == 0:
        return f
    if f == 0:
        return e
    return INF


def oplus(o: TwoSharingGroup, p: TwoSharingGroup) -> TwoSharingGroup:
    """Pointwise saturating sum: 1 + 1 and anything + INF give INF."""
    if not o.items:
        return p
    if not p.items:
        return o
    exps: dict[str, float] = dict(o.items)
    for v, e in p.items:
        exps[v] = _add(exps.get(v, 0), e)
    return TwoSharingGroup(tuple(sorted(exps.items())))


def square(o: TwoSharingGroup) -> TwoSharingGroup:
    """Delinearization: the group summed with itself."""
    return TwoSharingGroup(tuple((v, INF) for v, _ in o.items))


def antichain_max(groups: Iterable[TwoSharingGroup]) -> frozenset[TwoSharingGroup]:
    """Maximal elements; groups equal under the order are deduplicated."""
    gs = set(groups)
    return frozenset(
        g for g in gs if not any(g is not h and g != h and g.leq(h) for h in gs)
    )


def down_closure(groups: Iterable[TwoSharingGroup]) -> set[TwoSharingGroup]:
    """All groups below some given group (same support, lowered exponents)."""
    out: set[TwoSharingGroup] = set()
    for g in groups:
        fixed = [(v, e) for v, e in g.items if e == 1]
        wide = [v for v, e in g.items if e == INF]
        for choice in product((1, INF), repeat=len(wide)):
            out.add(two_group(dict(fixed) | dict(zip(wide, choice))))
    return out


@dataclass(frozen=True)
class ShLin2Element:
    """Downward-closed set of 2-sharing groups, stored as its maximals."""

    maximals: frozenset[TwoSharingGroup]
    interest: frozenset[str]

    def is_bottom(self) -> bool:
        return not self.maximals

    def __str__(self) -> str:
        gs = sorted((g for g in self.maximals if g), key=TwoSharingGroup.sort_key)
        if not gs and self.maximals:
            body = "0"
        else:
            body = ", ".join(str(g) for g in gs)
        vs = ", ".join(sorted(self.interest))
        return f"[{body}]_{{{vs}}}"

    def __repr__(self) -> str:
        return f"ShLin2Element({set(map(str, self.maximals))!r}, {set(self.interest)!r})"


def two_element(groups: Iterable[TwoSharingGroup], interest: Iterable[str]) -> ShLin2Element:
    u = frozenset(interest)
    gs = set(groups)
    for g in gs:
        if not g.support <= u:
            raise ValueError(f"group {g} not over interest set {sorted(u)}")
    if gs:
        gs.add(EMPTY2)
    return ShLin2Element(antichain_max(gs), u)


def alpha2(e: ShLinOmegaElement) -> ShLin2Element:
    """Elementwise clipping followed by maximal-antichain normalization."""
    return two_element({alpha2_group(b) for b in e.groups}, e.interest)


def gamma2_contains(e: ShLin2Element, b: Multiset) -> bool:
    """Is the exact-multiplicity group ``b`` in the concretization of ``e``?"""
    return el2_contains(e, alpha2_group(b))


def el2_contains(e: ShLin2Element, o: TwoSharingGroup) -> bool:
    return any(o.leq(m) for m in e.maximals)


def leq2(e1: ShLin2Element, e2: ShLin2Element) -> bool:
    if e1.interest != e2.interest:
        return False
    return all(el2_contains(e2, m) for m in e1.maximals)


def match2_ref(e1: ShLin2Element, e2: ShLin2Element, cap: int = 10) -> ShLin2Element:
    """Literal set-level matching; enumerates all 3^|U| candidate groups."""
    u1, u2 = e1.interest, e2.interest
    u = u1 | u2
    if len(u) > cap:
        raise TooLarge(f"{len(u)} variables exceeds the cap of {cap}")
    t1_full = down_closure(e1.maximals)
    t2_full = down_closure(e2.maximals)
    if e1.maximals:
        t1_full.add(EMPTY2)
    if e2.maximals:
        t2_full.add(EMPTY2)
    t2_pass = {o for o in t2_full if not o.support & u1}
    t2_rest = t2_full - t2_pass

    # The star set {sum of X | X subseteq T'' union squares} has at most
    # 3^|U2| members, so it is folded one generator at a time instead of
    # enumerating the subsets themselves.
    generators = sorted(t2_rest | {square(o) for o in t2_rest}, key=TwoSharingGroup.sort_key)
    star = {EMPTY2}
    for g in generators:
        star |= {oplus(s, g) for s in star}

    out = set(t2_pass)
    names = sorted(u)
    for exps in product((0, 1, INF), repeat=len(names)):
        o = two_group({v: e for v, e in zip(names, exps) if e})
        if o.restrict(u1) in t1_full and o.restrict(u2) in star:
            out.add(o)
    return two_element(out, u)


def _wedge(o: TwoSharingGroup, osum: TwoSharingGroup, u1, u2) -> TwoSharingGroup:
    exps: dict[str, float] = {}
    for v in o.support | osum.support:
        if v in u1 and v not in u2:
            e = o.exp(v)
        elif v in u1 and v in u2:
            e = min(o.exp(v), osum.exp(v))
        else:
            e = osum.exp(v)
        if e:
            exps[v] = e
    return two_group(exps)


def _linearized(o: TwoSharingGroup) -> TwoSharingGroup:
    return TwoSharingGroup(tuple((v, 1) for v, _ in o.items))


def match2_opt_generators(t1, u1, t2, u2):
    """Maximal-antichain matching, keeping one generator per produced group.

    Returns (raw groups -> provenance) where provenance is either
    ("pass", o) for second-argument groups not touching u1, or
    ("gen", o1, X, Xbar) for the group built from o1 and the chosen subset X
    (Xbar being the part of X repeated twice). Used by the optimality
    witness builders; ``match2_opt`` keeps only the groups.
    """
    u1, u2 = frozenset(u1), frozenset(u2)
    t2 = set(t2)
    t2_pass = {o for o in t2 if not o.support & u1}
    t2_rest = sorted(t2 - t2_pass, key=TwoSharingGroup.sort_key)
    out: dict[TwoSharingGroup, tuple] = {}
    for o in sorted(t2_pass, key=TwoSharingGroup.sort_key):
        out.setdefault(o, ("pass", o))
    for o1 in sorted(t1, key=TwoSharingGroup.sort_key):
        o1_u2 = o1.restrict(u2)
        tbar = [
            op
            for op in t2_rest
            if all(o1.exp(v) == INF for v in op.support & u1)
        ]
        for mask in range(1 << len(t2_rest)):
            x = [op for i, op in enumerate(t2_rest) if mask >> i & 1]
            lin = EMPTY2
            for op in x:
                lin = oplus(lin, _linearized(op))
            if not lin.restrict(u1).leq(o1_u2):
                continue
            xsum = EMPTY2
            for op in x:
                xsum = oplus(xsum, op)
            xbar = [op for op in x if op in tbar]
            extra = EMPTY2
            for op in xbar:
                extra = oplus(extra, op)
            value = oplus(_wedge(o1, xsum, u1, u2), extra)
            out.setdefault(value, ("gen", o1, tuple(x), tuple(xbar)))
    return out


def match2_opt(t1, u1, t2, u2) -> frozenset[TwoSharingGroup]:
    """The maximal groups of the matching, computed without down-closures."""
    return antichain_max(match2_opt_generators(t1, u1, t2, u2))


def match2(e1: ShLin2Element, e2: ShLin2Element) -> ShLin2Element:
    """Element-level matching via the maximal-antichain algorithm."""
    return two_element(
        match2_opt(e1.maximals, e1.interest, e2.maximals, e2.interest),
        e1.interest | e2.interest,
    )


def project2(e: ShLin2Element, variables: Iterable[str]) -> ShLin2Element:
    v = frozenset(variables)
    return two_element({g.restrict(v) for g in e.maximals}, e.interest & v)


def rename2(e: ShLin2Element, rho: Mapping[str, str]) -> ShLin2Element:
    relevant = {v: rho.get(v, v) for v in e.interest}
    if len(set(relevant.values())) != len(relevant):
        raise ValueError("renaming is not injective on the interest set")
    groups = {
        two_group({relevant[v]: x for v, x in g.items}) for g in e.maximals
    }
    return two_element(groups, set(relevant.values()))


def union2(e1: ShLin2Element, e2: ShLin2Element) -> ShLin2Element:
    if e1.interest != e2.interest:
        raise InterestMismatch(f"{sorted(e1.interest)} vs {sorted(e2.interest)}")
    return two_element(e1.maximals | e2.maximals, e1.interest)


def embed_cap2(e: ShLin2Element) -> ShLinOmegaElement:
    """Concretization with exponents capped at 2 (exact for clipping checks,
    since any multiplicity of at least 2 clips to infinity)."""
    groups = {
        Multiset({v: 1 if x == 1 else 2 for v, x in g.items})
        for g in down_closure(e.maximals)
    }
    if e.maximals:
        groups.add(EMPTY)
    return omega_element(groups, e.interest)


def prop_abstraction2_check(b: Multiset, v: Iterable[str], xs: Iterable[Multiset]) -> bool:
    """Evaluate the four clipping laws on concrete inputs (test utility):
    support preservation, commutation with restriction, commutation with
    multiset sums, and squaring."""
    vs = frozenset(v)
    xs = list(xs)
    clause1 = b.support == alpha2_group(b).support
    clause2 = alpha2_group(b.restrict(vs)) == alpha2_group(b).restrict(vs)
    total = EMPTY
    for x in xs:
        total = total + x
    lhs = alpha2_group(total)
    rhs = EMPTY2
    for x in xs:
        rhs = oplus(rhs, alpha2_group(x))
    clause3 = lhs == rhs
    clause4 = alpha2_group(b + b) == square(alpha2_group(b))
    return clause1 and clause2 and clause3 and clause4


_TWO_TOKEN = re.compile(r"([a-z][0-9]*)(?:\^(\*|inf|[0-9]+))?")


def parse_two_group(text: str) -> TwoSharingGroup:
    s = text.strip()
    if s == "0":
        return EMPTY2
    exps: dict[str, float] = {}
    pos = 0
    while pos < len(s):
        m = _TWO_TOKEN.match(s, pos)
        if not m:
            raise ValueError(f"bad 2-sharing group {text!r} at offset {pos}")
        var, exp = m.group(1), m.group(2)
        if exp in ("*", "inf"):
            e = INF
        elif exp is None or exp == "1":
            e = 1.0
        else:
            n = int(exp)
            if n == 0:
                raise ValueError(f"zero exponent in {text!r}")
            e = INF  # any written multiplicity above 1 clips
        e = 1 if e == 1.0 else e
        prev = exps.get(var)
        exps[var] = INF if prev is not None else e
        pos = m.end()
    return two_group(exps)


def parse_two(text: str) -> ShLin2Element:
    """Parse ``[x^*y, xz^*]_{x,y,z}``; the groups listed are the maximals."""
    body, names = _split_element(text)
    groups = []
    if body:
        for part in body.split(","):
            groups.append(parse_two_group(part.strip()))
    return two_element(groups, names)
