"""Sharing groups with exact multiplicities and their matching operator.

An element ``[S]_U`` is a finite set of variable multisets (sharing groups)
over the interest set U. A group records, for one hidden existential
variable, how many times it occurs in the binding of each interest
variable. Nonempty elements always contain the empty group, which keeps
the abstraction map surjective; the element with no groups at all is the
bottom of the order (no substitution is approximated).

Matching joins each group of the first argument with every way the second
argument's groups can sum up to it on the shared variables; groups of the
second argument that do not touch the first interest set pass through
unchanged. The search over summand multisets is bounded: every usable
summand contributes at least one occurrence on the shared variables.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .existential import ExistentialSubstitution
from .multiset import EMPTY, Multiset, parse_group
from .terms import Var

__all__ = [
    "ShLinOmegaElement",
    "InterestMismatch",
    "omega_element",
    "alpha_omega",
    "leq_omega",
    "approx_omega",
    "star_decompose",
    "match_omega",
    "project_omega",
    "rename_omega",
    "union_omega",
    "parse_omega",
]


class InterestMismatch(Exception):
    """Operation requires equal interest sets."""


@dataclass(frozen=True)
class ShLinOmegaElement:
    groups: frozenset[Multiset]
    interest: frozenset[str]

    def is_bottom(self) -> bool:
        return not self.groups

    def __str__(self) -> str:
        gs = sorted((g for g in self.groups if g), key=Multiset.sort_key)
        if not gs and self.groups:
            body = "0"  # only the empty group: success with everything ground
        else:
            body = ", ".join(str(g) for g in gs)
        vs = ", ".join(sorted(self.interest))
        return f"[{body}]_{{{vs}}}"

    def __repr__(self) -> str:
        return f"ShLinOmegaElement({set(map(str, self.groups))!r}, {set(self.interest)!r})"


def omega_element(groups: Iterable[Multiset], interest: Iterable[str]) -> ShLinOmegaElement:
    """Build an element, inserting the empty group into nonempty ones."""
    u = frozenset(interest)
    gs = set(groups)
    for g in gs:
        if not g.support <= u:
            raise ValueError(f"group {g} not over interest set {sorted(u)}")
    if gs:
        gs.add(EMPTY)
    return ShLinOmegaElement(frozenset(gs), u)


def alpha_omega(c: ExistentialSubstitution) -> ShLinOmegaElement:
    """Best abstraction of a substitution class: all its restricted pre-images.

    Only variables occurring in the representative or in the interest set can
    yield a nonempty group; any other variable contributes the empty group,
    which the element carries anyway. Occurrence counts for all variables
    are collected in one pass over the bindings.
    """
    u = c.interest
    rep = c.rep
    dom = rep.domain
    per_var: dict[str, dict[str, int]] = {}
    for w, t in rep.bindings():
        if w not in u:
            continue
        stack = [t]
        while stack:
            cur = stack.pop()
            if isinstance(cur, Var):
                got = per_var.setdefault(cur.name, {})
                got[w] = got.get(w, 0) + 1
            else:
                stack.extend(cur.args)
    for v in u - dom:
        got = per_var.setdefault(v, {})
        got[v] = got.get(v, 0) + 1
    groups = {Multiset._from_clean(counts) for counts in per_var.values()}
    groups.add(EMPTY)
    return ShLinOmegaElement(frozenset(groups), u)


def leq_omega(e1: ShLinOmegaElement, e2: ShLinOmegaElement) -> bool:
    return e1.interest == e2.interest and e1.groups <= e2.groups


def approx_omega(e: ShLinOmegaElement, c: ExistentialSubstitution) -> bool:
    """Does ``e`` correctly approximate the substitution class ``c``?"""
    return leq_omega(alpha_omega(c), e)


def _max_count(remaining: Mapping[str, int], g: Multiset) -> int:
    return min(remaining.get(v, 0) // n for v, n in g.items())


def star_decompose(
    x: Multiset, s: Iterable[Multiset], u1=None
) -> tuple[bool, tuple[tuple[Multiset, int], ...] | None]:
    """Is ``x`` a finite sum of groups from ``s``? Returns (answer, witness).

    The witness lists (group, repetition) pairs summing to ``x``. Empty
    groups add nothing and are ignored; each remaining candidate has
    nonempty support, so repetition counts are bounded by ``x`` itself
    (callers typically guarantee a nonempty restriction on ``u1``, which is
    what makes the search small in practice).
    """
    groups = sorted({g for g in s if g}, key=Multiset.sort_key)
    witness: list[tuple[Multiset, int]] = []

    def rec(i: int, remaining: dict[str, int]) -> bool:
        if not remaining:
            return True
        if i == len(groups):
            return False
        g = groups[i]
        top = _max_count(remaining, g)
        for k in range(top, -1, -1):
            if k:
                rest = dict(remaining)
                for v, n in g.items():
                    m = rest[v] - n * k
                    if m:
                        rest[v] = m
                    else:
                        del rest[v]
            else:
                rest = remaining
            if rec(i + 1, rest):
                if k:
                    witness.append((g, k))
                return True
        return False

    ok = rec(0, {v: n for v, n in x.items()})
    return (True, tuple(reversed(witness))) if ok else (False, None)


def _decomposition_tails(
    target: Multiset, groups: list[Multiset], common: frozenset[str]
) -> set[Multiset]:
    """All values of (sum of chosen groups) outside ``common``, over multisets
    of ``groups`` whose restriction to ``common`` sums exactly to ``target``.

    Every group has a nonempty ``common`` restriction, so choices are bounded
    by the target's total mass.
    """
    tails: set[Multiset] = set()

    def rec(i: int, remaining: dict[str, int], acc: Multiset) -> None:
        if i == len(groups):
            if not remaining:
                tails.add(acc)
            return
        g = groups[i]
        g_common = g.restrict(common)
        g_out = g.restrict(g.support - common)
        top = _max_count(remaining, g_common)
        for k in range(top + 1):
            if k:
                rest = dict(remaining)
                ok = True
                for v, n in g_common.items():
                    m = rest.get(v, 0) - n * k
                    if m < 0:
                        ok = False
                        break
                    if m:
                        rest[v] = m
                    else:
                        rest.pop(v, None)
                if not ok:
                    continue
                rec(i + 1, rest, acc + g_out.scale(k))
            else:
                rec(i + 1, remaining, acc)

    rec(0, {v: n for v, n in target.items()}, EMPTY)
    return tails


def match_omega(e1: ShLinOmegaElement, e2: ShLinOmegaElement) -> ShLinOmegaElement:
    """Abstract matching: exact enumeration of the joinable group sums."""
    u1, u2 = e1.interest, e2.interest
    u = u1 | u2
    common = u1 & u2
    pass_through = {b for b in e2.groups if not (b.support & u1)}
    rest = sorted((b for b in e2.groups if b.support & u1), key=Multiset.sort_key)

    out = set(pass_through)
    for b in e1.groups:
        target = b.restrict(common)
        for tail in _decomposition_tails(target, rest, common):
            out.add(b + tail)
    return omega_element(out, u)


def project_omega(e: ShLinOmegaElement, variables: Iterable[str]) -> ShLinOmegaElement:
    v = frozenset(variables)
    return omega_element({g.restrict(v) for g in e.groups}, e.interest & v)


def rename_omega(e: ShLinOmegaElement, rho: Mapping[str, str]) -> ShLinOmegaElement:
    """Apply an injective variable renaming to groups and interest set."""
    relevant = {v: rho.get(v, v) for v in e.interest}
    if len(set(relevant.values())) != len(relevant):
        raise ValueError("renaming is not injective on the interest set")
    groups = {
        Multiset({relevant[v]: n for v, n in g.items()}) for g in e.groups
    }
    return omega_element(groups, set(relevant.values()))


def union_omega(e1: ShLinOmegaElement, e2: ShLinOmegaElement) -> ShLinOmegaElement:
    if e1.interest != e2.interest:
        raise InterestMismatch(
            f"{sorted(e1.interest)} vs {sorted(e2.interest)}"
        )
    return omega_element(e1.groups | e2.groups, e1.interest)


def _split_element(text: str) -> tuple[str, list[str]]:
    s = text.strip()
    if not s.startswith("["):
        raise ValueError(f"bad element {text!r}")
    close = s.rindex("]")
    body = s[1:close].strip()
    suffix = s[close + 1 :].strip()
    if not (suffix.startswith("_{") and suffix.endswith("}")):
        raise ValueError(f"missing interest set in {text!r}")
    inner = suffix[2:-1].strip()
    names = [n.strip() for n in inner.split(",")] if inner else []
    return body, names


def parse_omega(text: str) -> ShLinOmegaElement:
    """Parse ``[x^2, xz]_{x,y,z}``; ``[]_{...}`` is bottom, ``[0]_{...}`` the
    element with only the empty group."""
    body, names = _split_element(text)
    groups = []
    if body:
        for part in body.split(","):
            groups.append(parse_group(part.strip()))
    return omega_element(groups, names)
