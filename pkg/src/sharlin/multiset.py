"""Finite-support multisets of variables.

A multiset maps variable names to positive occurrence counts; variables
with count zero are never stored. Display uses the polynomial notation
``x^2y`` (two occurrences of ``x``, one of ``y``), variables sorted
lexicographically, exponent 1 omitted. The empty multiset prints as ``0``.

Counts are plain Python integers, so sums are exact and never wrap.
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping

__all__ = [
    "Multiset",
    "EMPTY",
    "msum",
    "mrestrict",
    "msupport",
    "parse_group",
    "format_group",
]


class Multiset:
    """Immutable multiset of variable names with finite support."""

    __slots__ = ("_counts", "_items", "_hash")

    def __init__(self, counts: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        pairs = counts.items() if isinstance(counts, Mapping) else counts
        clean: dict[str, int] = {}
        for var, n in pairs:
            if not isinstance(n, int) or isinstance(n, bool):
                raise TypeError(f"count for {var!r} must be an int")
            if n < 0:
                raise ValueError(f"negative count for {var!r}")
            if n:
                clean[var] = clean.get(var, 0) + n
        self._counts = clean
        self._items = tuple(sorted(clean.items()))
        self._hash = hash(self._items)

    @classmethod
    def from_vars(cls, variables: Iterable[str]) -> "Multiset":
        counts: dict[str, int] = {}
        for v in variables:
            counts[v] = counts.get(v, 0) + 1
        return cls(counts)

    @classmethod
    def _from_clean(cls, counts: dict[str, int]) -> "Multiset":
        # internal fast path: counts already validated positive ints
        self = object.__new__(cls)
        self._counts = counts
        self._items = tuple(sorted(counts.items()))
        self._hash = hash(self._items)
        return self

    def count(self, var: str) -> int:
        return self._counts.get(var, 0)

    def items(self) -> tuple[tuple[str, int], ...]:
        return self._items

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self._counts)

    def mass(self) -> int:
        """Total number of occurrences, multiplicities included."""
        return sum(self._counts.values())

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __add__(self, other: "Multiset") -> "Multiset":
        if not isinstance(other, Multiset):
            return NotImplemented
        if not self._counts:
            return other
        if not other._counts:
            return self
        counts = dict(self._counts)
        for var, n in other._counts.items():
            counts[var] = counts.get(var, 0) + n
        return Multiset._from_clean(counts)

    def scale(self, k: int) -> "Multiset":
        """k-fold repetition of this multiset (k >= 0)."""
        if k < 0:
            raise ValueError("negative repetition")
        if k == 0:
            return EMPTY
        if k == 1:
            return self
        return Multiset._from_clean({v: n * k for v, n in self._counts.items()})

    def restrict(self, variables) -> "Multiset":
        keep = {v: n for v, n in self._counts.items() if v in variables}
        if len(keep) == len(self._counts):
            return self
        return Multiset._from_clean(keep)

    def leq(self, other: "Multiset") -> bool:
        """Pointwise order: every count bounded by other's count."""
        return all(n <= other.count(v) for v, n in self._counts.items())

    def sort_key(self):
        return (tuple(sorted(self._counts)), self._items)

    def __eq__(self, other) -> bool:
        return isinstance(other, Multiset) and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return format_group(self)

    def __repr__(self) -> str:
        return f"Multiset({dict(self._items)!r})"


EMPTY = Multiset()


def msum(a: Multiset, b: Multiset) -> Multiset:
    """Multiset sum: pointwise addition of counts."""
    return a + b


def mrestrict(a: Multiset, variables) -> Multiset:
    """Restriction of ``a`` to the given variables; others get count 0."""
    return a.restrict(variables)


def msupport(a: Multiset) -> frozenset[str]:
    """The set of variables with nonzero count."""
    return a.support


def format_group(a: Multiset) -> str:
    if not a:
        return "0"
    parts = []
    for var, n in a.items():
        parts.append(var if n == 1 else f"{var}^{n}")
    return "".join(parts)


# In polynomial notation variables are concatenated without separators, so a
# group variable is one lowercase letter plus optional digits (w1, z12, ...).
_GROUP_TOKEN = re.compile(r"([a-z][0-9]*)(?:\^([0-9]+))?")


def parse_group(text: str) -> Multiset:
    """Parse polynomial notation, e.g. ``x^2y``, ``uvxz^2``; ``0`` is empty."""
    s = text.strip()
    if s == "0":
        return EMPTY
    counts: dict[str, int] = {}
    pos = 0
    while pos < len(s):
        m = _GROUP_TOKEN.match(s, pos)
        if not m:
            raise ValueError(f"bad sharing group {text!r} at offset {pos}")
        var, exp = m.group(1), m.group(2)
        n = int(exp) if exp else 1
        if n == 0:
            raise ValueError(f"zero exponent for {var!r} in {text!r}")
        counts[var] = counts.get(var, 0) + n
        pos = m.end()
    return Multiset(counts)
