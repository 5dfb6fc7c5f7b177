"""First-order terms, idempotent substitutions and syntactic unification.

Lexical convention (the one syntax used everywhere): a variable is a token
matching ``[u-z][a-z0-9_]*`` and any other identifier is a function symbol;
``a`` and ``f`` are symbols while ``x`` and ``w1`` are variables. Reserved
variables ``_1, _2, ...`` are produced by canonicalization and are accepted
back by the parser, but cannot be written as variables of interest.

List sugar ``[]``, ``[h|t]`` and ``[a,b]`` (cons symbol ``.``) is accepted
and printed back sugared, so analyzer-level substitutions round-trip.

Unification is Martelli-Montanari style equation rewriting with an eager
occur check and yields an idempotent most general unifier.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .multiset import Multiset

__all__ = [
    "Term",
    "Var",
    "App",
    "Substitution",
    "EPSILON",
    "UnificationError",
    "Clash",
    "OccurCheck",
    "occ",
    "term_vars",
    "is_linear_term",
    "mgu_terms",
    "preimage_var",
    "preimage_group",
    "parse_term",
    "parse_substitution",
    "format_term",
    "is_variable_name",
    "CONS",
    "NIL",
]

CONS = "."
NIL = "[]"

_VAR_NAME = re.compile(r"(?:[u-z][a-z0-9_]*|_[0-9]+)\Z")


def is_variable_name(name: str) -> bool:
    return bool(_VAR_NAME.match(name))


@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class App(Term):
    symbol: str
    args: tuple[Term, ...] = ()


class UnificationError(Exception):
    """Base class for unification failures."""


class Clash(UnificationError):
    """Distinct symbols or arities."""


class OccurCheck(UnificationError):
    """A variable occurs in the term it should be bound to."""


def term_vars(t: Term, acc: set[str] | None = None) -> set[str]:
    out = set() if acc is None else acc
    stack = [t]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Var):
            out.add(cur.name)
        else:
            stack.extend(cur.args)
    return out


def occ(v: str, t: Term) -> int:
    """Number of occurrences of variable ``v`` in ``t``."""
    n = 0
    stack = [t]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Var):
            if cur.name == v:
                n += 1
        else:
            stack.extend(cur.args)
    return n


def is_linear_term(t: Term) -> bool:
    """True when no variable occurs twice in ``t``."""
    seen: set[str] = set()
    stack = [t]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Var):
            if cur.name in seen:
                return False
            seen.add(cur.name)
        else:
            stack.extend(cur.args)
    return True


class Substitution:
    """Immutable map from variables to terms; unbound variables map to themselves."""

    __slots__ = ("_bind", "_items")

    def __init__(self, bindings: Mapping[str, Term] | Iterable[tuple[str, Term]] = ()):
        pairs = bindings.items() if isinstance(bindings, Mapping) else bindings
        clean: dict[str, Term] = {}
        for var, term in pairs:
            if isinstance(term, Var) and term.name == var:
                continue
            clean[var] = term
        self._bind = clean
        self._items = tuple(sorted(clean.items(), key=lambda p: p[0]))

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self._bind)

    def bindings(self) -> tuple[tuple[str, Term], ...]:
        return self._items

    def lookup(self, var: str) -> Term:
        t = self._bind.get(var)
        return t if t is not None else Var(var)

    def range_vars(self) -> set[str]:
        out: set[str] = set()
        for _, t in self._items:
            term_vars(t, out)
        return out

    def all_vars(self) -> set[str]:
        return set(self._bind) | self.range_vars()

    def is_idempotent(self) -> bool:
        return not (set(self._bind) & self.range_vars())

    def apply(self, t: Term) -> Term:
        if not self._bind:
            return t
        if isinstance(t, Var):
            bound = self._bind.get(t.name)
            return bound if bound is not None else t
        if not t.args:
            return t
        return App(t.symbol, tuple(self.apply(arg) for arg in t.args))

    def apply_fix(self, t: Term) -> Term:
        """Apply repeatedly until stable; rejects cyclic binding chains."""
        for _ in range(len(self._bind) + 1):
            nxt = self.apply(t)
            if nxt == t:
                return t
            t = nxt
        raise ValueError("substitution has cyclic bindings")

    def compose(self, eta: "Substitution") -> "Substitution":
        """The substitution mapping x to eta(self(x)): self first, then eta."""
        out: dict[str, Term] = {}
        for var, term in self._items:
            out[var] = eta.apply(term)
        for var, term in eta.bindings():
            if var not in self._bind:
                out[var] = term
        return Substitution(out)

    def restrict(self, variables) -> "Substitution":
        return Substitution({v: t for v, t in self._bind.items() if v in variables})

    def rename_vars(self, mapping: Mapping[str, str]) -> "Substitution":
        """Consistently rename variables in both domain and range."""
        rho = Substitution({v: Var(n) for v, n in mapping.items()})
        return Substitution(
            {mapping.get(v, v): rho.apply(t) for v, t in self._bind.items()}
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __len__(self) -> int:
        return len(self._bind)

    def __str__(self) -> str:
        inner = ", ".join(f"{v}/{format_term(t)}" for v, t in self._items)
        return "{" + inner + "}"

    def __repr__(self) -> str:
        return f"Substitution({dict(self._items)!r})"


EPSILON = Substitution()


def mgu_terms(equations: Iterable[tuple[Term, Term]]) -> Substitution:
    """Most general idempotent unifier of the equations, or raise.

    Variable-variable equations bind the left-hand variable, so callers
    control the orientation through equation order.
    """
    subst: dict[str, Term] = {}

    def chase(t: Term) -> Term:
        while isinstance(t, Var) and t.name in subst:
            t = subst[t.name]
        return t

    def resolve(t: Term) -> Term:
        t = chase(t)
        if isinstance(t, Var):
            return t
        if not t.args:
            return t
        return App(t.symbol, tuple(resolve(a) for a in t.args))

    def occurs(v: str, t: Term) -> bool:
        stack = [t]
        while stack:
            cur = chase(stack.pop())
            if isinstance(cur, Var):
                if cur.name == v:
                    return True
            else:
                stack.extend(cur.args)
        return False

    work = list(equations)
    idx = 0
    while idx < len(work):
        left, right = work[idx]
        idx += 1
        left, right = chase(left), chase(right)
        if left == right:
            continue
        if isinstance(left, Var):
            if occurs(left.name, right):
                raise OccurCheck(f"{left.name} occurs in {format_term(resolve(right))}")
            subst[left.name] = right
        elif isinstance(right, Var):
            if occurs(right.name, left):
                raise OccurCheck(f"{right.name} occurs in {format_term(resolve(left))}")
            subst[right.name] = left
        else:
            if left.symbol != right.symbol or len(left.args) != len(right.args):
                raise Clash(
                    f"{left.symbol}/{len(left.args)} vs {right.symbol}/{len(right.args)}"
                )
            work.extend(zip(left.args, right.args))
    return Substitution({v: resolve(t) for v, t in subst.items()})


def preimage_var(theta: Substitution, v: str) -> Multiset:
    """The sharing group of ``v``: how often ``v`` occurs in each binding.

    Unbound variables count as bound to themselves, so the pre-image of an
    untouched variable is its own singleton group.
    """
    counts: dict[str, int] = {}
    for w, t in theta.bindings():
        n = occ(v, t)
        if n:
            counts[w] = n
    if v not in theta.domain:
        counts[v] = counts.get(v, 0) + 1
    return Multiset(counts)


def preimage_group(theta: Substitution, b: Multiset) -> Multiset:
    """Pre-image of a whole group: per-variable pre-images summed with multiplicity."""
    out = Multiset()
    for v, n in b.items():
        out = out + preimage_var(theta, v).scale(n)
    return out


# --- term and substitution syntax -------------------------------------------

_TOKEN = re.compile(r"\s*([A-Za-z0-9_']+|\[\]|[()\[\],|/{}])")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str | None:
        m = _TOKEN.match(self.text, self.pos)
        return m.group(1) if m else None

    def next(self) -> str:
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            raise ValueError(f"unexpected input at offset {self.pos} in {self.text!r}")
        self.pos = m.end()
        return m.group(1)

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise ValueError(f"expected {tok!r}, got {got!r} in {self.text!r}")

    def done(self) -> bool:
        return not self.peek() and not self.text[self.pos :].strip()


def _parse_term(sc: _Scanner) -> Term:
    tok = sc.next()
    if tok == "[":
        return _parse_list(sc)
    if tok == "[]":
        return App(NIL)
    if tok in "(),|/{}":
        raise ValueError(f"unexpected {tok!r} in {sc.text!r}")
    if sc.peek() == "(":
        sc.expect("(")
        args = [_parse_term(sc)]
        while sc.peek() == ",":
            sc.expect(",")
            args.append(_parse_term(sc))
        sc.expect(")")
        return App(tok, tuple(args))
    if is_variable_name(tok):
        return Var(tok)
    return App(tok)


def _parse_list(sc: _Scanner) -> Term:
    if sc.peek() == "]":
        sc.expect("]")
        return App(NIL)
    items = [_parse_term(sc)]
    while sc.peek() == ",":
        sc.expect(",")
        items.append(_parse_term(sc))
    tail: Term = App(NIL)
    if sc.peek() == "|":
        sc.expect("|")
        tail = _parse_term(sc)
    sc.expect("]")
    for item in reversed(items):
        tail = App(CONS, (item, tail))
    return tail


def parse_term(text: str) -> Term:
    sc = _Scanner(text)
    t = _parse_term(sc)
    if not sc.done():
        raise ValueError(f"trailing input in term {text!r}")
    return t


def parse_substitution(text: str) -> Substitution:
    """Parse ``{x/a, y/f(z)}``; ``{}`` is the empty substitution."""
    sc = _Scanner(text)
    sc.expect("{")
    bindings: dict[str, Term] = {}
    if sc.peek() != "}":
        while True:
            var = sc.next()
            if not is_variable_name(var):
                raise ValueError(f"{var!r} is not a variable")
            sc.expect("/")
            if var in bindings:
                raise ValueError(f"duplicate binding for {var!r}")
            bindings[var] = _parse_term(sc)
            if sc.peek() != ",":
                break
            sc.expect(",")
    sc.expect("}")
    if not sc.done():
        raise ValueError(f"trailing input in substitution {text!r}")
    return Substitution(bindings)


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if t.symbol == NIL and not t.args:
        return "[]"
    if t.symbol == CONS and len(t.args) == 2:
        items = []
        cur: Term = t
        while isinstance(cur, App) and cur.symbol == CONS and len(cur.args) == 2:
            items.append(format_term(cur.args[0]))
            cur = cur.args[1]
        if isinstance(cur, App) and cur.symbol == NIL and not cur.args:
            return "[" + ", ".join(items) + "]"
        return "[" + ", ".join(items) + "|" + format_term(cur) + "]"
    if not t.args:
        return t.symbol
    return t.symbol + "(" + ", ".join(format_term(a) for a in t.args) + ")"
