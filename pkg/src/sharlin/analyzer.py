"""Goal-dependent analyzer for a mini logic language.

Clause processing follows the classic four-state pipeline: the call
substitution is unified forward with the head bindings to give the entry
substitution, the body runs under the entry, and the resulting exit
substitution is propagated back to the caller as the answer. Backward
propagation is the point of the exercise and comes in two modes:

* ``matching``: match the exit against the pre-projection element of the
  forward step and project onto the goal variables;
* ``mgu``: re-unify call, exit and the concrete head bindings from scratch
  (collect the groups of the disjoint elements, then fold the abstract
  binding rule), for precision comparison.

The forward step folds ``baseline_amgu``, a deliberately plain, sound
binding-at-a-time rule: it is not a best transformer and is not meant to
be one. When a variable and a linear term with linear, pairwise
independent variables are unified, relevant groups are joined pairwise;
otherwise all subsets of the relevant groups (and their doubled copies)
are summed. A binding to a ground term removes the variable's groups.
Trace injection can replace forward results of the root goal's clauses
with externally supplied elements, so backward precision can be studied
independently of forward precision.

The fixpoint engine tabulates answers per (predicate, call pattern) with
call patterns normalized up to variable renaming, and iterates whole-goal
evaluation until the table is stable. Exact-multiplicity analyses clip
multiplicities at a configurable cap during analysis only; the library
operators stay exact.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping

from .multiset import Multiset
from .shlin_omega import (
    ShLinOmegaElement,
    match_omega,
    omega_element,
    parse_omega,
    project_omega,
    rename_omega,
    union_omega,
)
from .shlin2 import (
    EMPTY2,
    ShLin2Element,
    match2,
    oplus,
    parse_two,
    project2,
    rename2,
    square,
    two_element,
    two_group,
    union2,
)
from .shlin_sl import (
    alpha_sl,
    gamma_sl,
    match_sl,
    parse_sl,
    project_sl,
    rename_sl,
    sl_element,
    union_sl,
)
from .terms import (
    App,
    CONS,
    NIL,
    Substitution,
    Term,
    UnificationError,
    Var,
    format_term,
    is_linear_term,
    is_variable_name,
    mgu_terms,
    term_vars,
)

__all__ = [
    "Atom",
    "Clause",
    "Program",
    "AnalysisRequest",
    "AnalysisResult",
    "TraceStep",
    "ParseError",
    "PredicateMismatch",
    "FixpointLimitExceeded",
    "parse_program",
    "parse_goal",
    "parse_injection",
    "baseline_amgu",
    "forward_unify",
    "backward_unify",
    "analyze",
    "DOMAINS",
    "DomainOps",
]


class ParseError(SyntaxError):
    """Program syntax error with line and column attached."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.lineno = line
        self.offset = column


class PredicateMismatch(Exception):
    """Goal and head disagree on predicate name or arity."""


class FixpointLimitExceeded(Exception):
    """The tabulation did not stabilize within the configured pass limit."""


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...]

    @property
    def variables(self) -> frozenset[str]:
        out: set[str] = set()
        for t in self.args:
            term_vars(t, out)
        return frozenset(out)

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return self.pred + "(" + ", ".join(format_term(a) for a in self.args) + ")"


@dataclass(frozen=True)
class Clause:
    head: Atom
    body: tuple[Atom, ...] = ()

    @property
    def variables(self) -> frozenset[str]:
        out = set(self.head.variables)
        for a in self.body:
            out |= a.variables
        return frozenset(out)

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- " + ", ".join(map(str, self.body)) + "."


@dataclass(frozen=True)
class Program:
    clauses: tuple[Clause, ...]

    def matching(self, pred: str, arity: int) -> list[tuple[int, Clause]]:
        return [
            (i, c)
            for i, c in enumerate(self.clauses)
            if c.head.pred == pred and len(c.head.args) == arity
        ]

    def __str__(self) -> str:
        return "\n".join(map(str, self.clauses))


# --- program syntax ----------------------------------------------------------

_PROGRAM_TOKEN = re.compile(r"(:-|[A-Za-z0-9_']+|\[\]|[()\[\],|.])")


class _ProgramScanner:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, int, int]] = []
        line, col = 1, 1
        pos = 0
        while pos < len(text):
            ch = text[pos]
            if ch == "\n":
                line += 1
                col = 1
                pos += 1
                continue
            if ch.isspace():
                col += 1
                pos += 1
                continue
            if ch == "%":
                while pos < len(text) and text[pos] != "\n":
                    pos += 1
                continue
            m = _PROGRAM_TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {ch!r}", line, col)
            self.tokens.append((m.group(1), line, col))
            col += m.end() - pos
            pos = m.end()
        self.idx = 0

    def peek(self) -> str | None:
        return self.tokens[self.idx][0] if self.idx < len(self.tokens) else None

    def next(self) -> tuple[str, int, int]:
        if self.idx >= len(self.tokens):
            last = self.tokens[-1] if self.tokens else ("", 1, 1)
            raise ParseError("unexpected end of input", last[1], last[2])
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect(self, want: str) -> None:
        tok, line, col = self.next()
        if tok != want:
            raise ParseError(f"expected {want!r}, got {tok!r}", line, col)


def _parse_pterm(sc: _ProgramScanner) -> Term:
    tok, line, col = sc.next()
    if tok == "[":
        return _parse_plist(sc)
    if tok == "[]":
        return App(NIL)
    if not tok[0].isalnum() and tok[0] not in "_'":
        raise ParseError(f"unexpected {tok!r}", line, col)
    if sc.peek() == "(":
        sc.expect("(")
        args = [_parse_pterm(sc)]
        while sc.peek() == ",":
            sc.expect(",")
            args.append(_parse_pterm(sc))
        sc.expect(")")
        return App(tok, tuple(args))
    return Var(tok) if is_variable_name(tok) else App(tok)


def _parse_plist(sc: _ProgramScanner) -> Term:
    if sc.peek() == "]":
        sc.expect("]")
        return App(NIL)
    items = [_parse_pterm(sc)]
    while sc.peek() == ",":
        sc.expect(",")
        items.append(_parse_pterm(sc))
    tail: Term = App(NIL)
    if sc.peek() == "|":
        sc.expect("|")
        tail = _parse_pterm(sc)
    sc.expect("]")
    for item in reversed(items):
        tail = App(CONS, (item, tail))
    return tail


def _parse_atom(sc: _ProgramScanner) -> Atom:
    tok, line, col = sc.next()
    if not tok[0].isalpha():
        raise ParseError(f"expected a predicate name, got {tok!r}", line, col)
    args: list[Term] = []
    if sc.peek() == "(":
        sc.expect("(")
        args.append(_parse_pterm(sc))
        while sc.peek() == ",":
            sc.expect(",")
            args.append(_parse_pterm(sc))
        sc.expect(")")
    return Atom(tok, tuple(args))


def parse_program(text: str) -> Program:
    """Parse facts ``p(t1,...,tn).`` and rules ``p(...) :- q(...), r(...).``"""
    sc = _ProgramScanner(text)
    clauses = []
    while sc.peek() is not None:
        head = _parse_atom(sc)
        body: list[Atom] = []
        if sc.peek() == ":-":
            sc.expect(":-")
            body.append(_parse_atom(sc))
            while sc.peek() == ",":
                sc.expect(",")
                body.append(_parse_atom(sc))
        sc.expect(".")
        clauses.append(Clause(head, tuple(body)))
    return Program(tuple(clauses))


def parse_goal(text: str) -> Atom:
    """Parse a single goal atom, with or without the final period."""
    sc = _ProgramScanner(text)
    atom = _parse_atom(sc)
    if sc.peek() == ".":
        sc.expect(".")
    if sc.peek() is not None:
        tok, line, col = sc.next()
        raise ParseError(f"trailing input {tok!r} after goal", line, col)
    return atom


# --- domain adapters ---------------------------------------------------------


class DomainOps:
    """Uniform view of one abstract domain for the analyzer."""

    name: str

    def parse(self, text: str):
        raise NotImplementedError

    def bottom(self, interest):
        raise NotImplementedError

    def is_bottom(self, e) -> bool:
        return e.is_bottom()

    def interest(self, e) -> frozenset[str]:
        return e.interest

    def extend(self, e, new_vars):
        raise NotImplementedError

    def project(self, e, variables):
        raise NotImplementedError

    def union(self, e1, e2):
        raise NotImplementedError

    def rename(self, e, rho):
        raise NotImplementedError

    def join_disjoint(self, e1, e2):
        """Union of groups over disjoint interest sets (independent variables)."""
        raise NotImplementedError

    def match(self, exit_elem, full_elem):
        raise NotImplementedError

    def amgu(self, e, var, term, cap):
        raise NotImplementedError

    def clip(self, e, cap):
        """Saturate multiplicities at the analysis cap (identity except for
        the exact-multiplicity domain, whose library operators are exact)."""
        return e

    def groups_of(self, e) -> set[str]:
        """Canonical textual group set, for precision diffs."""
        raise NotImplementedError


def _relevance(groups, var_has, term_has):
    rx = {g for g in groups if var_has(g)}
    rt = {g for g in groups if term_has(g)}
    rest = {g for g in groups if g not in rx and g not in rt}
    return rx, rt, rest


class _OmegaOps(DomainOps):
    name = "omega"
    parse = staticmethod(parse_omega)

    def bottom(self, interest):
        return ShLinOmegaElement(frozenset(), frozenset(interest))

    def extend(self, e, new_vars):
        groups = set(e.groups) | {Multiset({v: 1}) for v in new_vars}
        return omega_element(groups, e.interest | frozenset(new_vars))

    def project(self, e, variables):
        return project_omega(e, variables)

    def union(self, e1, e2):
        return union_omega(e1, e2)

    def rename(self, e, rho):
        return rename_omega(e, rho)

    def join_disjoint(self, e1, e2):
        return omega_element(e1.groups | e2.groups, e1.interest | e2.interest)

    def match(self, exit_elem, full_elem):
        return match_omega(exit_elem, full_elem)

    def amgu(self, e, var, term, cap):
        tvars = frozenset(term_vars(term))
        rx, rt, rest = _relevance(
            e.groups,
            lambda g: g.count(var) > 0,
            lambda g: bool(g.support & tvars),
        )
        if not tvars:
            return omega_element(rest | rt, e.interest)
        linear = (
            var not in tvars
            and all(g.count(var) <= 1 for g in e.groups)
            and is_linear_term(term)
            and all(all(g.count(v) <= 1 for g in e.groups) for v in tvars)
            and not any(len(g.support & tvars) > 1 for g in e.groups)
        )
        if linear:
            # a group on both sides can also survive unchanged: the same
            # existential variable may align with itself
            joins = {gx + gt for gx in rx for gt in rt} | (rx & rt)
        else:
            # repeated copies up to the largest multiplicity present cover
            # every inheritance scale a unifier can produce
            top = max((n for g in rx | rt for _, n in g.items()), default=1)
            clip = None
            if cap:
                top = min(top, cap)
                clip = lambda g: Multiset({v: min(n, cap) for v, n in g.items()})
            joins = _star_joins(
                rx,
                rt,
                lambda a, b: a + b,
                [(lambda k: (lambda a: a.scale(k)))(k) for k in range(2, max(top, 2) + 1)],
                Multiset(),
                clip,
            )
        if cap:
            joins = {Multiset({v: min(n, cap) for v, n in g.items()}) for g in joins}
        return omega_element(rest | joins, e.interest)

    def clip(self, e, cap):
        if not cap:
            return e
        return omega_element(
            {Multiset({v: min(n, cap) for v, n in g.items()}) for g in e.groups},
            e.interest,
        )

    def groups_of(self, e):
        return {str(g) for g in e.groups if g}


def _star_joins(rx, rt, add, multiples, zero, clip=None):
    """Sums of subsets of the relevant groups and their repeated copies,
    requiring at least one group from each side (a shared group covers both).

    Computed as an incremental closure over distinct (sum, side-hits)
    states rather than by enumerating subsets; when multiplicities are
    clipped, clipping inside the fold is exact and keeps the state space
    finite.
    """
    rx, rt = set(rx), set(rt)
    items = sorted(rx | rt, key=lambda g: g.sort_key())
    gens = [(g, g in rx, g in rt) for g in items]
    seen = set(items)
    for g in items:
        for scale in multiples:
            d = scale(g)
            if d not in seen:
                gens.append((d, g in rx, g in rt))
                seen.add(d)
    states = {(zero, False, False)}
    for g, isx, ist in gens:
        nxt = set()
        for value, hx, ht in states:
            total = add(value, g)
            if clip is not None:
                total = clip(total)
            nxt.add((total, hx or isx, ht or ist))
        states |= nxt
    return {value for value, hx, ht in states if hx and ht}


class _TwoOps(DomainOps):
    name = "two"
    parse = staticmethod(parse_two)

    def bottom(self, interest):
        return ShLin2Element(frozenset(), frozenset(interest))

    def extend(self, e, new_vars):
        groups = set(e.maximals) | {two_group({v: 1}) for v in new_vars}
        return two_element(groups, e.interest | frozenset(new_vars))

    def project(self, e, variables):
        return project2(e, variables)

    def union(self, e1, e2):
        return union2(e1, e2)

    def rename(self, e, rho):
        return rename2(e, rho)

    def join_disjoint(self, e1, e2):
        return two_element(e1.maximals | e2.maximals, e1.interest | e2.interest)

    def match(self, exit_elem, full_elem):
        return match2(exit_elem, full_elem)

    def amgu(self, e, var, term, cap):
        tvars = frozenset(term_vars(term))
        rx, rt, rest = _relevance(
            e.maximals,
            lambda g: g.exp(var) > 0,
            lambda g: bool(g.support & tvars),
        )
        if not tvars:
            return two_element(rest | rt, e.interest)
        linear = (
            var not in tvars
            and all(g.exp(var) <= 1 for g in e.maximals)
            and is_linear_term(term)
            and all(all(g.exp(v) <= 1 for g in e.maximals) for v in tvars)
            and not any(len(g.support & tvars) > 1 for g in e.maximals)
        )
        if linear:
            joins = {oplus(gx, gt) for gx in rx for gt in rt} | (rx & rt)
        else:
            # exponents saturate, so doubled copies cover every repetition
            joins = _star_joins(rx, rt, oplus, [square], EMPTY2)
        return two_element(rest | joins, e.interest)

    def groups_of(self, e):
        return {str(g) for g in e.maximals if g}


class _SlOps(DomainOps):
    name = "sl"
    parse = staticmethod(parse_sl)

    def bottom(self, interest):
        u = frozenset(interest)
        return sl_element((), u, u)

    def extend(self, e, new_vars):
        new = frozenset(new_vars)
        return sl_element(
            set(e.sharing) | {frozenset({v}) for v in new},
            e.linear | new,
            e.interest | new,
        )

    def project(self, e, variables):
        return project_sl(e, variables)

    def union(self, e1, e2):
        return union_sl(e1, e2)

    def rename(self, e, rho):
        return rename_sl(e, rho)

    def join_disjoint(self, e1, e2):
        return sl_element(
            e1.sharing | e2.sharing,
            e1.linear | e2.linear,
            e1.interest | e2.interest,
        )

    def match(self, exit_elem, full_elem):
        return match_sl(exit_elem, full_elem)

    def amgu(self, e, var, term, cap):
        # route through the clipped domain: embed, run its rule, forget
        two = gamma_sl(e)
        out = _TWO_OPS.amgu(two, var, term, cap)
        return alpha_sl(out)

    def groups_of(self, e):
        return {"".join(sorted(g)) for g in e.sharing if g}


_OMEGA_OPS = _OmegaOps()
_TWO_OPS = _TwoOps()
_SL_OPS = _SlOps()

DOMAINS: Mapping[str, DomainOps] = {
    "omega": _OMEGA_OPS,
    "two": _TWO_OPS,
    "sl": _SL_OPS,
}


def baseline_amgu(e, var: str, term: Term, domain: str, cap: int | None = None):
    """Sound binding-at-a-time abstract unification (not a best transformer)."""
    ops = DOMAINS[domain]
    if var not in ops.interest(e) or not term_vars(term) <= ops.interest(e):
        raise ValueError("binding mentions variables outside the interest set")
    return ops.amgu(e, var, term, cap)


# --- clause pipeline ---------------------------------------------------------


def forward_unify(call, goal: Atom, head: Atom, domain: str, cap: int | None = None,
                  clause_vars: frozenset[str] | None = None):
    """Parameter passing: returns (full element, entry element, head bindings).

    Equations are oriented head side first, so variable-variable pairs bind
    the clause variable to the goal term. A unification failure yields
    bottom elements and no bindings.
    """
    ops = DOMAINS[domain]
    if goal.pred != head.pred or len(goal.args) != len(head.args):
        raise PredicateMismatch(f"{goal} vs {head}")
    cvars = head.variables if clause_vars is None else clause_vars
    try:
        theta = mgu_terms(list(zip(head.args, goal.args)))
    except UnificationError:
        return ops.bottom(ops.interest(call) | cvars), ops.bottom(cvars), None
    full = ops.extend(call, cvars - ops.interest(call))
    for v, t in theta.bindings():
        full = ops.amgu(full, v, t, cap)
    return full, ops.project(full, cvars), theta


def backward_unify(call, exit_elem, full, theta: Substitution | None, mode: str,
                   domain: str, goal_vars, cap: int | None = None):
    """Answer propagation for one clause; mode selects matching or re-unification."""
    ops = DOMAINS[domain]
    gv = frozenset(goal_vars)
    if ops.is_bottom(exit_elem) or theta is None:
        return ops.bottom(gv)
    if mode == "matching":
        return ops.project(ops.clip(ops.match(exit_elem, full), cap), gv)
    if mode != "mgu":
        raise ValueError(f"unknown backward mode {mode!r}")
    combined = ops.join_disjoint(call, exit_elem)
    for v, t in theta.bindings():
        combined = ops.amgu(combined, v, t, cap)
    return ops.project(combined, gv)


# --- analysis requests -------------------------------------------------------


@dataclass(frozen=True)
class AnalysisRequest:
    program: Program
    goal: Atom
    call: object
    domain: str
    mode: str = "matching"
    cap: int = 3
    max_passes: int = 64
    injection: Mapping[tuple[int, int], object] | None = None


@dataclass(frozen=True)
class TraceStep:
    depth: int
    clause_index: int
    goal: str
    call: str
    full: str
    entry: str
    exit: str
    answer: str


@dataclass
class AnalysisResult:
    answer: object
    trace: tuple[TraceStep, ...]
    passes: int
    table_size: int


def parse_injection(text: str, domain: str) -> dict[tuple[int, int], object]:
    """Injection file: one ``<clause-index> <step-index> <element>`` per line.

    Step 0 is the full pre-projection element of the forward step, step 1
    the entry element; comments start with ``#``. Elements use the clause's
    source variable names.
    """
    ops = DOMAINS[domain]
    out: dict[tuple[int, int], object] = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 2)
        if len(parts) != 3:
            raise ValueError(f"bad injection entry on line {ln}: {raw!r}")
        clause_idx, step_idx, elem = int(parts[0]), int(parts[1]), parts[2]
        if step_idx not in (0, 1):
            raise ValueError(f"step index must be 0 or 1 on line {ln}")
        out[(clause_idx, step_idx)] = ops.parse(elem)
    return out


class _Engine:
    def __init__(self, req: AnalysisRequest):
        self.req = req
        self.ops = DOMAINS[req.domain]
        self.memo: dict = {}
        self.trace: list[TraceStep] = []
        self.counter = itertools.count(1)
        self.changed = False
        taken = set()
        for c in req.program.clauses:
            taken |= c.variables
        self.reserved = frozenset(taken | req.goal.variables)

    # call patterns are memoized up to variable renaming: atom and element
    # variables are renamed positionally
    def _key(self, atom: Atom, call):
        order: list[str] = []
        seen: set[str] = set()

        def walk(t: Term):
            if isinstance(t, Var):
                if t.name not in seen:
                    seen.add(t.name)
                    order.append(t.name)
            else:
                for a in t.args:
                    walk(a)

        for a in atom.args:
            walk(a)
        for v in sorted(self.ops.interest(call) - seen):
            order.append(v)
        rho = {v: f"_p{i}" for i, v in enumerate(order)}
        sub = Substitution({v: Var(n) for v, n in rho.items()})
        args = tuple(sub.apply(a) for a in atom.args)
        return (atom.pred, args, self.ops.rename(call, rho)), rho

    def _rename_clause(self, clause: Clause):
        cvars = sorted(clause.variables)
        while True:
            n = next(self.counter)
            rho = {v: f"{v}{n}" for v in cvars}
            if not (set(rho.values()) & self.reserved):
                break
        sub = Substitution({v: Var(w) for v, w in rho.items()})
        head = Atom(clause.head.pred, tuple(sub.apply(a) for a in clause.head.args))
        body = tuple(
            Atom(a.pred, tuple(sub.apply(t) for t in a.args)) for a in clause.body
        )
        return Clause(head, body), rho

    def _inject(self, idx: int, step: int, rho, fallback):
        inj = self.req.injection or {}
        elem = inj.get((idx, step))
        if elem is None:
            return fallback
        known = set(rho) | self.ops.interest(self.req.call)
        missing = self.ops.interest(elem) - known
        if missing:
            raise ValueError(
                f"injected element mentions unknown variables {sorted(missing)}"
            )
        return self.ops.rename(elem, rho)

    def solve(self, atom: Atom, call, depth: int, stack: set, done: set) -> object:
        ops = self.ops
        # answers range over the caller's variables of interest, which may
        # strictly contain the atom's own variables at the root
        gv = ops.interest(call)
        if ops.is_bottom(call):
            return ops.bottom(gv)
        key, rho = self._key(atom, call)
        if key in stack or key in done:
            cached = self.memo.get(key)
            if cached is None:
                return ops.bottom(gv)
            back = {n: v for v, n in rho.items()}
            return ops.rename(cached, back)
        stack.add(key)
        total = ops.bottom(gv)
        clauses = self.req.program.matching(atom.pred, len(atom.args))
        for idx, clause in clauses:
            rclause, crho = self._rename_clause(clause)
            cvars = rclause.variables
            full, entry, theta = forward_unify(
                call, atom, rclause.head, self.req.domain, self.req.cap, cvars
            )
            if depth == 0:
                full = self._inject(idx, 0, crho, full)
                entry = self._inject(idx, 1, crho, ops.project(full, cvars))
            exit_elem = entry
            for batom in rclause.body:
                if ops.is_bottom(exit_elem):
                    break
                bcall = ops.project(exit_elem, batom.variables)
                bans = self.solve(batom, bcall, depth + 1, stack, done)
                if ops.is_bottom(bans):
                    exit_elem = ops.bottom(ops.interest(exit_elem))
                    break
                exit_elem = self._combine(bans, exit_elem)
            answer = backward_unify(
                call, exit_elem, full, theta, self.req.mode,
                self.req.domain, gv, self.req.cap,
            )
            total = ops.union(total, answer)
            self.trace.append(
                TraceStep(
                    depth,
                    idx,
                    str(atom),
                    self._fmt(call),
                    self._fmt(full),
                    self._fmt(entry),
                    self._fmt(exit_elem),
                    self._fmt(answer),
                )
            )
        stack.remove(key)
        done.add(key)
        stored = ops.rename(total, rho)
        old = self.memo.get(key)
        if old is not None:
            stored = ops.union(stored, old)
        if old != stored:
            self.memo[key] = stored
            self.changed = True
        back = {n: v for v, n in rho.items()}
        return ops.rename(stored, back)

    def _combine(self, answer, cur):
        ops = self.ops
        if self.req.mode == "matching":
            return ops.clip(ops.match(answer, cur), self.req.cap)
        avars = sorted(ops.interest(answer))
        primed = {v: f"_b{i}" for i, v in enumerate(avars)}
        renamed = ops.rename(answer, primed)
        joined = ops.join_disjoint(cur, renamed)
        for v in avars:
            joined = ops.amgu(joined, primed[v], Var(v), self.req.cap)
        return ops.project(joined, ops.interest(cur))

    def _fmt(self, e) -> str:
        return str(e)


def analyze(req: AnalysisRequest) -> AnalysisResult:
    """Run the goal-dependent analysis to a fixpoint and return the answer
    over the goal's variables, with per-clause traces from the final pass."""
    ops = DOMAINS[req.domain]
    goal_vars = req.goal.variables
    if not goal_vars <= ops.interest(req.call):
        raise ValueError(
            f"call interest set {sorted(ops.interest(req.call))} must cover "
            f"the goal variables {sorted(goal_vars)}"
        )
    engine = _Engine(req)
    answer = None
    for passno in range(1, req.max_passes + 1):
        engine.changed = False
        engine.trace = []
        engine.counter = itertools.count(1)
        answer = engine.solve(req.goal, req.call, 0, set(), set())
        if not engine.changed:
            return AnalysisResult(answer, tuple(engine.trace), passno, len(engine.memo))
    raise FixpointLimitExceeded(f"no fixpoint after {req.max_passes} passes")
