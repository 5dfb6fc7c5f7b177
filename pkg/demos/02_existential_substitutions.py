"""Existential substitutions: idempotent substitutions up to renaming.

Only the variables of interest matter; everything else is existential and
can be renamed freely. Canonical representatives make equality decidable:
hidden variables become _1, _2, ... and lone free variables are dropped.
"""
from sharlin import (
    UNDEFINED,
    canonicalize,
    ematch,
    emgu,
    eproject,
    parse_existential,
    parse_substitution,
)
from sharlin.terms import App, Substitution, Var

# two ways to write "x and y are aliased"
c1 = canonicalize(parse_substitution("{x/y}"), {"x", "y"})
c2 = canonicalize(parse_substitution("{y/x}"), {"x", "y"})
print("canonical form of {x/y}:", c1)
print("canonical form of {y/x}:", c2)
print("same class:", c1 == c2)
print()

# hidden variables keep their sharing structure
c = canonicalize(Substitution({"x": App("f", (Var("k"),)), "y": Var("k")}), {"x", "y"})
print("{x/f(k), y/k} canonicalizes to:", c)
print()

# unification of classes renames apart automatically
a = parse_existential("[{x/a, y/b}]_{x,y}")
b = parse_existential("[{z/r(y)}]_{y,z}")
print("unify", a, "with", b)
print("  =", emgu(a, b))
print()

# matching is unification guarded by non-instantiation of the first side
print("match(a, b) =", ematch(a, b))
print("match(b, a) =", ematch(b, a), " (b's y,z got instantiated: no match)")
print()

# projection just restricts the variables of interest
m = ematch(a, b)
print("projected on {x,z}:", eproject(m, {"x", "z"}))
print()

# the bigger worked pair: both substitutions share structure through x
t1 = canonicalize(parse_substitution("{x/r(w1,w2,w2,w3,w3), y/a, z/r(w1)}"), {"x", "y", "z"})
t2 = canonicalize(
    parse_substitution("{x/r(w4,w5,w6,w8,w8), u/r(w4,w7), v/r(w7,w8)}"), {"u", "v", "x"}
)
print("t1:", t1)
print("t2:", t2)
print("match(t1, t2):", ematch(t1, t2))
assert ematch(t2, t1) is UNDEFINED
