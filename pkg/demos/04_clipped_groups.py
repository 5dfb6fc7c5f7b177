"""2-sharing groups: multiplicities clipped to {0, 1, infinity}.

Exponent 1 means "occurs exactly once" (linearity); ^* means "may occur
more than once". Elements are downward-closed and stored by maximals.
Two matchers agree: a literal reference enumeration and the production
algorithm working directly on maximal antichains.
"""
from sharlin import (
    alpha2,
    alpha2_group,
    down_closure,
    gamma2_contains,
    leq2,
    match2,
    match2_opt,
    match2_ref,
    match_omega,
    parse_group,
    parse_omega,
    parse_two,
)

print("clipping:", parse_group("xy^2z"), "->", alpha2_group(parse_group("xy^2z")))
print()

e = parse_two("[xy^*z]_{x,y,z}")
print("element:", e)
print("its closure:", sorted(str(g) for g in down_closure(e.maximals)))
for g in ("xyz", "xy^3z", "x^2yz"):
    print(f"  contains {g}?", gamma2_contains(e, parse_group(g)))
print()

t1 = parse_two("[x^*, xz]_{x,y,z}")
t2 = parse_two("[uv, ux, vx^*, x]_{u,v,x}")
print("matching", t1, "with", t2)
ref = match2_ref(t1, t2)
opt = match2(t1, t2)
print("  reference:", ref)
print("  antichain:", opt)
print("  equal:", ref == opt)
print()

raw = match2_opt(t1.maximals, t1.interest, t2.maximals, t2.interest)
print("raw maximal groups:", sorted(str(g) for g in raw if g))
print()
print("note vxz: choosing the delinearized vx from below vx^* is different")
print("from choosing a group twice; xz's x is linear, so vx^* enters once")
print("with its x clipped back to one occurrence.")
print()

# clipping the exact result loses nothing it should not: containment holds
mo = match_omega(
    parse_omega("[x^2, xz]_{x,y,z}"), parse_omega("[uv, ux, vx^2, x]_{u,v,x}")
)
print("clipped exact result:", alpha2(mo))
print("inside the clipped matching:", leq2(alpha2(mo), opt))
