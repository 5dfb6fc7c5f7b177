"""Goal-dependent analysis: matching against plain re-unification.

The pipeline per clause: call -> (forward unification) -> entry ->
(body) -> exit -> (backward unification) -> answer. Backward unification
through matching exploits that the exit is always an instance of the
entry; re-unifying from scratch cannot, and loses precision.
"""
from sharlin import (
    AnalysisRequest,
    analyze,
    parse_goal,
    parse_injection,
    parse_omega,
    parse_program,
    parse_sl,
    parse_two,
)

# a single fact: the goal aliases x into the first and z into the last
# argument, with a compound term in the middle
prog = parse_program("p(u,v,w).")
goal = parse_goal("p(x, f(x,z), z)")
call = parse_omega("[x, z]_{x,z}")
print("program: p(u,v,w).   goal:", goal, "  call:", call)

for mode in ("matching", "mgu"):
    res = analyze(AnalysisRequest(program=prog, goal=goal, call=call,
                                  domain="omega", mode=mode))
    print(f"  {mode:9s} answer: {res.answer}")
print("matching proves x and z stay independent; re-unification cannot")
print("(any sound operator that forgets the entry/exit relationship must")
print("include the group xz).")
print()

# list membership, analyzed in the clipped domain
prog = parse_program("member(u, [u|v]).\nmember(u, [v|w]) :- member(u, w).")
goal = parse_goal("member(x, [y])")
call = parse_two("[xy, xz]_{x,y,z}")
print("program: member/2   goal:", goal, "  call:", call)

for mode in ("matching", "mgu"):
    res = analyze(AnalysisRequest(program=prog, goal=goal, call=call,
                                  domain="two", mode=mode))
    print(f"  {mode:9s} answer: {res.answer}  (plain forward steps)")

# the forward steps computed here are not the best possible; supplying
# sharper forward intermediates isolates the backward operators
injection = parse_injection(
    "0 0 [u^*x^*y^*]_{u,v,x,y,z}\n"
    "0 1 [u^*]_{u,v}\n"
    "1 0 [uvxy, uxz]_{u,v,w,x,y,z}\n"
    "1 1 [uv, v]_{u,v,w}\n",
    "two",
)
for mode in ("matching", "mgu"):
    res = analyze(AnalysisRequest(program=prog, goal=goal, call=call,
                                  domain="two", mode=mode, injection=injection))
    print(f"  {mode:9s} answer: {res.answer}  (injected forward steps)")
print("with matching, z is proven ground after the goal returns.")
print()

# a full trace of the matching analysis
res = analyze(AnalysisRequest(program=prog, goal=goal, call=call,
                              domain="two", injection=injection))
print(f"fixpoint: {res.passes} passes, {res.table_size} tabled call patterns")
for step in res.trace:
    print(f"  depth={step.depth} clause={step.clause_index} {step.goal}")
    print(f"    call   {step.call}")
    print(f"    entry  {step.entry}")
    print(f"    exit   {step.exit}")
    print(f"    answer {step.answer}")
