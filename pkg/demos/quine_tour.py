"""Tour: programs that compute with their own text.

Builds the fixpoint of a few two-input base programs with both
constructions and shows the defining equation, the quine, the
self-recognizer, and why the printed fixpoint is bigger than the
in-memory one.

Run:  python3 demos/quine_tour.py
"""

from srtlab.flowchart import encode, run
from srtlab.sexpr import dag_size, equal, parse, sexpr_print, tree_size
from srtlab.srt import demo_program, kleene_fixpoint, moss_fixpoint

FUEL = 10**6


def show(title):
    print()
    print(f"== {title}")


show("a quine, from the first projection")
proj1 = demo_program("proj1")
print("base program:", sexpr_print(encode(proj1)))
pstar = kleene_fixpoint(proj1)
result = run(pstar, [parse("(any input at all)")], FUEL)
print("fixpoint output equals its own text:",
      equal(result.value, encode(pstar)))
print("fixpoint runs in", result.steps, "steps regardless of the input")

show("the defining equation, for both constructions")
for name in ("proj1", "proj2", "self_recognizer"):
    base = demo_program(name)
    for label, fix in (("kleene", kleene_fixpoint), ("moss", moss_fixpoint)):
        fp = fix(base)
        agree = all(
            equal(run(fp, [parse(d)], FUEL).value,
                  run(base, [encode(fp), parse(d)], FUEL).value)
            for d in ("a", "(a b)", "()"))
        print(f"{name:16s} {label:6s} run(p*, d) == run(p, own-text, d):",
              agree)

show("self-recognition")
recog = kleene_fixpoint(demo_program("self_recognizer"))
own = encode(recog)
print("on its own text :", sexpr_print(run(recog, [own], FUEL).value))
print("on anything else:", sexpr_print(run(recog, [parse("(a b)")], FUEL).value))

show("the printed fixpoint is a tree; the built one is a DAG")
enc = encode(pstar)
print("tree size (printed):", tree_size(enc))
print("dag size (in memory):", dag_size(enc))
print("the body appears twice in print: once as code, once inside the",
      "quoted self-copy; in memory both are the same node")
