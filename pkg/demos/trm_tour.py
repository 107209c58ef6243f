"""Tour: the 1# register machine.

Programs and data are both {1,#}-strings, and programs compose by
string concatenation.  The write/diag toolkit gives self-reproduction
directly, and both fixpoint constructions carry over, with step counts
to compare them.

Run:  python3 demos/trm_tour.py
"""

from srtlab.trm import (
    setup_boundary, trm_diag_program, trm_kleene_fixpoint, trm_move,
    trm_moss_fixpoint, trm_parse, trm_run, trm_write_program,
)

FUEL = 10**7

print("== the toolkit")
W = trm_write_program()
out = trm_run(W, ["1#1"], FUEL)
print("write('1#1') =", out.output)
print("running that:", trm_run(trm_parse(out.output), [], FUEL).output)

G = trm_diag_program()
self_text = trm_run(G, [G.raw], FUEL).output
print("diag(diag) is a self-reproducer:",
      trm_run(trm_parse(self_text), [], FUEL).output == self_text,
      f"({len(self_text)} characters)")

print("\n== fixpoints of the empty program (first projection)")
base = trm_parse("")
moss = trm_moss_fixpoint(base)
kleene = trm_kleene_fixpoint(base)
for label, p in (("moss", moss), ("kleene", kleene)):
    r = trm_run(p, ["1##"], FUEL, boundary=setup_boundary(p, base))
    print(f"{label:7s} {len(p.raw):5d} chars, quine: {r.output == p.raw},"
          f" total {r.steps} steps, setup {r.setup_steps}")

rm = trm_run(moss, ["1##"], FUEL)
rk = trm_run(kleene, ["1##"], FUEL)
print(f"kleene / moss step ratio: {rk.steps / rm.steps:.2f}")

print("\n== constant-time assignments")
fast = trm_run(moss, ["1##"], FUEL, variant="fast_assign")
print(f"standard {rm.steps} steps, fast-assign {fast.steps} steps "
      f"(x{rm.steps / fast.steps:.1f}), identical output:",
      fast.output == rm.output)
print("\none move block, three symbols, standard vs fast:")
print(" ", trm_run(trm_move(1, 2), ["1#1"], FUEL).steps, "steps vs",
      trm_run(trm_move(1, 2), ["1#1"], FUEL, variant="fast_assign").steps)
