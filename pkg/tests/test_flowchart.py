import random

import pytest

from srtlab.build import QA, V, asg, prog, univ, wh
from srtlab.flowchart import (
    Assign, DecodeError, RunResult, Seq, Var, decode, encode, is_tiny, run,
)
from srtlab.proggen import random_inputs, random_tiny_program
from srtlab.sexpr import equal, parse, sexpr_print, to_unary

FUEL = 10**6


def dec(text):
    return decode(parse(text))


def test_decode_projection():
    p = dec("((q d) (:= out q) out)")
    assert p.inputs == ("q", "d")
    assert p.output == "out"
    assert type(p.body) is Assign
    assert type(p.body.expr) is Var


def test_decode_specialized_shape():
    p = dec("((d) (; (:= q (QUOTE s)) (:= out q)) out)")
    assert p.inputs == ("d",)
    assert type(p.body) is Seq


def test_decode_while_form():
    p = dec("((x) (while x (:= x (tl x))) x)")
    assert not is_tiny(p)


@pytest.mark.parametrize("text", [
    "((q d) (:= out q))",             # wrong arity at program level
    "((q q) (:= out q) out)",         # duplicate inputs
    "((q) (bogus q) out)",            # unknown command tag
    "((q) (:= out (frob q)) out)",    # unknown expression tag
    "((q) (:= (a b) q) out)",         # non-atom assignment target
    "((q) (:= out q) ())",            # () as a variable
    "((q) (while x) x)",              # wrong while arity
    "((q) (:= * q) out)",             # '*' as a variable
])
def test_decode_rejects_malformed(text):
    with pytest.raises(DecodeError):
        dec(text)


def test_decode_rejects_reserved_names_in_user_source():
    with pytest.raises(DecodeError):
        dec("((%x) (:= out %x) out)")
    p = decode(parse("((%x) (:= out %x) out)"), allow_reserved=True)
    assert p.inputs == ("%x",)


def test_encode_decode_round_trip_is_identity():
    for text in [
        "((q d) (:= out q) out)",
        "((d) (; (:= q (QUOTE s)) (:= out q)) out)",
        "((x) (while x (:= x (tl x))) x)",
        "((x) (if (atom? x) (:= out (QUOTE 1)) (:= out (cons x x))) out)",
        "((p d) (:= out (univ p d)) out)",
        "((q d) (:= out *) out)",
    ]:
        s = parse(text)
        assert encode(decode(s)) is s  # decode caches its source encoding
        assert sexpr_print(encode(decode(s))) == text


def test_run_first_projection():
    r = run(dec("((q d) (:= out q) out)"), [parse("a"), parse("b")], 100)
    assert r.halted and sexpr_print(r.value) == "a"
    assert r.steps == 3  # assignment + variable read + final output read


def test_run_write_program_step_pin():
    # assignment, quoted-constant access, final output read
    r = run(dec("(() (:= out (QUOTE x)) out)"), [], 100)
    assert (sexpr_print(r.value), r.steps) == ("x", 3)


def test_while_loop_step_accounting():
    # setup 2; per iteration: test event + test read, cons-assign with two
    # reads, tl-assign with one; final failed test 2; output read 1
    p = dec("((x) (; (:= n (QUOTE ())) (while x (; (:= n (cons n n)) (:= x (tl x))))) n)")
    r = run(p, [to_unary(4)], FUEL)
    assert r.halted
    assert r.steps == 2 + 4 * (2 + 4 + 3) + 2 + 1


def test_uninitialized_variables_read_as_nil():
    r = run(dec("((x) (:= out nothere) out)"), [parse("a")], 100)
    assert sexpr_print(r.value) == "()"


def test_hd_tl_total_on_atoms():
    r = run(dec("((x) (:= out (hd (tl x))) out)"), [parse("a")], 100)
    assert sexpr_print(r.value) == "()"


def test_truthiness_is_non_nil():
    p = dec("((x) (if x (:= out (QUOTE y)) (:= out (QUOTE n))) out)")
    assert sexpr_print(run(p, [parse("(a)")], 100).value) == "y"
    assert sexpr_print(run(p, [parse("a")], 100).value) == "y"  # atoms are true
    assert sexpr_print(run(p, [parse("()")], 100).value) == "n"


def test_tiny_programs_run_in_constant_time():
    rng = random.Random(11)
    sizes = [parse("a"), to_unary(500), to_unary(5 * 10**5)]
    for _ in range(10):
        p = random_tiny_program(rng)
        assert is_tiny(p)
        counts = {run(p, [x, x], FUEL).steps for x in sizes}
        assert len(counts) == 1


def test_determinism():
    rng = random.Random(13)
    p = random_tiny_program(rng)
    args = [parse("(a b)"), parse("c")]
    first = run(p, args, FUEL)
    again = run(p, args, FUEL)
    assert first.steps == again.steps and equal(first.value, again.value)


def test_fuel_monotonicity():
    p = dec("((x) (while x (:= x (tl x))) x)")
    base = run(p, [to_unary(10)], FUEL)
    assert base.halted
    k = base.steps
    for fuel in (k, k + 1, k + 100, FUEL * 10):
        r = run(p, [to_unary(10)], fuel)
        assert r.halted and r.steps == k and equal(r.value, base.value)
    short = run(p, [to_unary(10)], k - 1)
    assert short.status == RunResult.FUEL and short.steps == k - 1


def test_exhaustion_reports_fuel_spent():
    p = dec("((x) (while (QUOTE 1) (:= x x)) x)")
    r = run(p, [parse("a")], 5000)
    assert r.status == RunResult.FUEL
    assert r.steps == 5000
    assert r.value is None


def test_tiny_totality_no_runtime_errors():
    rng = random.Random(17)
    for _ in range(40):
        p = random_tiny_program(rng)
        for d in random_inputs(rng, 2):
            assert run(p, [d, d], FUEL).status == RunResult.HALTED


def test_reflective_forms_error_in_plain_mode():
    p = dec("((q d) (:= out (univ q d)) out)")
    r = run(p, [encode(dec("((x) (:= out x) out)")), parse("a")], 100)
    assert r.status == RunResult.ERROR
    p2 = dec("((q d) (:= out *) out)")
    assert run(p2, [parse("a"), parse("b")], 100).status == RunResult.ERROR


def test_selfref_evaluates_to_own_text():
    p = dec("((q d) (:= out *) out)")
    r = run(p, [parse("a"), parse("b")], 100, mode="reflective")
    assert equal(r.value, encode(p))


def test_univ_call_runs_encoded_program():
    ident = dec("((x) (:= out x) out)")
    p = prog(("q", "d"), asg("out", univ(V("q"), V("d"))), "out")
    r = run(p, [encode(ident), parse("(a b)")], 1000, mode="reflective")
    assert sexpr_print(r.value) == "(a b)"
    direct = run(ident, [parse("(a b)")], 1000)
    # dispatch + inner run's steps are charged to the shared budget
    assert r.steps > direct.steps


def test_univ_call_shares_one_fuel_budget():
    looper = prog(("x",), wh(QA("1"), asg("x", V("x"))), "x")
    p = prog(("q", "d"), asg("out", univ(V("q"), V("d"))), "out")
    r = run(p, [encode(looper), parse("a")], 20000, mode="reflective")
    assert r.status == RunResult.FUEL
    assert r.steps == 20000


def test_univ_call_on_garbage_is_a_runtime_error():
    p = prog(("q", "d"), asg("out", univ(V("q"), V("d"))), "out")
    r = run(p, [parse("(not a program)"), parse("a")], 1000, mode="reflective")
    assert r.status == RunResult.ERROR


def test_arity_mismatch_rejected():
    with pytest.raises(ValueError):
        run(dec("((q d) (:= out q) out)"), [parse("a")], 100)
