"""First-argument specialisation (the S-1-1 function) and a dead-code pass.

``specialize`` is the meta-level operation: freeze a program's first
input to a constant.  ``s11_program`` is the same operation written as a
straight-line flowchart program operating on encoded programs, so it can
be run, specialised and self-applied like any other data.
"""

from .flowchart import (
    Assign, Cons, Hd, If, Program, Quote, Seq, Tl, Var, While, expr_vars,
)
from .sexpr import NIL, Atom

__all__ = ["specialize", "s11_program", "eliminate_dead_code"]


def specialize(program, value):
    """Freeze the first input of ``program`` to ``value``.

    The result reads one argument fewer and starts by assigning the
    quoted value to the removed input variable.  Both the value and the
    original body are referenced, not copied.
    """
    if not program.inputs:
        raise ValueError("cannot specialize a program with no inputs")
    frozen = program.inputs[0]
    return Program(
        program.inputs[1:],
        Seq(Assign(frozen, Quote(value)), program.body),
        program.output,
    )


def _quoted_atom(name):
    return Quote(Atom(name))


def _list_expr(*items):
    """Expression building the list of the given item expressions."""
    result = Quote(NIL)
    for item in reversed(items):
        result = Cons(item, result)
    return result


def s11_program():
    """The specialiser as a two-input straight-line program.

    Reads an encoded program and a value; writes the encoded
    specialised program.  No validation: garbage in, garbage out.
    """
    pgm = Var("pgm")
    body = Seq(
        Assign("inputvar", Hd(Hd(pgm))),
        Seq(
            Assign("C", Hd(Tl(pgm))),
            Seq(
                Assign("outputvar", Hd(Tl(Tl(pgm)))),
                Seq(
                    Assign("initialise",
                           _list_expr(_quoted_atom(":="),
                                      Var("inputvar"),
                                      _list_expr(_quoted_atom("QUOTE"),
                                                 Var("s")))),
                    Seq(
                        Assign("body",
                               _list_expr(_quoted_atom(";"),
                                          Var("initialise"),
                                          Var("C"))),
                        Assign("outpgm",
                               _list_expr(Tl(Hd(pgm)),
                                          Var("body"),
                                          Var("outputvar"))),
                    ),
                ),
            ),
        ),
    )
    return Program(("pgm", "s"), body, "outpgm")


# ---------------------------------------------------------------------------
# dead code elimination

def eliminate_dead_code(program):
    """Drop assignments whose targets never flow into the output.

    Backward liveness from the output variable.  Loops and branches are
    handled conservatively: every variable read anywhere inside them is
    treated as live throughout the construct, and the constructs
    themselves are always kept.
    """
    body, _ = _sweep(program.body, {program.output})
    if body is None:
        body = Assign(program.output, Var(program.output))
    return Program(program.inputs, body, program.output)


def _reads_within(cmd, acc):
    """Variables read anywhere inside a command."""
    stack = [cmd]
    while stack:
        node = stack.pop()
        t = type(node)
        if t is Assign:
            expr_vars(node.expr, acc)
        elif t is Seq:
            stack.append(node.first)
            stack.append(node.second)
        elif t is While:
            expr_vars(node.test, acc)
            stack.append(node.body)
        elif t is If:
            expr_vars(node.test, acc)
            stack.append(node.then)
            stack.append(node.orelse)
    return acc


def _sweep(cmd, live):
    """Return (kept command or None, live set before the command)."""
    t = type(cmd)
    if t is Assign:
        if cmd.var not in live:
            return None, live
        before = set(live)
        before.discard(cmd.var)
        expr_vars(cmd.expr, before)
        return cmd, before
    if t is Seq:
        second, live = _sweep(cmd.second, live)
        first, live = _sweep(cmd.first, live)
        if first is None:
            return second, live
        if second is None:
            return first, live
        return Seq(first, second), live
    if t is While:
        inner = _reads_within(cmd, set())
        loop_live = live | inner
        body, _ = _sweep(cmd.body, loop_live)
        node = cmd if body is cmd.body or body is None else While(cmd.test, body)
        return node, loop_live
    if t is If:
        inner = _reads_within(cmd, set())
        branch_live = live | inner
        then, _ = _sweep(cmd.then, branch_live)
        orelse, _ = _sweep(cmd.orelse, branch_live)
        # the construct itself is always kept (its test may loop via univ);
        # fully dead arms shrink to a harmless reserved-variable assignment
        then = then if then is not None else _noop()
        orelse = orelse if orelse is not None else _noop()
        node = cmd if (then is cmd.then and orelse is cmd.orelse) else If(cmd.test, then, orelse)
        return node, branch_live
    raise TypeError(f"cannot sweep {cmd!r}")


def _noop():
    return Assign("%dead", Quote(NIL))
