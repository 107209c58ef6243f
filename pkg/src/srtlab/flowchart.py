"""Flowchart programs over symbolic trees, and their interpreter.

The straight-line core has assignment and sequencing only ("tiny"
programs: constant running time).  The Turing-complete extension adds
``while`` and ``if``; the reflective extension adds the constant ``*``
(the running program's own text) and a native ``univ`` call form,
executed by a recursive invocation of the running interpreter.

Programs have a bijective s-expression concrete syntax, so programs are
ordinary data:

    ((x1 ... xn) command outvar)

with commands/exprs in prefix form: ``(:= x e)``, ``(; c1 c2)``,
``(while e c)``, ``(if e c1 c2)``, ``(QUOTE d)``, ``(hd e)``, ``(tl e)``,
``(cons e1 e2)``, ``(= e1 e2)``, ``(atom? e)``, ``*``, ``(univ e1 e2)``.

Cost model: 1 step per executed assignment, per operator application,
per variable/constant/self access, and per while/if test event; the
final read of the output variable is a variable access.  Execution
aborts with ``fuel_exhausted`` the moment the count would pass the fuel
bound, which makes "runs within t steps" decidable.
"""

from .sexpr import (
    NIL, ONE, Atom, Pair, equal, from_list, is_nil, sexpr_print, to_list,
)

__all__ = [
    "Program", "Assign", "Seq", "While", "If",
    "Var", "Quote", "Hd", "Tl", "Cons", "Eq", "IsAtom", "SelfRef", "UnivCall",
    "RunResult", "DecodeError", "decode", "encode", "run", "is_tiny",
    "command_vars", "expr_vars", "rename_command", "RESERVED_PREFIX",
]

#: Prefix reserved for variables inserted by program constructions.
RESERVED_PREFIX = "%"


# ---------------------------------------------------------------------------
# abstract syntax

class Program:
    __slots__ = ("inputs", "body", "output", "_enc", "_compiled")

    def __init__(self, inputs, body, output):
        inputs = tuple(inputs)
        if len(set(inputs)) != len(inputs):
            raise ValueError("input variables must be pairwise distinct")
        self.inputs = inputs
        self.body = body
        self.output = output
        self._enc = None
        self._compiled = None

    def __repr__(self):
        return f"<program ({' '.join(self.inputs)}) -> {self.output}>"


class _Node:
    __slots__ = ("_enc",)

    def __init__(self):
        self._enc = None


class Assign(_Node):
    __slots__ = ("var", "expr")

    def __init__(self, var, expr):
        super().__init__()
        self.var = var
        self.expr = expr


class Seq(_Node):
    __slots__ = ("first", "second")

    def __init__(self, first, second):
        super().__init__()
        self.first = first
        self.second = second


class While(_Node):
    __slots__ = ("test", "body")

    def __init__(self, test, body):
        super().__init__()
        self.test = test
        self.body = body


class If(_Node):
    __slots__ = ("test", "then", "orelse")

    def __init__(self, test, then, orelse):
        super().__init__()
        self.test = test
        self.then = then
        self.orelse = orelse


class Var(_Node):
    __slots__ = ("name",)

    def __init__(self, name):
        super().__init__()
        self.name = name


class Quote(_Node):
    __slots__ = ("value",)

    def __init__(self, value):
        super().__init__()
        self.value = value


class Hd(_Node):
    __slots__ = ("arg",)

    def __init__(self, arg):
        super().__init__()
        self.arg = arg


class Tl(_Node):
    __slots__ = ("arg",)

    def __init__(self, arg):
        super().__init__()
        self.arg = arg


class Cons(_Node):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        super().__init__()
        self.left = left
        self.right = right


class Eq(_Node):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        super().__init__()
        self.left = left
        self.right = right


class IsAtom(_Node):
    __slots__ = ("arg",)

    def __init__(self, arg):
        super().__init__()
        self.arg = arg


class SelfRef(_Node):
    __slots__ = ()


class UnivCall(_Node):
    __slots__ = ("prog", "arg")

    def __init__(self, prog, arg):
        super().__init__()
        self.prog = prog
        self.arg = arg


# ---------------------------------------------------------------------------
# program <-> s-expression codec

class DecodeError(ValueError):
    """Raised on malformed encoded programs; names the offending subtree."""

    def __init__(self, message, subtree=None):
        if subtree is not None:
            text = sexpr_print(subtree)
            if len(text) > 80:
                text = text[:77] + "..."
            message = f"{message}: {text}"
        super().__init__(message)


_COMMAND_TAGS = {":=", ";", "while", "if"}


def _expect_list(s, length, what):
    if type(s) is not Pair:
        raise DecodeError(f"expected {what}", s)
    try:
        items = to_list(s)
    except ValueError:
        raise DecodeError(f"improper list in {what}", s) from None
    if len(items) != length:
        raise DecodeError(f"wrong arity for {what}", s)
    return items


def _decode_varname(s, allow_reserved, what):
    if type(s) is not Atom or s.name == "()":
        raise DecodeError(f"{what} must be a non-() atom", s)
    if s.name == "*":
        raise DecodeError(f"'*' is not a legal {what}", s)
    if not allow_reserved and s.name.startswith(RESERVED_PREFIX):
        raise DecodeError(
            f"{what} uses the reserved '{RESERVED_PREFIX}' prefix", s)
    return s.name


def decode(s, allow_reserved=False):
    """Decode an encoded program ``(inputvars body outputvar)``.

    ``allow_reserved`` admits '%'-prefixed variables, which only appear
    in machine-generated programs; hand-written source is rejected.
    """
    items = _expect_list(s, 3, "program")
    inputs_s, body_s, output_s = items
    inputs = []
    rest = inputs_s
    while type(rest) is Pair:
        inputs.append(_decode_varname(rest.head, allow_reserved, "input variable"))
        rest = rest.tail
    if not is_nil(rest):
        raise DecodeError("input list is improper", inputs_s)
    body = _decode_command(body_s, allow_reserved)
    output = _decode_varname(output_s, allow_reserved, "output variable")
    try:
        program = Program(inputs, body, output)
    except ValueError as exc:
        raise DecodeError(str(exc), inputs_s) from None
    program._enc = s
    return program


def _decode_command(s, allow_reserved):
    if type(s) is not Pair or type(s.head) is not Atom:
        raise DecodeError("expected a command", s)
    tag = s.head.name
    if tag == ":=":
        items = _expect_list(s, 3, "assignment")
        node = Assign(_decode_varname(items[1], allow_reserved, "assigned variable"),
                      _decode_expr(items[2], allow_reserved))
    elif tag == ";":
        items = _expect_list(s, 3, "sequence")
        node = Seq(_decode_command(items[1], allow_reserved),
                   _decode_command(items[2], allow_reserved))
    elif tag == "while":
        items = _expect_list(s, 3, "while")
        node = While(_decode_expr(items[1], allow_reserved),
                     _decode_command(items[2], allow_reserved))
    elif tag == "if":
        items = _expect_list(s, 4, "if")
        node = If(_decode_expr(items[1], allow_reserved),
                  _decode_command(items[2], allow_reserved),
                  _decode_command(items[3], allow_reserved))
    else:
        raise DecodeError("unknown command tag", s)
    node._enc = s
    return node


def _decode_expr(s, allow_reserved):
    if type(s) is Atom:
        if s.name == "*":
            node = SelfRef()
        else:
            node = Var(_decode_varname(s, allow_reserved, "variable"))
        node._enc = s
        return node
    if type(s.head) is not Atom:
        raise DecodeError("expression head must be an operator atom", s)
    tag = s.head.name
    if tag == "QUOTE":
        items = _expect_list(s, 2, "QUOTE")
        node = Quote(items[1])
    elif tag == "hd":
        items = _expect_list(s, 2, "hd")
        node = Hd(_decode_expr(items[1], allow_reserved))
    elif tag == "tl":
        items = _expect_list(s, 2, "tl")
        node = Tl(_decode_expr(items[1], allow_reserved))
    elif tag == "cons":
        items = _expect_list(s, 3, "cons")
        node = Cons(_decode_expr(items[1], allow_reserved),
                    _decode_expr(items[2], allow_reserved))
    elif tag == "=":
        items = _expect_list(s, 3, "=")
        node = Eq(_decode_expr(items[1], allow_reserved),
                  _decode_expr(items[2], allow_reserved))
    elif tag == "atom?":
        items = _expect_list(s, 2, "atom?")
        node = IsAtom(_decode_expr(items[1], allow_reserved))
    elif tag == "univ":
        items = _expect_list(s, 3, "univ")
        node = UnivCall(_decode_expr(items[1], allow_reserved),
                        _decode_expr(items[2], allow_reserved))
    else:
        raise DecodeError("unknown expression tag", s)
    node._enc = s
    return node


def encode(node):
    """Encode a program or AST node as an s-expression.

    Encodings are cached per node, so a subtree shared between two
    programs is encoded as one shared value; specialisation and the
    fixpoint constructions rely on this to keep the printed program a
    DAG rather than a tree.
    """
    cached = node._enc
    if cached is not None:
        return cached
    if type(node) is Program:
        enc = from_list([
            from_list([Atom(v) for v in node.inputs]),
            encode(node.body),
            Atom(node.output),
        ])
    elif type(node) is Assign:
        enc = from_list([Atom(":="), Atom(node.var), encode(node.expr)])
    elif type(node) is Seq:
        enc = from_list([Atom(";"), encode(node.first), encode(node.second)])
    elif type(node) is While:
        enc = from_list([Atom("while"), encode(node.test), encode(node.body)])
    elif type(node) is If:
        enc = from_list([Atom("if"), encode(node.test), encode(node.then),
                         encode(node.orelse)])
    elif type(node) is Var:
        enc = Atom(node.name)
    elif type(node) is Quote:
        enc = from_list([Atom("QUOTE"), node.value])
    elif type(node) is Hd:
        enc = from_list([Atom("hd"), encode(node.arg)])
    elif type(node) is Tl:
        enc = from_list([Atom("tl"), encode(node.arg)])
    elif type(node) is Cons:
        enc = from_list([Atom("cons"), encode(node.left), encode(node.right)])
    elif type(node) is Eq:
        enc = from_list([Atom("="), encode(node.left), encode(node.right)])
    elif type(node) is IsAtom:
        enc = from_list([Atom("atom?"), encode(node.arg)])
    elif type(node) is SelfRef:
        enc = Atom("*")
    elif type(node) is UnivCall:
        enc = from_list([Atom("univ"), encode(node.prog), encode(node.arg)])
    else:
        raise TypeError(f"cannot encode {node!r}")
    node._enc = enc
    return enc


# ---------------------------------------------------------------------------
# AST utilities

def expr_vars(expr, acc=None):
    """Set of variable names read by an expression."""
    if acc is None:
        acc = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        t = type(node)
        if t is Var:
            acc.add(node.name)
        elif t in (Hd, Tl, IsAtom):
            stack.append(node.arg)
        elif t is Cons:
            stack.append(node.left)
            stack.append(node.right)
        elif t is Eq:
            stack.append(node.left)
            stack.append(node.right)
        elif t is UnivCall:
            stack.append(node.prog)
            stack.append(node.arg)
    return acc


def command_vars(cmd):
    """All variable names occurring in a command (read or assigned)."""
    assigned, read = set(), set()
    stack = [cmd]
    while stack:
        node = stack.pop()
        t = type(node)
        if t is Assign:
            assigned.add(node.var)
            expr_vars(node.expr, read)
        elif t is Seq:
            stack.append(node.first)
            stack.append(node.second)
        elif t is While:
            expr_vars(node.test, read)
            stack.append(node.body)
        elif t is If:
            expr_vars(node.test, read)
            stack.append(node.then)
            stack.append(node.orelse)
    return assigned | read


def _rename_expr(expr, mapping):
    t = type(expr)
    if t is Var:
        return Var(mapping.get(expr.name, expr.name))
    if t is Quote or t is SelfRef:
        return expr
    if t is Hd:
        return Hd(_rename_expr(expr.arg, mapping))
    if t is Tl:
        return Tl(_rename_expr(expr.arg, mapping))
    if t is IsAtom:
        return IsAtom(_rename_expr(expr.arg, mapping))
    if t is Cons:
        return Cons(_rename_expr(expr.left, mapping),
                    _rename_expr(expr.right, mapping))
    if t is Eq:
        return Eq(_rename_expr(expr.left, mapping),
                  _rename_expr(expr.right, mapping))
    if t is UnivCall:
        return UnivCall(_rename_expr(expr.prog, mapping),
                        _rename_expr(expr.arg, mapping))
    raise TypeError(f"cannot rename {expr!r}")


def rename_command(cmd, mapping):
    """Alpha-rename variables (quoted constants are untouched data)."""
    t = type(cmd)
    if t is Assign:
        return Assign(mapping.get(cmd.var, cmd.var),
                      _rename_expr(cmd.expr, mapping))
    if t is Seq:
        return Seq(rename_command(cmd.first, mapping),
                   rename_command(cmd.second, mapping))
    if t is While:
        return While(_rename_expr(cmd.test, mapping),
                     rename_command(cmd.body, mapping))
    if t is If:
        return If(_rename_expr(cmd.test, mapping),
                  rename_command(cmd.then, mapping),
                  rename_command(cmd.orelse, mapping))
    raise TypeError(f"cannot rename {cmd!r}")


def is_tiny(program):
    """True iff the body is straight-line: assignment and sequencing only."""
    stack = [program.body]
    while stack:
        node = stack.pop()
        t = type(node)
        if t is Seq:
            stack.append(node.first)
            stack.append(node.second)
        elif t is Assign:
            if _expr_is_tiny(node.expr):
                continue
            return False
        else:
            return False
    return True


def _expr_is_tiny(expr):
    stack = [expr]
    while stack:
        node = stack.pop()
        t = type(node)
        if t in (SelfRef, UnivCall):
            return False
        if t in (Hd, Tl, IsAtom):
            stack.append(node.arg)
        elif t in (Cons, Eq):
            stack.append(node.left)
            stack.append(node.right)
    return True


# ---------------------------------------------------------------------------
# interpreter

class RunResult:
    """Outcome of a fuel-bounded run.

    ``steps`` is the time measure; ``value`` is present iff halted.
    """

    __slots__ = ("value", "steps", "status", "detail")

    HALTED = "halted"
    FUEL = "fuel_exhausted"
    ERROR = "runtime_error"

    def __init__(self, value, steps, status, detail=None):
        self.value = value
        self.steps = steps
        self.status = status
        self.detail = detail

    @property
    def halted(self):
        return self.status == RunResult.HALTED

    def __repr__(self):
        if self.halted:
            return f"<run halted steps={self.steps} value={sexpr_print(self.value)[:60]}>"
        return f"<run {self.status} steps={self.steps} {self.detail or ''}>"


class _Exhausted(Exception):
    pass


class _Fault(Exception):
    def __init__(self, detail):
        self.detail = detail


class _Budget:
    __slots__ = ("steps", "fuel")

    def __init__(self, fuel):
        self.steps = 0
        self.fuel = fuel


class _Frame:
    __slots__ = ("env", "budget", "reflective", "self_enc")

    def __init__(self, env, budget, reflective, self_enc):
        self.env = env
        self.budget = budget
        self.reflective = reflective
        self.self_enc = self_enc


def _compile_expr(expr):
    t = type(expr)
    if t is Var:
        name = expr.name

        def run_var(fr):
            b = fr.budget
            b.steps += 1
            if b.steps > b.fuel:
                b.steps = b.fuel
                raise _Exhausted()
            return fr.env.get(name, NIL)
        return run_var
    if t is Quote:
        value = expr.value

        def run_quote(fr):
            b = fr.budget
            b.steps += 1
            if b.steps > b.fuel:
                b.steps = b.fuel
                raise _Exhausted()
            return value
        return run_quote
    if t is Hd:
        arg = _compile_expr(expr.arg)

        def run_hd(fr):
            v = arg(fr)
            b = fr.budget
            b.steps += 1
            if b.steps > b.fuel:
                b.steps = b.fuel
                raise _Exhausted()
            return v.head if type(v) is Pair else NIL
        return run_hd
    if t is Tl:
        arg = _compile_expr(expr.arg)

        def run_tl(fr):
            v = arg(fr)
            b = fr.budget
            b.steps += 1
            if b.steps > b.fuel:
                b.steps = b.fuel
                raise _Exhausted()
            return v.tail if type(v) is Pair else NIL
        return run_tl
    if t is Cons:
        left = _compile_expr(expr.left)
        right = _compile_expr(expr.right)

        def run_cons(fr):
            a = left(fr)
            b_ = right(fr)
            b = fr.budget
            b.steps += 1
            if b.steps > b.fuel:
                b.steps = b.fuel
                raise _Exhausted()
            return Pair(a, b_)
        return run_cons
    if t is Eq:
        left = _compile_expr(expr.left)
        right = _compile_expr(expr.right)

        def run_eq(fr):
            a = left(fr)
            b_ = right(fr)
            b = fr.budget
            b.steps += 1
            if b.steps > b.fuel:
                b.steps = b.fuel
                raise _Exhausted()
            return ONE if equal(a, b_) else NIL
        return run_eq
    if t is IsAtom:
        arg = _compile_expr(expr.arg)

        def run_isatom(fr):
            v = arg(fr)
            b = fr.budget
            b.steps += 1
            if b.steps > b.fuel:
                b.steps = b.fuel
                raise _Exhausted()
            return ONE if type(v) is Atom else NIL
        return run_isatom
    if t is SelfRef:
        def run_self(fr):
            if not fr.reflective:
                raise _Fault("'*' outside reflective mode")
            b = fr.budget
            b.steps += 1
            if b.steps > b.fuel:
                b.steps = b.fuel
                raise _Exhausted()
            return fr.self_enc
        return run_self
    if t is UnivCall:
        prog = _compile_expr(expr.prog)
        arg = _compile_expr(expr.arg)

        def run_univ(fr):
            if not fr.reflective:
                raise _Fault("'univ' call outside reflective mode")
            q_enc = prog(fr)
            d = arg(fr)
            b = fr.budget
            b.steps += 1  # dispatch
            if b.steps > b.fuel:
                b.steps = b.fuel
                raise _Exhausted()
            try:
                q = decode(q_enc, allow_reserved=True)
            except DecodeError as exc:
                raise _Fault(f"univ on a non-program: {exc}") from None
            if len(q.inputs) != 1:
                raise _Fault("univ needs a one-input program")
            return _exec(q, [d], fr.budget, True)
        return run_univ
    raise TypeError(f"cannot compile {expr!r}")


def _compile_command(cmd):
    t = type(cmd)
    if t is Assign:
        name = cmd.var
        expr = _compile_expr(cmd.expr)

        def run_assign(fr):
            v = expr(fr)
            b = fr.budget
            b.steps += 1
            if b.steps > b.fuel:
                b.steps = b.fuel
                raise _Exhausted()
            fr.env[name] = v
        return run_assign
    if t is Seq:
        first = _compile_command(cmd.first)
        second = _compile_command(cmd.second)

        def run_seq(fr):
            first(fr)
            second(fr)
        return run_seq
    if t is While:
        test = _compile_expr(cmd.test)
        body = _compile_command(cmd.body)

        def run_while(fr):
            b = fr.budget
            while True:
                b.steps += 1  # test event
                if b.steps > b.fuel:
                    b.steps = b.fuel
                    raise _Exhausted()
                v = test(fr)
                if type(v) is Atom and v.name == "()":
                    return
                body(fr)
        return run_while
    if t is If:
        test = _compile_expr(cmd.test)
        then = _compile_command(cmd.then)
        orelse = _compile_command(cmd.orelse)

        def run_if(fr):
            b = fr.budget
            b.steps += 1  # test event
            if b.steps > b.fuel:
                b.steps = b.fuel
                raise _Exhausted()
            v = test(fr)
            if type(v) is Atom and v.name == "()":
                orelse(fr)
            else:
                then(fr)
        return run_if
    raise TypeError(f"cannot compile {cmd!r}")


def _compiled(program):
    fn = program._compiled
    if fn is None:
        fn = _compile_command(program.body)
        program._compiled = fn
    return fn


def _exec(program, args, budget, reflective):
    """Run under an existing budget; returns the output value."""
    env = dict(zip(program.inputs, args))
    self_enc = encode(program) if reflective else None
    frame = _Frame(env, budget, reflective, self_enc)
    _compiled(program)(frame)
    budget.steps += 1  # final read of the output variable
    if budget.steps > budget.fuel:
        budget.steps = budget.fuel
        raise _Exhausted()
    return env.get(program.output, NIL)


def run(program, args, fuel=10**7, mode="plain"):
    """Run a program on argument values under a fuel bound.

    Variables other than the inputs start as ``()``; ``hd``/``tl`` of an
    atom are ``()`` (all operators are total).  In reflective mode ``*``
    denotes the running program's text and ``(univ p d)`` runs the
    encoded program ``p`` on ``d`` within the same fuel budget.
    """
    if len(args) != len(program.inputs):
        raise ValueError(
            f"program expects {len(program.inputs)} arguments, got {len(args)}")
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    if mode not in ("plain", "reflective"):
        raise ValueError(f"unknown mode {mode!r}")
    budget = _Budget(fuel)
    try:
        value = _exec(program, args, budget, mode == "reflective")
    except _Exhausted:
        return RunResult(None, budget.steps, RunResult.FUEL)
    except _Fault as f:
        return RunResult(None, budget.steps, RunResult.ERROR, f.detail)
    return RunResult(value, budget.steps, RunResult.HALTED)
