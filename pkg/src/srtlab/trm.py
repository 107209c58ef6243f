"""The 1# term register machine: string programs over {1,#}.

A program is a string of instructions 1^n #^k (1 <= k <= 5):

    1^n #      append 1 to register n
    1^n ##     append # to register n
    1^n ###    jump forward n instructions
    1^n ####   jump backward n instructions
    1^n #####  case on register n: empty, advance 1; leading 1 (consumed),
               advance 2; leading # (consumed), advance 3

Execution starts at instruction 1 with the arguments in R1, R2, ...;
the result is whatever R1 holds when the counter lands exactly one past
the final instruction (anywhere else out of range is an abnormal halt).
One step per executed instruction.

Because jumps are relative, programs compose by plain concatenation:
run(p | q) is run(q) after run(p) whenever p halts normally.  The
toolkit below (move, write, diag, s11) and both fixpoint constructions
exploit exactly that.

The ``fast_assign`` variant executes any program segment textually equal
to a move block as a single step.  This changes cost, never text or
behaviour, so the same program can be timed under both variants.
"""

from collections import deque

__all__ = [
    "TrmProgram", "TrmResult", "TrmParseError",
    "trm_parse", "trm_print", "trm_run", "trm_compose",
    "trm_move", "trm_erase", "write_code", "trm_write_program",
    "trm_diag_program", "trm_s11_program",
    "trm_moss_qhat", "trm_moss_fixpoint", "trm_kleene_fixpoint",
    "setup_boundary",
]

_MAX_HASHES = 5
_OPS = {1: "one", 2: "hash", 3: "fwd", 4: "back", 5: "case"}


class TrmParseError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def trm_parse(raw):
    """Parse a {1,#} string into a program."""
    return TrmProgram(raw)


def _parse_instructions(raw):
    instrs = []
    i, n = 0, len(raw)
    while i < n:
        start = i
        while i < n and raw[i] == "1":
            i += 1
        ones = i - start
        if ones == 0:
            raise TrmParseError("instruction must start with 1s", i)
        hstart = i
        while i < n and raw[i] == "#":
            i += 1
        hashes = i - hstart
        if hashes == 0:
            raise TrmParseError("instruction lacks #s", start)
        if hashes > _MAX_HASHES:
            raise TrmParseError("too many #s in one instruction", hstart)
        instrs.append((_OPS[hashes], ones))
    return tuple(instrs)


def trm_print(program):
    """Serialise back to the raw {1,#} string."""
    return program.raw


def _instr_text(instr):
    op, n = instr
    hashes = {"one": 1, "hash": 2, "fwd": 3, "back": 4, "case": 5}[op]
    return "1" * n + "#" * hashes


class TrmProgram:
    __slots__ = ("raw", "instrs", "_movemap")

    def __init__(self, raw, instrs=None):
        bad = next((k for k, ch in enumerate(raw) if ch not in "1#"), None)
        if bad is not None:
            raise TrmParseError(f"illegal character {raw[bad]!r}", bad)
        self.raw = raw
        self.instrs = _parse_instructions(raw) if instrs is None else instrs
        self._movemap = None

    @classmethod
    def from_instrs(cls, instrs):
        instrs = tuple(instrs)
        raw = "".join(_instr_text(i) for i in instrs)
        return cls(raw, instrs)

    def __len__(self):
        return len(self.instrs)

    def __repr__(self):
        text = self.raw if len(self.raw) <= 40 else self.raw[:37] + "..."
        return f"<1# program [{len(self.instrs)} instrs] {text}>"

    def movemap(self):
        """Positions (1-based) where a move block starts -> (src, dst)."""
        if self._movemap is None:
            found = {}
            instrs = self.instrs
            span = _MOVE_BLOCK_LEN
            for k in range(len(instrs) - span + 1):
                if instrs[k][0] != "case":
                    continue
                pair = _MOVE_PATTERNS.get(instrs[k:k + span])
                if pair is not None:
                    found[k + 1] = pair
            self._movemap = found
        return self._movemap


# ---------------------------------------------------------------------------
# assembly of the toolkit blocks

def _assemble(entries):
    """Two-pass assembly of labelled entries into instruction tuples.

    Entries: ('label', name) markers, ('jump', target) with target a
    label name or 'end' (one past the block), and direct instructions
    ('one'|'hash'|'case', register).
    """
    labels = {}
    pos = 1
    for entry in entries:
        if entry[0] == "label":
            labels[entry[1]] = pos
        else:
            pos += 1
    labels["end"] = pos
    instrs = []
    here = 1
    for entry in entries:
        kind = entry[0]
        if kind == "label":
            continue
        if kind == "jump":
            delta = labels[entry[1]] - here
            if delta == 0:
                raise ValueError("zero-length jump")
            instrs.append(("fwd", delta) if delta > 0 else ("back", -delta))
        else:
            instrs.append(entry)
        here += 1
    return instrs


def _move_instrs(i, j):
    if i == j:
        raise ValueError("move needs distinct registers")
    return _assemble([
        ("label", "top"),
        ("case", i),
        ("jump", "end"),
        ("jump", "one"),
        ("hash", j),
        ("jump", "top"),
        ("label", "one"),
        ("one", j),
        ("jump", "top"),
    ])


_MOVE_BLOCK_LEN = len(_move_instrs(1, 2))
_MOVE_PATTERNS = {
    tuple(_move_instrs(i, j)): (i, j)
    for i in range(1, 9) for j in range(1, 9) if i != j
}


def trm_move(i, j):
    """Program: append R_i to the right end of R_j, emptying R_i."""
    return TrmProgram.from_instrs(_move_instrs(i, j))


def trm_erase(i):
    """Program: empty register i."""
    return TrmProgram.from_instrs(_assemble([
        ("label", "top"),
        ("case", i),
        ("jump", "end"),
        ("jump", "top"),
        ("jump", "top"),
    ]))


def write_code(text):
    """The program that, run on empty registers, leaves ``text`` in R1.

    One append instruction per symbol; this is what the write program
    outputs, and also how constants are embedded into generated code.
    """
    return "".join("1#" if ch == "1" else "1##" for ch in text)


def _wcode_instrs(text):
    return [("one", 1) if ch == "1" else ("hash", 1) for ch in text]


def _emit_loop(src, dst):
    """Loop: pop each symbol of R_src, appending its write-code to R_dst."""
    return _assemble([
        ("label", "top"),
        ("case", src),
        ("jump", "end"),
        ("jump", "one"),
        ("one", dst),       # saw '#': emit 1##
        ("hash", dst),
        ("hash", dst),
        ("jump", "top"),
        ("label", "one"),   # saw '1': emit 1#
        ("one", dst),
        ("hash", dst),
        ("jump", "top"),
    ])


def trm_write_program():
    """On input x in R1, leaves write_code(x) in R1.  Uses R2."""
    return TrmProgram.from_instrs(_emit_loop(1, 2) + _move_instrs(2, 1))


def _dup_loop():
    """Pop R1, emitting write-code into R2 and a plain copy into R3."""
    return _assemble([
        ("label", "top"),
        ("case", 1),
        ("jump", "end"),
        ("jump", "one"),
        ("one", 2),         # saw '#'
        ("hash", 2),
        ("hash", 2),
        ("hash", 3),
        ("jump", "top"),
        ("label", "one"),   # saw '1'
        ("one", 2),
        ("hash", 2),
        ("one", 3),
        ("jump", "top"),
    ])


def trm_diag_program():
    """On an encoded program r in R1, leaves write_code(r) + r in R1.

    The output program, run on empty registers, first rebuilds r in R1
    and then falls into r itself: it computes r applied to r's own text.
    Uses R2 and R3.
    """
    return TrmProgram.from_instrs(
        _dup_loop() + _move_instrs(3, 2) + _move_instrs(2, 1))


def _copy_loop():
    """Pop R1, copying each symbol into both R2 and R3."""
    return _assemble([
        ("label", "top"),
        ("case", 1),
        ("jump", "end"),
        ("jump", "one"),
        ("hash", 2),
        ("hash", 3),
        ("jump", "top"),
        ("label", "one"),
        ("one", 2),
        ("one", 3),
        ("jump", "top"),
    ])


def trm_s11_program():
    """Specialiser: on (p, s) in (R1, R2), leaves in R1 a program t with
    run(t, [d]) = run(p, [s, d]).

    The output has the fixed shape  move(1,2) + write_code(s) + p : it
    shelves its own argument into R2, rebuilds s in R1, then runs p.
    Built from the toolkit blocks; uses R3.
    """
    mv12_raw = trm_move(1, 2).raw
    instrs = (
        _move_instrs(1, 3)            # stash p
        + _move_instrs(2, 1)          # bring s into R1
        + _emit_loop(1, 2)            # R2 := write_code(s)
        + _move_instrs(2, 1)          # R1 := write_code(s)
        + _move_instrs(1, 2)          # park it in R2
        + _wcode_instrs(mv12_raw)     # R1 := move(1,2) text
        + _move_instrs(2, 1)          # R1 := move(1,2) + write_code(s)
        + _move_instrs(3, 1)          # append p
    )
    return TrmProgram.from_instrs(instrs)


def trm_compose(p, q):
    """Concatenation; behaves as q after p when p halts normally."""
    return TrmProgram(p.raw + q.raw)


def trm_moss_qhat(p):
    """The Moss generator for a two-input program p.

    On an encoded program r in R1 it emits
        move(1,4) + (write_code(r) + r) + move(4,2) + p
    i.e. a program that stashes its input, computes r on its own text
    into R1, restores the input into R2, and runs p.
    """
    return TrmProgram(
        trm_diag_program().raw
        + trm_move(1, 2).raw
        + write_code(trm_move(1, 4).raw)
        + trm_move(2, 1).raw
        + write_code(trm_move(4, 2).raw)
        + write_code(p.raw)
    )


def trm_moss_fixpoint(p, fuel=10**7):
    """Run the Moss generator on its own text."""
    qhat = trm_moss_qhat(p)
    result = trm_run(qhat, [qhat.raw], fuel)
    if result.status != "halted":
        raise RuntimeError(f"generator run failed: {result.status}")
    return TrmProgram(result.output)


def trm_kleene_fixpoint(p, fuel=10**7):
    """Kleene's construction: specialise the intermediate program to itself.

    The intermediate program p~ reads (q, d) and computes
    p(s11(q, q), d): stash d in R4, duplicate q, run the specialiser
    body, restore d, run p.  Then p* = run(s11, [p~, p~]).
    """
    s11 = trm_s11_program()
    p_tilde = TrmProgram.from_instrs(
        _move_instrs(2, 4)
        + _copy_loop() + _move_instrs(3, 1)   # R1 = q, R2 = q
        + list(s11.instrs)
        + _move_instrs(4, 2)
        + list(p.instrs)
    )
    result = trm_run(s11, [p_tilde.raw, p_tilde.raw], fuel)
    if result.status != "halted":
        raise RuntimeError(f"specialiser run failed: {result.status}")
    return TrmProgram(result.output)


def setup_boundary(pstar, p):
    """First instruction index of the embedded copy of p inside p*.

    Both constructions produce p* with p as its final segment; the steps
    spent before control first reaches that segment are the set-up phase
    (computing the self-copy).
    """
    k = len(pstar.instrs) - len(p.instrs)
    if k < 0 or pstar.instrs[k:] != p.instrs:
        raise ValueError("p is not a suffix of p*")
    return k + 1


# ---------------------------------------------------------------------------
# execution

class TrmResult:
    __slots__ = ("output", "steps", "status", "setup_steps", "registers")

    HALTED = "halted"
    FUEL = "fuel_exhausted"
    ABNORMAL = "abnormal_halt"

    def __init__(self, output, steps, status, setup_steps, registers):
        self.output = output
        self.steps = steps
        self.status = status
        self.setup_steps = setup_steps
        self.registers = registers

    def __repr__(self):
        return f"<1# run {self.status} steps={self.steps} |R1|={len(self.output)}>"


def trm_run(program, inputs, fuel=10**7, variant="standard", boundary=None):
    """Execute with the arguments in R1, R2, ...; result is R1.

    ``boundary`` (instruction index) marks where the set-up phase ends:
    ``setup_steps`` records the count when control first reaches it.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    if variant not in ("standard", "fast_assign"):
        raise ValueError(f"unknown variant {variant!r}")
    regs = {}
    for idx, text in enumerate(inputs, start=1):
        for ch in text:
            if ch not in "1#":
                raise ValueError("register contents must be over {1,#}")
        regs[idx] = deque(text)
    instrs = program.instrs
    length = len(instrs)
    movemap = program.movemap() if variant == "fast_assign" else None
    pc = 1
    steps = 0
    setup = None
    status = None
    while True:
        if boundary is not None and setup is None and pc >= boundary:
            setup = steps
        if pc == length + 1:
            status = TrmResult.HALTED
            break
        if pc < 1 or pc > length:
            status = TrmResult.ABNORMAL
            break
        if movemap is not None:
            pair = movemap.get(pc)
            if pair is not None:
                steps += 1
                if steps > fuel:
                    steps = fuel
                    status = TrmResult.FUEL
                    break
                src = regs.get(pair[0])
                if src:
                    regs.setdefault(pair[1], deque()).extend(src)
                    src.clear()
                pc += _MOVE_BLOCK_LEN
                continue
        steps += 1
        if steps > fuel:
            steps = fuel
            status = TrmResult.FUEL
            break
        op, n = instrs[pc - 1]
        if op == "one":
            regs.setdefault(n, deque()).append("1")
            pc += 1
        elif op == "hash":
            regs.setdefault(n, deque()).append("#")
            pc += 1
        elif op == "case":
            reg = regs.get(n)
            if not reg:
                pc += 1
            elif reg.popleft() == "1":
                pc += 2
            else:
                pc += 3
        elif op == "fwd":
            pc += n
        else:
            pc -= n
    registers = {k: "".join(v) for k, v in regs.items() if v}
    output = registers.get(1, "")
    return TrmResult(output, steps, status, setup, registers)
