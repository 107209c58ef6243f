"""Symbolic tree values: the universal data domain.

Values are immutable atoms and pairs.  Pair construction reuses its
arguments by reference, so substructures may be shared; sharing is
invisible to structural equality and only observable through
``measure`` (tree size counts shared nodes once per visit, DAG size
once per distinct node).

Concrete text format: ``(a b c)`` abbreviates right-nested pairs ending
in the empty-list atom ``()``; improper tails are written with a dot,
``(a . b)``.
"""

__all__ = [
    "SExpr", "Atom", "Pair", "NIL", "ONE",
    "ParseError", "parse", "sexpr_print", "measure", "tree_size",
    "dag_size", "equal", "is_nil", "truthy", "from_list", "to_list",
    "from_unary", "to_unary",
]


class SExpr:
    """Base class for symbolic tree values."""

    __slots__ = ()

    def __eq__(self, other):
        if not isinstance(other, SExpr):
            return NotImplemented
        return equal(self, other)

    def __ne__(self, other):
        if not isinstance(other, SExpr):
            return NotImplemented
        return not equal(self, other)

    __hash__ = None  # structural equality; keep these out of sets/dicts

    def __repr__(self):
        text = sexpr_print(self)
        if len(text) > 120:
            text = text[:117] + "..."
        return f"<sexpr {text}>"


class Atom(SExpr):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name


class Pair(SExpr):
    __slots__ = ("head", "tail")

    def __init__(self, head, tail):
        self.head = head
        self.tail = tail


#: The empty list, a distinguished atom.  Equal-named atoms are equal, so
#: fresh Atom("()") nodes compare equal to NIL; this constant is just a
#: convenience.
NIL = Atom("()")
ONE = Atom("1")


def is_nil(s):
    return type(s) is Atom and s.name == "()"


def truthy(s):
    """Boolean convention of the flowchart language: () is false."""
    return not is_nil(s)


class ParseError(ValueError):
    """Malformed s-expression text; carries the character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


_DELIMS = "()"


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _DELIMS:
            tokens.append((ch, i))
            i += 1
            continue
        start = i
        while i < n and not text[i].isspace() and text[i] not in _DELIMS:
            i += 1
        tokens.append((text[start:i], start))
    return tokens


def parse(text):
    """Parse one s-expression; reject leftover tokens."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input", 0)
    value, rest = _parse_tokens(tokens, 0)
    if rest != len(tokens):
        raise ParseError("stray tokens after expression", tokens[rest][1])
    return value


def _parse_tokens(tokens, pos):
    tok, offset = tokens[pos]
    if tok == ")":
        raise ParseError("unbalanced ')'", offset)
    if tok == ".":
        raise ParseError("unexpected '.'", offset)
    if tok != "(":
        return Atom(tok), pos + 1

    # list or dotted pair
    pos += 1
    elements = []
    tail = None
    while True:
        if pos >= len(tokens):
            raise ParseError("unbalanced '('", offset)
        tok, toffset = tokens[pos]
        if tok == ")":
            pos += 1
            break
        if tok == ".":
            if not elements or tail is not None:
                raise ParseError("misplaced '.'", toffset)
            pos += 1
            if pos >= len(tokens) or tokens[pos][0] in (")", "."):
                raise ParseError("missing value after '.'", toffset)
            tail, pos = _parse_tokens(tokens, pos)
            continue
        if tail is not None:
            raise ParseError("more than one value after '.'", toffset)
        value, pos = _parse_tokens(tokens, pos)
        elements.append(value)

    if tail is None and not elements:
        return Atom("()"), pos
    result = tail if tail is not None else NIL
    for element in reversed(elements):
        result = Pair(element, result)
    return result, pos


def sexpr_print(s):
    """Canonical text: list notation where the tail chain ends in ().

    Iterative (values may be deeply nested); a () in tail position closes
    the list, any other atom there prints dotted.
    """
    out = []
    stack = [(s, False)]
    while stack:
        entry = stack.pop()
        if entry is None:  # close-paren marker
            out.append(")")
            continue
        node, in_tail = entry
        if type(node) is Atom:
            if in_tail:
                if node.name != "()":
                    out.append(" . ")
                    out.append(node.name)
            else:
                out.append(node.name)
            continue
        if in_tail:
            out.append(" ")
            stack.append((node.tail, True))
            stack.append((node.head, False))
            continue
        out.append("(")
        stack.append(None)
        stack.append((node.tail, True))
        stack.append((node.head, False))
    return "".join(out)


def tree_size(s):
    """Node count with shared nodes counted once per visit.

    Memoised per distinct node, so heavily shared values are still cheap
    to measure (counts can be astronomically larger than the DAG).
    """
    sizes = {}
    stack = [(s, False)]
    while stack:
        node, ready = stack.pop()
        key = id(node)
        if ready:
            sizes[key] = 1 + sizes[id(node.head)] + sizes[id(node.tail)]
            continue
        if key in sizes:
            continue
        if type(node) is Atom:
            sizes[key] = 1
        else:
            stack.append((node, True))
            stack.append((node.tail, False))
            stack.append((node.head, False))
    return sizes[id(s)]


def dag_size(s):
    """Number of distinct nodes reachable (by node identity)."""
    seen = set()
    stack = [s]
    while stack:
        node = stack.pop()
        key = id(node)
        if key in seen:
            continue
        seen.add(key)
        if type(node) is Pair:
            stack.append(node.head)
            stack.append(node.tail)
    return len(seen)


def measure(s):
    """Return (tree_size, dag_size)."""
    return tree_size(s), dag_size(s)


def equal(a, b):
    """Structural equality; identical nodes compare equal without descent."""
    seen = set()
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        key = (id(x), id(y))
        if key in seen:
            continue
        seen.add(key)
        xa = type(x) is Atom
        ya = type(y) is Atom
        if xa != ya:
            return False
        if xa:
            if x.name != y.name:
                return False
            continue
        stack.append((x.head, y.head))
        stack.append((x.tail, y.tail))
    return True


def from_list(items, tail=NIL):
    """Build the right-nested pair chain for a python sequence."""
    result = tail
    for item in reversed(items):
        result = Pair(item, result)
    return result


def to_list(s):
    """Flatten a ()-terminated chain to a python list; error on improper."""
    items = []
    while type(s) is Pair:
        items.append(s.head)
        s = s.tail
    if not is_nil(s):
        raise ValueError("improper list")
    return items


def to_unary(n):
    """Natural number as a unary list: 0 = (), n+1 = (1 . n)."""
    if n < 0:
        raise ValueError("unary encoding is for naturals")
    result = NIL
    for _ in range(n):
        result = Pair(Atom("1"), result)
    return result


def from_unary(s):
    n = 0
    while type(s) is Pair:
        n += 1
        s = s.tail
    if not is_nil(s):
        raise ValueError("not a unary numeral")
    return n
