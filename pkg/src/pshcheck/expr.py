"""A tiny expression language for functions on C^n or R^m.

Grammar (whitespace insignificant):

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := primary ('^' ('-')? INT)?
    primary := NUMBER | 'i' | VAR | FUNC '(' expr (',' expr)* ')' | '(' expr ')'

Variables are z1, z2, ... (complex) or x1, x2, ... (real); an expression
may not mix the two families.  Functions: abs, re, im, conj, log, exp
take one argument; max and min take two or more.  Exponents are integer
literals only.  log requires a real-valued argument, as do max and min;
the expression as a whole must be real-valued to be usable as a test
function.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ExprTypeError, ParseError

UNARY_FUNCS = ("abs", "conj", "exp", "im", "log", "re")
NARY_FUNCS = ("max", "min")


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Lit:
    value: complex


@dataclass(frozen=True)
class Var:
    kind: str  # 'z' or 'x'
    index: int  # 1-based


@dataclass(frozen=True)
class Un:
    op: str  # 'neg' or a unary function name
    child: "Node"


@dataclass(frozen=True)
class Bin:
    op: str  # '+', '-', '*', '/'
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Nary:
    op: str  # 'max' or 'min'
    args: tuple


Node = Lit | Var | Un | Bin | Pow | Nary


# ---------------------------------------------------------------------------
# Tokenizer

_PUNCT = "+-*/^(),"


def _tokenize(text: str):
    """Yield (kind, value, offset) triples; kinds: num, ident, punct, end."""
    i, n = 0, len(text)
    out = []
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _PUNCT:
            out.append(("punct", c, i))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                if j >= n or not text[j].isdigit():
                    raise ParseError("digit required after decimal point", j)
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k >= n or not text[k].isdigit():
                    raise ParseError("malformed exponent in number", j)
                j = k
                while j < n and text[j].isdigit():
                    j += 1
            out.append(("num", text[i:j], i))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("ident", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    out.append(("end", "", n))
    return out


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def advance(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect_punct(self, ch: str):
        kind, val, off = self.peek()
        if kind == "punct" and val == ch:
            return self.advance()
        raise ParseError(self._unexpected(), off, expected=(f"'{ch}'",))

    def _unexpected(self) -> str:
        kind, val, _ = self.peek()
        if kind == "end":
            return "unexpected end of input"
        return f"unexpected token {val!r}"

    def parse(self) -> Node:
        node = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ParseError(
                f"unexpected trailing token {val!r}",
                off,
                expected=("'+'", "'-'", "'*'", "'/'", "end of input"),
            )
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "punct" and val in "+-":
                self.advance()
                node = Bin(val, node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "punct" and val in "*/":
                self.advance()
                node = Bin(val, node, self.factor())
            else:
                return node

    def factor(self) -> Node:
        kind, val, _ = self.peek()
        if kind == "punct" and val == "-":
            self.advance()
            return Un("neg", self.factor())
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        kind, val, _ = self.peek()
        if kind == "punct" and val == "^":
            self.advance()
            return Pow(base, self.int_exponent())
        return base

    def int_exponent(self) -> int:
        sign = 1
        kind, val, off = self.peek()
        if kind == "punct" and val == "-":
            self.advance()
            sign = -1
            kind, val, off = self.peek()
        if kind != "num":
            raise ParseError(self._unexpected(), off, expected=("integer exponent",))
        if "." in val or "e" in val or "E" in val:
            raise ParseError(
                f"exponent must be an integer literal, got {val!r}",
                off,
                expected=("integer exponent",),
            )
        self.advance()
        return sign * int(val)

    def primary(self) -> Node:
        kind, val, off = self.peek()
        if kind == "num":
            self.advance()
            return Lit(complex(float(val)))
        if kind == "punct" and val == "(":
            self.advance()
            node = self.expr()
            self.expect_punct(")")
            return node
        if kind == "ident":
            self.advance()
            if val == "i":
                return Lit(1j)
            nxt_kind, nxt_val, _ = self.peek()
            if nxt_kind == "punct" and nxt_val == "(":
                return self.call(val, off)
            return self.variable(val, off)
        raise ParseError(
            self._unexpected(),
            off,
            expected=("number", "variable", "function", "'('", "'-'"),
        )

    def variable(self, name: str, off: int) -> Node:
        if len(name) >= 2 and name[0] in "zx" and name[1:].isdigit():
            index = int(name[1:])
            if index >= 1 and not name[1] == "0":
                return Var(name[0], index)
        if name in UNARY_FUNCS or name in NARY_FUNCS:
            raise ParseError(
                f"function {name!r} must be followed by '('", off, expected=("'('",)
            )
        raise ParseError(
            f"unknown identifier {name!r} (variables are z1, z2, ... or x1, x2, ...)",
            off,
        )

    def call(self, name: str, off: int) -> Node:
        if name not in UNARY_FUNCS and name not in NARY_FUNCS:
            raise ParseError(f"unknown function {name!r}", off)
        self.expect_punct("(")
        args = [self.expr()]
        while True:
            kind, val, _ = self.peek()
            if kind == "punct" and val == ",":
                self.advance()
                args.append(self.expr())
            else:
                break
        self.expect_punct(")")
        if name in UNARY_FUNCS:
            if len(args) != 1:
                raise ParseError(
                    f"function {name!r} takes exactly 1 argument, got {len(args)}", off
                )
            return Un(name, args[0])
        if len(args) < 2:
            raise ParseError(
                f"function {name!r} takes at least 2 arguments, got {len(args)}", off
            )
        return Nary(name, tuple(args))


def parse(text: str) -> Node:
    """Parse an expression; raises ParseError with a byte offset on failure."""
    if not isinstance(text, str):
        raise ParseError(f"expression must be a string, got {type(text).__name__}", 0)
    if not text.strip():
        raise ParseError("empty expression", 0)
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Static analysis


def infer_type(node: Node) -> str:
    """Return 'real' or 'complex'; raises ExprTypeError on ill-typed input."""
    if isinstance(node, Lit):
        return "real" if node.value.imag == 0.0 else "complex"
    if isinstance(node, Var):
        return "complex" if node.kind == "z" else "real"
    if isinstance(node, Un):
        ct = infer_type(node.child)
        if node.op in ("neg", "conj", "exp"):
            return ct
        if node.op in ("abs", "re", "im"):
            return "real"
        if node.op == "log":
            if ct != "real":
                raise ExprTypeError(
                    f"log requires a real argument; {to_text(node.child)!r} is complex"
                )
            return "real"
        raise ExprTypeError(f"unknown unary operation {node.op!r}")
    if isinstance(node, Bin):
        lt = infer_type(node.left)
        rt = infer_type(node.right)
        return "complex" if "complex" in (lt, rt) else "real"
    if isinstance(node, Pow):
        return infer_type(node.base)
    if isinstance(node, Nary):
        for arg in node.args:
            if infer_type(arg) != "real":
                raise ExprTypeError(
                    f"{node.op} requires real arguments; {to_text(arg)!r} is complex"
                )
        return "real"
    raise ExprTypeError(f"unknown node {node!r}")


def variable_profile(node: Node) -> tuple[str, int]:
    """Return (family, dimension): family 'z', 'x', or 'any' if no variables.

    Raises ExprTypeError when z- and x-variables appear together.
    """
    kinds: set[str] = set()
    max_index = 0

    def walk(nd: Node):
        nonlocal max_index
        if isinstance(nd, Var):
            kinds.add(nd.kind)
            max_index = max(max_index, nd.index)
        elif isinstance(nd, Un):
            walk(nd.child)
        elif isinstance(nd, Bin):
            walk(nd.left)
            walk(nd.right)
        elif isinstance(nd, Pow):
            walk(nd.base)
        elif isinstance(nd, Nary):
            for a in nd.args:
                walk(a)

    walk(node)
    if kinds == {"z", "x"}:
        raise ExprTypeError(
            "expression mixes complex variables (z1, ...) with real variables (x1, ...)"
        )
    if not kinds:
        return "any", 0
    return kinds.pop(), max_index


def require_real(node: Node) -> None:
    """Test functions must be real-valued; reject complex-typed roots."""
    if infer_type(node) != "real":
        raise ExprTypeError(
            f"expression {to_text(node)!r} is complex-valued; "
            "wrap it in re(), im(), or abs()"
        )


# ---------------------------------------------------------------------------
# Canonical printing (parse(to_text(t)) reproduces t exactly)

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


def _fmt_real(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _render(node: Node, ctx: int) -> str:
    if isinstance(node, Lit):
        if node.value == 1j:
            return "i"
        return _fmt_real(node.value.real)
    if isinstance(node, Var):
        return f"{node.kind}{node.index}"
    if isinstance(node, Un):
        if node.op == "neg":
            body = "-" + _render(node.child, _PREC_NEG)
            return f"({body})" if ctx > _PREC_NEG else body
        return f"{node.op}({_render(node.child, 0)})"
    if isinstance(node, Bin):
        prec = _PREC_ADD if node.op in "+-" else _PREC_MUL
        left = _render(node.left, prec)
        right = _render(node.right, prec + 1)
        body = f"{left}{node.op}{right}"
        return f"({body})" if ctx > prec else body
    if isinstance(node, Pow):
        base = _render(node.base, _PREC_ATOM)
        body = f"{base}^{node.exponent}"
        return f"({body})" if ctx > _PREC_POW else body
    if isinstance(node, Nary):
        inner = ",".join(_render(a, 0) for a in node.args)
        return f"{node.op}({inner})"
    raise TypeError(f"not an expression node: {node!r}")


def to_text(node: Node) -> str:
    """Canonical text form of an AST; reparsing it yields an equal tree."""
    return _render(node, 0)
