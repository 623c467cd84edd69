"""Surface language for differential rational functions.

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' exponent)?
    exponent:= INT | '(' INT ')'
    atom    := NUMBER | NAME | '(' expr ')'
             | 'D' '(' expr (',' INT)? ')' | 'dot' '(' expr ',' expr ')'
             | 'det' '(' expr (',' expr)* ')'

NUMBER is INT or INT/INT written without spaces.  Scalar names are x1..xn
and the auxiliaries (g, s, y, t, r, optionally numbered); 'x' is the vector
(x1, ..., xn) and zk the vector D(x, k-1).  D always denotes the base
derivation; reparametrization is a command-level choice.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Tuple, Union

from .jets import COORDINATE, JetSpace, display_key, split_symbol, x
from .matrix import JetMatrix, det
from .polynomial import DiffPolynomial, monomial_key
from .rational import DiffRational, rational_sum

FUNCTIONS = ("D", "dot", "det")
VECTOR_BLOCK = "z"


class ParseError(ValueError):
    """Syntax error at a character position of the input."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariableError(ParseError):
    """A name outside the declared variable universe."""


# ----------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Deriv:
    operand: "Expr"
    order: int = 1


@dataclass(frozen=True)
class Dot:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Det:
    args: Tuple["Expr", ...]


Expr = Union[Num, Var, Neg, BinOp, Pow, Deriv, Dot, Det]


# ----------------------------------------------------------------------
# Tokenizer

class Token(NamedTuple):
    kind: str  # INT, NAME, OP, END
    text: str
    position: int

    @property
    def end(self) -> int:
        return self.position + len(self.text)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]+\d*)|([-+*/^(),]))")


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN.match(text, position)
        if not match:
            offset = len(text[position:]) - len(text[position:].lstrip())
            raise ParseError(f"unexpected character {text[position + offset]!r}", position + offset)
        number, name, op = match.groups()
        start = match.start(match.lastindex)
        if number is not None:
            tokens.append(Token("INT", number, start))
        elif name is not None:
            tokens.append(Token("NAME", name, start))
        else:
            tokens.append(Token("OP", op, start))
        position = match.end()
    tokens.append(Token("END", "", len(text)))
    return tokens


# ----------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _is(self, text: str) -> bool:
        return self.current.kind == "OP" and self.current.text == text

    def _expect(self, text: str) -> Token:
        if not self._is(text):
            found = self.current.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", self.current.position)
        return self._advance()

    def parse(self) -> Expr:
        expr = self._expr()
        if self.current.kind != "END":
            raise ParseError(f"unexpected {self.current.text!r}", self.current.position)
        return expr

    def _expr(self) -> Expr:
        node = self._term()
        while self._is("+") or self._is("-"):
            op = self._advance().text
            node = BinOp(op, node, self._term())
        return node

    def _term(self) -> Expr:
        node = self._unary()
        while self._is("*") or self._is("/"):
            op = self._advance().text
            node = BinOp(op, node, self._unary())
        return node

    def _unary(self) -> Expr:
        if self._is("-"):
            self._advance()
            return Neg(self._unary())
        return self._power()

    def _power(self) -> Expr:
        base = self._atom()
        if self._is("^"):
            self._advance()
            return Pow(base, self._exponent())
        return base

    def _exponent(self) -> int:
        token = self.current
        if token.kind == "INT":
            self._advance()
            return int(token.text)
        if self._is("("):
            self._advance()
            inner = self.current
            if inner.kind != "INT":
                raise ParseError("exponent must be a nonnegative integer", inner.position)
            value = self._number()
            self._expect(")")
            if value.denominator != 1:
                raise ParseError("non-integer exponent", inner.position)
            return int(value)
        raise ParseError("exponent must be a nonnegative integer", token.position)

    def _number(self) -> Fraction:
        """INT, or INT/INT when written without spaces."""
        token = self._advance()
        slash, after = self.current, self._peek()
        if (slash.kind == "OP" and slash.text == "/" and slash.position == token.end
                and after.kind == "INT" and after.position == slash.end):
            self.index += 2
            if int(after.text) == 0:
                raise ParseError("zero denominator in a literal", after.position)
            return Fraction(int(token.text), int(after.text))
        return Fraction(int(token.text))

    def _atom(self) -> Expr:
        token = self.current
        if token.kind == "INT":
            return Num(self._number())
        if self._is("("):
            self._advance()
            node = self._expr()
            self._expect(")")
            return node
        if token.kind == "NAME":
            self._advance()
            if self._is("("):
                return self._call(token)
            return Var(token.text)
        found = token.text or "end of input"
        raise ParseError(f"unexpected {found!r}", token.position)

    def _call(self, name: Token) -> Expr:
        if name.text not in FUNCTIONS:
            raise ParseError(f"unknown function {name.text!r}", name.position)
        self._expect("(")
        args = [self._expr()]
        if name.text == "D":
            order = 1
            if self._is(","):
                self._advance()
                token = self.current
                if token.kind != "INT":
                    raise ParseError("derivative order must be a positive integer", token.position)
                order = int(self._advance().text)
                if order < 1:
                    raise ParseError("derivative order must be a positive integer", token.position)
            self._expect(")")
            return Deriv(args[0], order)
        while self._is(","):
            self._advance()
            args.append(self._expr())
        self._expect(")")
        if name.text == "dot":
            if len(args) != 2:
                raise ParseError("dot takes two arguments", name.position)
            return Dot(args[0], args[1])
        return Det(tuple(args))


def parse(text: str) -> Expr:
    """Parse text into an Expr; ParseError carries the failing position."""
    return _Parser(text).parse()


# ----------------------------------------------------------------------
# Printer

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _precedence(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PRECEDENCE[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _format_number(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def print_expr(node: Expr) -> str:
    """Text that parses back to the same tree."""
    if isinstance(node, Num):
        return _format_number(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        inner = print_expr(node.operand)
        return f"-{inner}" if _precedence(node.operand) >= 3 else f"-({inner})"
    if isinstance(node, Pow):
        base = print_expr(node.base)
        if _precedence(node.base) < 5:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Deriv):
        inner = print_expr(node.operand)
        return f"D({inner})" if node.order == 1 else f"D({inner},{node.order})"
    if isinstance(node, Dot):
        return f"dot({print_expr(node.left)},{print_expr(node.right)})"
    if isinstance(node, Det):
        return "det(" + ",".join(print_expr(arg) for arg in node.args) + ")"
    precedence = _PRECEDENCE[node.op]
    left = print_expr(node.left)
    if _precedence(node.left) < precedence:
        left = f"({left})"
    right = print_expr(node.right)
    if _precedence(node.right) <= precedence or (node.op == "/" and right[:1].isdigit()):
        right = f"({right})"
    if node.op in "+-":
        return f"{left} {node.op} {right}"
    return f"{left}{node.op}{right}"


# ----------------------------------------------------------------------
# Lowering

Value = Union[DiffRational, Tuple[DiffRational, ...]]


def _vector_of(name: str, space: JetSpace, position: int) -> Optional[Tuple[DiffRational, ...]]:
    if name == COORDINATE:
        return tuple(DiffRational.variable(key) for key in space.coordinates(0))
    base, index = split_symbol(name)
    if base == VECTOR_BLOCK and index >= 1:
        return tuple(DiffRational.variable(key) for key in space.coordinates(index - 1))
    if base == VECTOR_BLOCK:
        raise UnknownVariableError(f"vector blocks start at z1, got {name!r}", position)
    return None


def _scalar(value: Value, what: str) -> DiffRational:
    if isinstance(value, tuple):
        raise ValueError(f"{what} needs a scalar, got a vector")
    return value


def _derive(value: Value, order: int) -> Value:
    if isinstance(value, tuple):
        return tuple(_derive(v, order) for v in value)
    for _ in range(order):
        value = value.derive()
    return value


def _combine(op: str, left: Value, right: Value) -> Value:
    left_vec, right_vec = isinstance(left, tuple), isinstance(right, tuple)
    if op in "+-":
        if left_vec != right_vec:
            raise ValueError("cannot add a scalar and a vector")
        if left_vec:
            if len(left) != len(right):
                raise ValueError("vector length mismatch")
            return tuple(_combine(op, a, b) for a, b in zip(left, right))
        return left + right if op == "+" else left - right
    if op == "*":
        if left_vec and right_vec:
            raise ValueError("use dot(u,v) for the product of two vectors")
        if left_vec:
            return tuple(a * right for a in left)
        if right_vec:
            return tuple(left * b for b in right)
        return left * right
    if right_vec:
        raise ValueError("cannot divide by a vector")
    if left_vec:
        return tuple(a / right for a in left)
    return left / right


def _lower(node: Expr, space: JetSpace) -> Value:
    if isinstance(node, Num):
        return DiffRational.of(node.value)
    if isinstance(node, Var):
        vector = _vector_of(node.name, space, 0)
        if vector is not None:
            return vector
        key = space.resolve(node.name)
        if key is None:
            try:
                base, index = split_symbol(node.name)
            except ValueError:
                base, index = node.name, 0
            if base == COORDINATE and index > space.n:
                raise ValueError(f"dimension mismatch: {node.name} in a space of dimension {space.n}")
            raise UnknownVariableError(f"unknown variable {node.name!r}", 0)
        return DiffRational.variable(key)
    if isinstance(node, Neg):
        value = _lower(node.operand, space)
        return tuple(-v for v in value) if isinstance(value, tuple) else -value
    if isinstance(node, BinOp):
        return _combine(node.op, _lower(node.left, space), _lower(node.right, space))
    if isinstance(node, Pow):
        return _scalar(_lower(node.base, space), "^") ** node.exponent
    if isinstance(node, Deriv):
        return _derive(_lower(node.operand, space), node.order)
    if isinstance(node, Dot):
        left, right = _lower(node.left, space), _lower(node.right, space)
        if not (isinstance(left, tuple) and isinstance(right, tuple)) or len(left) != len(right):
            raise ValueError("dot needs two vectors of the same length")
        return rational_sum(a * b for a, b in zip(left, right))
    if isinstance(node, Det):
        columns = [_lower(arg, space) for arg in node.args]
        if not all(isinstance(c, tuple) and len(c) == len(columns) for c in columns):
            raise ValueError(f"det needs {len(columns)} vectors of length {len(columns)}")
        value = det(JetMatrix.from_columns(columns))
        return DiffRational.of(value)
    raise TypeError(f"not an expression node: {node!r}")


def lower(node: Expr, space: JetSpace) -> DiffRational:
    """The DiffRational denoted by a closed scalar expression."""
    value = _lower(node, space)
    if isinstance(value, tuple):
        raise ValueError("expression denotes a vector, not a scalar")
    space.validate(value.variables())
    return value


def parse_rational(text: str, space: JetSpace) -> DiffRational:
    return lower(parse(text), space)


# ----------------------------------------------------------------------
# Canonical form of lowered values

def _monomial_expr(mono) -> Optional[Expr]:
    node = None
    for key, exp in sorted(mono, key=lambda item: display_key(item[0])):
        factor: Expr = Var(key.symbol)
        if key.order:
            factor = Deriv(factor, key.order)
        if exp > 1:
            factor = Pow(factor, exp)
        node = factor if node is None else BinOp("*", node, factor)
    return node


def _polynomial_expr(p: DiffPolynomial) -> Expr:
    node: Optional[Expr] = None
    for mono in sorted(p.terms, key=monomial_key):
        coeff = p.terms[mono]
        body = _monomial_expr(mono)
        magnitude = abs(coeff)
        if body is None:
            term: Expr = Num(magnitude)
        elif magnitude == 1:
            term = body
        else:
            term = BinOp("*", Num(magnitude), body)
        if node is None:
            node = term if coeff > 0 else Neg(term)
        else:
            node = BinOp("+" if coeff > 0 else "-", node, term)
    return node if node is not None else Num(Fraction(0))


def to_expr(f) -> Expr:
    """Canonical tree: constant first, monomials ascending, factors by jet order."""
    f = DiffRational.of(f)
    num = _polynomial_expr(f.num)
    if f.den.is_constant() and f.den.constant_term() == 1:
        return num
    return BinOp("/", num, _polynomial_expr(f.den))


def format_rational(f) -> str:
    return print_expr(to_expr(f))
