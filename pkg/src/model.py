"""Constraint models as a shared expression DAG with per-node range enclosures."""

from __future__ import annotations

from dataclasses import dataclass, replace
from decimal import Decimal
from fractions import Fraction
import logging
import re
from typing import Union

from src.errors import ModelDefinitionError, ModelSyntaxError
from src.interval import (
    ENTIRE,
    ONE,
    STD_FUNCTIONS,
    Interval,
    add,
    div,
    empty,
    eval_std,
    intersect,
    mul,
    neg,
    sub,
)

logger = logging.getLogger(__name__)

VARIABLE = "variable"
CONSTANT = "constant"
UNARY = "unary-op"
BINARY = "binary-op"
FUNCTION = "std-function"
COMPARISON = "comparison-chain"

RELATIONS = ("=", "<=", ">=")
_CLOSED_FORMS = {"<": "<=", ">": ">="}
_BOOLEAN_WORDS = {"and", "or", "not", "xor", "true", "false"}

Payload = Union[str, Fraction, tuple[str, ...], None]


@dataclass(frozen=True, slots=True)
class ExprNode:
    kind: str
    operands: tuple[int, ...] = ()
    payload: Payload = None
    enclosure: Interval = ENTIRE


@dataclass(frozen=True, slots=True)
class Model:
    """Parsed model: ``nodes`` is the shared store, operands always precede users."""

    nodes: tuple[ExprNode, ...]
    roots: tuple[int, ...]
    variables: dict[str, Interval]
    infeasible: str | None = None

    def node(self, index: int) -> ExprNode:
        return self.nodes[index]


# --- tokenizer ------------------------------------------------------------------

_TOKEN_PATTERN = re.compile(
    r"""
    (?P<space>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*)
  | (?P<op><=|>=|<|>|=|\+|-|\*|/|\(|\)|\[|\]|,|;)
  | (?P<boolean>&&|\|\||[&|!~])
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, line_start = 1, 0
    for match in _TOKEN_PATTERN.finditer(text):
        kind = match.lastgroup or "bad"
        column = match.start() - line_start + 1
        if kind == "newline":
            line += 1
            line_start = match.end()
            continue
        if kind in {"space", "comment"}:
            continue
        lexeme = match.group()
        if kind == "boolean" or (kind == "ident" and lexeme.casefold() in _BOOLEAN_WORDS):
            raise ModelSyntaxError(f"unsupported construct {lexeme!r} (Boolean statements)", line, column)
        if kind == "bad":
            raise ModelSyntaxError(f"unexpected character {lexeme!r}", line, column)
        tokens.append(_Token(kind, lexeme, line, column))
    tokens.append(_Token("end", "", line, len(text) - line_start + 1))
    return tokens


# --- parser ---------------------------------------------------------------------
# The parser produces nested tuples; constants are folded exactly before the tree
# is interned into the shared node store.

_Ast = tuple


def _fold_binary(op: str, left: _Ast, right: _Ast) -> _Ast:
    if left[0] == "const" and right[0] == "const":
        a, b = left[1], right[1]
        if op == "+":
            return ("const", a + b)
        if op == "-":
            return ("const", a - b)
        if op == "*":
            return ("const", a * b)
        if b != 0:
            return ("const", a / b)
    return ("bin", op, left, right)


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.position = 0
        self.statements: list[_Ast] = []
        self.domains: dict[str, tuple[Fraction, Fraction]] = {}

    @property
    def current(self) -> _Token:
        return self.tokens[self.position]

    def _peek(self, offset: int = 1) -> _Token:
        return self.tokens[min(self.position + offset, len(self.tokens) - 1)]

    def _advance(self) -> _Token:
        token = self.current
        self.position += 1
        return token

    def _error(self, message: str, token: _Token | None = None) -> ModelSyntaxError:
        token = token or self.current
        return ModelSyntaxError(message, token.line, token.column)

    def _expect(self, text: str) -> _Token:
        if self.current.text != text or self.current.kind == "end":
            found = self.current.text or "end of input"
            raise self._error(f"expected {text!r}, found {found!r}")
        return self._advance()

    def parse(self) -> None:
        while self.current.kind != "end":
            if self.current.text == ";":
                self._advance()
                continue
            if self.current.kind == "ident" and self._peek().text == "in":
                self._domain()
            else:
                self.statements.append(self._constraint())
            self._expect(";")

    def _domain(self) -> None:
        name_token = self._advance()
        self._advance()
        self._expect("[")
        lo = self._signed_number()
        self._expect(",")
        hi = self._signed_number()
        self._expect("]")
        if lo > hi:
            raise self._error(f"empty domain for {name_token.text}", name_token)
        previous = self.domains.get(name_token.text)
        if previous is not None and previous != (lo, hi):
            raise ModelDefinitionError(
                f"{name_token.line}:{name_token.column}: conflicting domain declarations for {name_token.text}"
            )
        self.domains[name_token.text] = (lo, hi)

    def _signed_number(self) -> Fraction:
        sign = 1
        if self.current.text in {"-", "+"}:
            sign = -1 if self._advance().text == "-" else 1
        token = self.current
        if token.kind != "number":
            raise self._error(f"expected a number, found {token.text or 'end of input'!r}")
        self._advance()
        value = Fraction(token.text)
        if self.current.text == "/" and self._peek().kind == "number":
            self._advance()
            denominator = Fraction(self._advance().text)
            if denominator == 0:
                raise self._error("zero denominator in numeric literal")
            value /= denominator
        return sign * value

    def _constraint(self) -> _Ast:
        operands = [self._expr()]
        relations: list[str] = []
        while self.current.kind == "op" and self.current.text in {"=", "<=", ">=", "<", ">"}:
            token = self._advance()
            relation = token.text
            if relation in _CLOSED_FORMS:
                logger.warning(
                    "line %d column %d: strict %r treated as %r",
                    token.line,
                    token.column,
                    relation,
                    _CLOSED_FORMS[relation],
                )
                relation = _CLOSED_FORMS[relation]
            relations.append(relation)
            operands.append(self._expr())
        if not relations:
            raise self._error("expected a relation (=, <=, >=, <, >)")
        return ("cmp", tuple(relations), tuple(operands))

    def _expr(self) -> _Ast:
        node = self._term()
        while self.current.text in {"+", "-"} and self.current.kind == "op":
            op = self._advance().text
            node = _fold_binary(op, node, self._term())
        return node

    def _term(self) -> _Ast:
        node = self._factor()
        while self.current.text in {"*", "/"} and self.current.kind == "op":
            op = self._advance().text
            node = _fold_binary(op, node, self._factor())
        return node

    def _factor(self) -> _Ast:
        token = self.current
        if token.kind == "number":
            self._advance()
            return ("const", Fraction(token.text))
        if token.text == "-" and token.kind == "op":
            self._advance()
            operand = self._factor()
            if operand[0] == "const":
                return ("const", -operand[1])
            return ("neg", operand)
        if token.text == "(":
            self._advance()
            node = self._expr()
            self._expect(")")
            return node
        if token.kind == "ident":
            self._advance()
            if token.text in STD_FUNCTIONS:
                if self.current.text != "(":
                    raise self._error(f"function {token.text} must be applied to an argument", token)
                self._advance()
                argument = self._expr()
                self._expect(")")
                return ("fn", token.text, argument)
            if token.text == "in":
                raise self._error("'in' is reserved for domain declarations", token)
            return ("var", token.text)
        raise self._error(f"unexpected {token.text or 'end of input'!r}")


class _DagBuilder:
    def __init__(self) -> None:
        self.nodes: list[ExprNode] = []
        self.index: dict[tuple, int] = {}
        self.variables: dict[str, None] = {}

    def intern(self, ast: _Ast) -> int:
        tag = ast[0]
        if tag == "var":
            self.variables.setdefault(ast[1], None)
            return self._node(VARIABLE, (), ast[1])
        if tag == "const":
            return self._node(CONSTANT, (), ast[1])
        if tag == "neg":
            return self._node(UNARY, (self.intern(ast[1]),), "-")
        if tag == "bin":
            left = self.intern(ast[2])
            right = self.intern(ast[3])
            return self._node(BINARY, (left, right), ast[1])
        if tag == "fn":
            return self._node(FUNCTION, (self.intern(ast[2]),), ast[1])
        operands = tuple(self.intern(item) for item in ast[2])
        return self._node(COMPARISON, operands, ast[1])

    def _node(self, kind: str, operands: tuple[int, ...], payload: Payload) -> int:
        key = (kind, operands, payload)
        found = self.index.get(key)
        if found is not None:
            return found
        self.nodes.append(ExprNode(kind, operands, payload))
        self.index[key] = len(self.nodes) - 1
        return len(self.nodes) - 1


def parse(text: str) -> Model:
    parser = _Parser(text)
    parser.parse()
    builder = _DagBuilder()
    roots: list[int] = []
    for statement in parser.statements:
        root = builder.intern(statement)
        if root not in roots:
            roots.append(root)

    variables: dict[str, Interval] = {}
    for name, (lo, hi) in parser.domains.items():
        variables[name] = Interval(Interval.from_fraction(lo).lo, Interval.from_fraction(hi).hi)
    for name in builder.variables:
        variables.setdefault(name, ENTIRE)
    return Model(tuple(builder.nodes), tuple(roots), variables)


# --- printing -------------------------------------------------------------------


def _format_number(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"({value.numerator}/{value.denominator})"


def format_node(model: Model, index: int) -> str:
    node = model.nodes[index]
    if node.kind == VARIABLE:
        return str(node.payload)
    if node.kind == CONSTANT:
        assert isinstance(node.payload, Fraction)
        return _format_number(node.payload)
    if node.kind == UNARY:
        return f"-{_wrap(model, node.operands[0])}"
    if node.kind == FUNCTION:
        return f"{node.payload}({format_node(model, node.operands[0])})"
    if node.kind == BINARY:
        left, right = node.operands
        return f"{_wrap(model, left)} {node.payload} {_wrap(model, right)}"
    parts = [format_node(model, node.operands[0])]
    assert isinstance(node.payload, tuple)
    for relation, operand in zip(node.payload, node.operands[1:]):
        parts.append(f"{relation} {format_node(model, operand)}")
    return " ".join(parts)


def _wrap(model: Model, index: int) -> str:
    text = format_node(model, index)
    if model.nodes[index].kind in {BINARY, UNARY}:
        return f"({text})"
    return text


def _format_endpoint(value: float) -> str:
    return str(Decimal(value))


def format_model(model: Model) -> str:
    lines: list[str] = []
    for name, domain in model.variables.items():
        if domain == ENTIRE:
            continue
        lines.append(f"{name} in [{_format_endpoint(domain.lo)}, {_format_endpoint(domain.hi)}];")
    lines.extend(f"{format_node(model, root)};" for root in model.roots)
    return "\n".join(lines) + "\n"


# --- range evaluation -----------------------------------------------------------


def _link_possible(left: Interval, relation: str, right: Interval) -> bool:
    if relation == "=":
        return not intersect(left, right).is_empty
    if relation == "<=":
        return left.lo <= right.hi
    return left.hi >= right.lo


def evaluate_ranges(model: Model) -> Model:
    """Annotate every node with the interval evaluation of its subtree over the domains."""
    enclosures: list[Interval] = []
    infeasible = model.infeasible
    for index, node in enumerate(model.nodes):
        operands = [enclosures[item] for item in node.operands]
        if node.kind == VARIABLE:
            value = model.variables.get(str(node.payload), ENTIRE)
        elif node.kind == CONSTANT:
            assert isinstance(node.payload, Fraction)
            value = Interval.from_fraction(node.payload)
        elif node.kind == UNARY:
            value = neg(operands[0])
        elif node.kind == BINARY:
            op = {"+": add, "-": sub, "*": mul, "/": div}[str(node.payload)]
            value = op(operands[0], operands[1])
        elif node.kind == FUNCTION:
            value = eval_std(str(node.payload), operands[0])
        else:
            assert isinstance(node.payload, tuple)
            value = ONE
            if any(item.is_empty for item in operands):
                value = empty("empty operand")
            elif not all(
                _link_possible(left, relation, right)
                for left, relation, right in zip(operands, node.payload, operands[1:])
            ):
                value = empty("unsatisfiable over the domains")
        if value.is_empty and infeasible is None:
            infeasible = f"{value.reason or 'empty range'} in '{format_node(model, index)}'"
            logger.info("model infeasible: %s", infeasible)
        enclosures.append(value)
    nodes = tuple(replace(node, enclosure=value) for node, value in zip(model.nodes, enclosures))
    return replace(model, nodes=nodes, infeasible=infeasible)
