"""Navigational filter language over document trees.

A filter is a boolean combination of location paths, comparisons, and
the count/contains functions, evaluated at one element of a tree.
Location paths are built from nine axes (child, descendant,
descendant-or-self, parent, ancestor, self, attribute, following-sibling,
preceding-sibling) with name, ``*``, and ``text()`` node tests plus
boolean predicates; `` p/q ``, ``//``, ``@a``, ``.`` and ``..`` are the
usual abbreviations. Path results are duplicate-free and in document
order.

Comparison semantics are existential over sequences: a comparison with a
path operand holds when some item satisfies it. The relational operators
``<``, ``<=``, ``>``, ``>=`` coerce both sides to decimal numbers and
raise FilterTypeError when an operand's string value does not parse.
``=`` and ``!=`` compare numerically when either side is a number
literal or a count, and by string value otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum

from .errors import FilterTypeError, ParseError
from .xmldoc import (
    XmlAttribute,
    XmlElement,
    XmlItem,
    XmlText,
    doc_order_key,
    string_value,
)


class Axis(Enum):
    CHILD = "child"
    DESCENDANT = "descendant"
    DESCENDANT_OR_SELF = "descendant-or-self"
    PARENT = "parent"
    ANCESTOR = "ancestor"
    SELF = "self"
    ATTRIBUTE = "attribute"
    FOLLOWING_SIBLING = "following-sibling"
    PRECEDING_SIBLING = "preceding-sibling"


_AXIS_BY_NAME = {a.value: a for a in Axis}


@dataclass(frozen=True)
class NameTest:
    name: str


@dataclass(frozen=True)
class AnyElementTest:
    """The ``*`` test: any element (any attribute, on the attribute axis)."""


@dataclass(frozen=True)
class TextTest:
    """The ``text()`` test."""


@dataclass(frozen=True)
class AnyItemTest:
    """Matches any item; used by the ``.``, ``..`` and ``//`` expansions."""


NodeTest = NameTest | AnyElementTest | TextTest | AnyItemTest


@dataclass(frozen=True)
class Step:
    axis: Axis
    test: NodeTest
    predicates: tuple = ()


@dataclass(frozen=True)
class LocationPath:
    steps: tuple[Step, ...]


@dataclass(frozen=True)
class StringLiteral:
    value: str


@dataclass(frozen=True)
class NumberLiteral:
    value: Decimal


@dataclass(frozen=True)
class CountExpr:
    path: LocationPath


@dataclass(frozen=True)
class Contains:
    path: LocationPath
    needle: str


Operand = LocationPath | StringLiteral | NumberLiteral | CountExpr | Contains


@dataclass(frozen=True)
class And:
    left: "FilterExpr"
    right: "FilterExpr"


@dataclass(frozen=True)
class Or:
    left: "FilterExpr"
    right: "FilterExpr"


@dataclass(frozen=True)
class Not:
    operand: "FilterExpr"


@dataclass(frozen=True)
class Comparison:
    left: Operand
    op: str  # = != < <= > >=
    right: Operand


@dataclass(frozen=True)
class Exists:
    path: LocationPath


FilterExpr = (
    And | Or | Not | Comparison | Exists | Contains | CountExpr
    | StringLiteral | NumberLiteral | LocationPath
)


# ---------------------------------------------------------------------------
# Tokenizer


_COMPARE_OPS = ("!=", "<=", ">=", "=", "<", ">")
_TWO_CHAR_SYMS = ("::", "//", "..", "!=", "<=", ">=")
_ONE_CHAR_SYMS = "()[]/@=<>,.*"


@dataclass(frozen=True)
class _Tok:
    kind: str  # NAME NUMBER STRING SYM END
    value: str
    col: int  # 1-based character offset


def _tokenize_filter(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        col = i + 1
        if c in "'\"":
            j = text.find(c, i + 1)
            if j < 0:
                raise ParseError("unterminated string literal", 1, col)
            toks.append(_Tok("STRING", text[i + 1 : j], col))
            i = j + 1
            continue
        if c.isdigit():
            m = re.match(r"\d+(\.\d+)?", text[i:])
            toks.append(_Tok("NUMBER", m.group(0), col))
            i += m.end()
            continue
        if (c.isascii() and c.isalpha()) or c == "_":
            m = re.match(r"[A-Za-z_][A-Za-z0-9_.\-]*", text[i:])
            toks.append(_Tok("NAME", m.group(0), col))
            i += m.end()
            continue
        two = text[i : i + 2]
        if two in _TWO_CHAR_SYMS:
            toks.append(_Tok("SYM", two, col))
            i += 2
            continue
        if c in _ONE_CHAR_SYMS:
            toks.append(_Tok("SYM", c, col))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", 1, col)
    toks.append(_Tok("END", "", n + 1))
    return toks


# ---------------------------------------------------------------------------
# Parser


class _FilterParser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at_sym(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "SYM" and tok.value == value

    def expect_sym(self, value: str) -> None:
        tok = self.next()
        if tok.kind != "SYM" or tok.value != value:
            raise ParseError(f"expected {value!r}", 1, tok.col)

    def error(self, message: str):
        raise ParseError(message, 1, self.peek().col)

    # filter := or-level
    def parse(self) -> FilterExpr:
        expr = self.parse_or()
        tok = self.peek()
        if tok.kind != "END":
            self.error(f"unexpected trailing input {tok.value!r}")
        return expr

    def parse_or(self) -> FilterExpr:
        expr = self.parse_and()
        while self._at_keyword("or"):
            self.next()
            expr = Or(expr, self.parse_and())
        return expr

    def parse_and(self) -> FilterExpr:
        expr = self.parse_not()
        while self._at_keyword("and"):
            self.next()
            expr = And(expr, self.parse_not())
        return expr

    def _at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "NAME" and tok.value == word

    def _at_call(self, word: str) -> bool:
        tok = self.peek()
        nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
        return (
            tok.kind == "NAME"
            and tok.value == word
            and nxt is not None
            and nxt.kind == "SYM"
            and nxt.value == "("
        )

    def parse_not(self) -> FilterExpr:
        if self._at_call("not"):
            self.next()
            self.expect_sym("(")
            inner = self.parse_or()
            self.expect_sym(")")
            return Not(inner)
        return self.parse_cmp()

    def parse_cmp(self) -> FilterExpr:
        if self.at_sym("("):
            self.next()
            inner = self.parse_or()
            self.expect_sym(")")
            return inner
        left = self.parse_operand()
        tok = self.peek()
        if tok.kind == "SYM" and tok.value in _COMPARE_OPS:
            self.next()
            right = self.parse_operand()
            return Comparison(left, tok.value, right)
        # A bare path means existence; other bare operands keep their
        # boolean coercion.
        if isinstance(left, LocationPath):
            return Exists(left)
        return left

    def parse_operand(self) -> Operand:
        tok = self.peek()
        if tok.kind == "STRING":
            self.next()
            return StringLiteral(tok.value)
        if tok.kind == "NUMBER":
            self.next()
            return NumberLiteral(Decimal(tok.value))
        if self._at_call("count"):
            self.next()
            self.expect_sym("(")
            path = self.parse_path()
            self.expect_sym(")")
            return CountExpr(path)
        if self._at_call("contains"):
            self.next()
            self.expect_sym("(")
            path = self.parse_path()
            self.expect_sym(",")
            stok = self.next()
            if stok.kind != "STRING":
                raise ParseError("expected a string literal", 1, stok.col)
            self.expect_sym(")")
            return Contains(path, stok.value)
        return self.parse_path()

    def parse_path(self) -> LocationPath:
        steps: list[Step] = []
        if self.at_sym("//"):
            self.next()
            steps.append(Step(Axis.DESCENDANT_OR_SELF, AnyItemTest()))
            steps.append(self.parse_step())
        else:
            steps.append(self.parse_step())
        while True:
            if self.at_sym("/"):
                self.next()
                steps.append(self.parse_step())
            elif self.at_sym("//"):
                self.next()
                steps.append(Step(Axis.DESCENDANT_OR_SELF, AnyItemTest()))
                steps.append(self.parse_step())
            else:
                return LocationPath(tuple(steps))

    def parse_step(self) -> Step:
        tok = self.peek()
        if self.at_sym("."):
            self.next()
            return Step(Axis.SELF, AnyItemTest())
        if self.at_sym(".."):
            self.next()
            return Step(Axis.PARENT, AnyItemTest())
        if self.at_sym("@"):
            self.next()
            name_tok = self.next()
            if name_tok.kind != "NAME":
                raise ParseError("expected attribute name after '@'", 1, name_tok.col)
            return Step(Axis.ATTRIBUTE, NameTest(name_tok.value))
        if tok.kind == "NAME" and self._next_is_axis_sep():
            axis = _AXIS_BY_NAME.get(tok.value)
            if axis is None:
                raise ParseError(f"unknown axis {tok.value!r}", 1, tok.col)
            self.next()
            self.next()  # '::'
            test = self.parse_test()
            return Step(axis, test, self.parse_predicates())
        test = self.parse_test()
        return Step(Axis.CHILD, test, self.parse_predicates())

    def _next_is_axis_sep(self) -> bool:
        nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
        return nxt is not None and nxt.kind == "SYM" and nxt.value == "::"

    def parse_test(self) -> NodeTest:
        tok = self.peek()
        if tok.kind == "SYM" and tok.value == "*":
            self.next()
            return AnyElementTest()
        if tok.kind == "NAME":
            if self._at_call("text"):
                self.next()
                self.expect_sym("(")
                self.expect_sym(")")
                return TextTest()
            self.next()
            return NameTest(tok.value)
        self.error("expected a node test")

    def parse_predicates(self) -> tuple:
        preds: list[FilterExpr] = []
        while self.at_sym("["):
            self.next()
            preds.append(self.parse_or())
            self.expect_sym("]")
        return tuple(preds)


def parse_filter(text: str) -> FilterExpr:
    """Parse a filter expression; raises ParseError with a character
    offset on malformed input."""
    toks = _tokenize_filter(text)
    if toks[0].kind == "END":
        raise ParseError("empty filter", 1, 1)
    return _FilterParser(toks).parse()


# ---------------------------------------------------------------------------
# Evaluation


def eval_path(path: LocationPath, context: XmlItem) -> list[XmlItem]:
    """Evaluate a location path at a context item.

    Returns a duplicate-free list in document order. Each step's
    predicates filter that step's result.
    """
    items: list[XmlItem] = [context]
    for step in path.steps:
        seen: set[int] = set()
        collected: list[XmlItem] = []
        for item in items:
            for cand in _axis_items(step.axis, item):
                if _test_matches(step.test, step.axis, cand):
                    key = id(cand)
                    if key not in seen:
                        seen.add(key)
                        collected.append(cand)
        collected.sort(key=doc_order_key)
        for pred in step.predicates:
            collected = [it for it in collected if _eval_boolean(pred, it)]
        items = collected
    return items


def _descendants(element: XmlElement):
    stack = list(reversed(element.children))
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, XmlElement):
            stack.extend(reversed(node.children))


def _axis_items(axis: Axis, item: XmlItem):
    if axis is Axis.CHILD:
        return iter(item.children) if isinstance(item, XmlElement) else iter(())
    if axis is Axis.DESCENDANT:
        return _descendants(item) if isinstance(item, XmlElement) else iter(())
    if axis is Axis.DESCENDANT_OR_SELF:
        def gen():
            yield item
            if isinstance(item, XmlElement):
                yield from _descendants(item)
        return gen()
    if axis is Axis.PARENT:
        parent = item.owner if isinstance(item, XmlAttribute) else item.parent
        return iter(() if parent is None else (parent,))
    if axis is Axis.ANCESTOR:
        def gen():
            node = item.owner if isinstance(item, XmlAttribute) else item.parent
            while node is not None:
                yield node
                node = node.parent
        return gen()
    if axis is Axis.SELF:
        return iter((item,))
    if axis is Axis.ATTRIBUTE:
        return iter(item.attr_items) if isinstance(item, XmlElement) else iter(())
    if axis is Axis.FOLLOWING_SIBLING:
        if isinstance(item, XmlAttribute) or item.parent is None:
            return iter(())
        return iter(item.parent.children[item.index + 1 :])
    if axis is Axis.PRECEDING_SIBLING:
        if isinstance(item, XmlAttribute) or item.parent is None:
            return iter(())
        return iter(item.parent.children[: item.index])
    raise AssertionError(axis)


def _test_matches(test: NodeTest, axis: Axis, item: XmlItem) -> bool:
    if isinstance(test, AnyItemTest):
        return True
    if axis is Axis.ATTRIBUTE:
        if isinstance(test, NameTest):
            return isinstance(item, XmlAttribute) and item.name == test.name
        if isinstance(test, AnyElementTest):
            return isinstance(item, XmlAttribute)
        return False
    if isinstance(test, NameTest):
        return isinstance(item, XmlElement) and item.name == test.name
    if isinstance(test, AnyElementTest):
        return isinstance(item, XmlElement)
    return isinstance(item, XmlText)


def eval_filter(expr: FilterExpr, context: XmlElement) -> bool:
    """Evaluate a filter at an element; raises FilterTypeError when a
    relational comparison meets a value that is not a number."""
    return _eval_boolean(expr, context)


def _eval_boolean(expr: FilterExpr, item: XmlItem) -> bool:
    if isinstance(expr, And):
        return _eval_boolean(expr.left, item) and _eval_boolean(expr.right, item)
    if isinstance(expr, Or):
        return _eval_boolean(expr.left, item) or _eval_boolean(expr.right, item)
    if isinstance(expr, Not):
        return not _eval_boolean(expr.operand, item)
    if isinstance(expr, Comparison):
        return _compare(expr, item)
    if isinstance(expr, Exists):
        return bool(eval_path(expr.path, item))
    if isinstance(expr, Contains):
        return any(expr.needle in string_value(it) for it in eval_path(expr.path, item))
    if isinstance(expr, CountExpr):
        return bool(eval_path(expr.path, item))
    if isinstance(expr, StringLiteral):
        return expr.value != ""
    if isinstance(expr, NumberLiteral):
        return expr.value != 0
    if isinstance(expr, LocationPath):
        return bool(eval_path(expr, item))
    raise AssertionError(expr)


_NUMBER_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)\Z")


def _to_number(kind: str, value) -> Decimal:
    if kind == "num":
        return value
    if kind == "bool":
        return Decimal(1 if value else 0)
    s = value.strip(" \t\r\n")
    if not _NUMBER_RE.match(s):
        raise FilterTypeError(f"cannot interpret {value!r} as a number")
    return Decimal(s)


def _to_boolean(kind: str, value) -> bool:
    if kind == "bool":
        return value
    if kind == "num":
        return value != 0
    return value != ""


def _scalar_compare(lkind: str, lval, op: str, rkind: str, rval) -> bool:
    if op in ("<", "<=", ">", ">="):
        a = _to_number(lkind, lval)
        b = _to_number(rkind, rval)
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        return a >= b
    if lkind == "num" or rkind == "num":
        eq = _to_number(lkind, lval) == _to_number(rkind, rval)
    elif lkind == "bool" or rkind == "bool":
        eq = _to_boolean(lkind, lval) == _to_boolean(rkind, rval)
    else:
        eq = lval == rval
    return eq if op == "=" else not eq


def _operand_value(operand: Operand, item: XmlItem) -> tuple[str, object]:
    if isinstance(operand, LocationPath):
        return ("nodes", eval_path(operand, item))
    if isinstance(operand, StringLiteral):
        return ("str", operand.value)
    if isinstance(operand, NumberLiteral):
        return ("num", operand.value)
    if isinstance(operand, CountExpr):
        return ("num", Decimal(len(eval_path(operand.path, item))))
    if isinstance(operand, Contains):
        return ("bool", _eval_boolean(operand, item))
    raise AssertionError(operand)


def _compare(cmp: Comparison, item: XmlItem) -> bool:
    lkind, lval = _operand_value(cmp.left, item)
    rkind, rval = _operand_value(cmp.right, item)
    if lkind == "nodes" and rkind == "nodes":
        return any(
            _scalar_compare("str", string_value(a), cmp.op, "str", string_value(b))
            for a in lval
            for b in rval
        )
    if lkind == "nodes":
        return any(
            _scalar_compare("str", string_value(a), cmp.op, rkind, rval) for a in lval
        )
    if rkind == "nodes":
        return any(
            _scalar_compare(lkind, lval, cmp.op, "str", string_value(b)) for b in rval
        )
    return _scalar_compare(lkind, lval, cmp.op, rkind, rval)


# ---------------------------------------------------------------------------
# Rendering (for diagnostics and reports)


def render_filter(expr: FilterExpr) -> str:
    """Render a filter AST back to source form."""
    if isinstance(expr, Or):
        return f"{render_filter(expr.left)} or {render_filter(expr.right)}"
    if isinstance(expr, And):
        return f"{_render_and_arg(expr.left)} and {_render_and_arg(expr.right)}"
    if isinstance(expr, Not):
        return f"not({render_filter(expr.operand)})"
    if isinstance(expr, Comparison):
        return (
            f"{_render_operand(expr.left)} {expr.op} {_render_operand(expr.right)}"
        )
    if isinstance(expr, Exists):
        return _render_path(expr.path)
    return _render_operand(expr)


def _render_and_arg(expr: FilterExpr) -> str:
    text = render_filter(expr)
    return f"({text})" if isinstance(expr, Or) else text


def _render_operand(operand) -> str:
    if isinstance(operand, LocationPath):
        return _render_path(operand)
    if isinstance(operand, StringLiteral):
        return _render_string(operand.value)
    if isinstance(operand, NumberLiteral):
        return str(operand.value)
    if isinstance(operand, CountExpr):
        return f"count({_render_path(operand.path)})"
    if isinstance(operand, Contains):
        return f"contains({_render_path(operand.path)}, {_render_string(operand.needle)})"
    raise AssertionError(operand)


def _render_string(s: str) -> str:
    if '"' not in s:
        return f'"{s}"'
    return f"'{s}'"


def _render_path(path: LocationPath) -> str:
    parts: list[str] = []
    pending_slash = False
    for step in path.steps:
        if (
            step.axis is Axis.DESCENDANT_OR_SELF
            and isinstance(step.test, AnyItemTest)
            and not step.predicates
        ):
            parts.append("//")
            pending_slash = False
            continue
        if pending_slash:
            parts.append("/")
        parts.append(_render_step(step))
        pending_slash = True
    return "".join(parts)


def _render_step(step: Step) -> str:
    preds = "".join(f"[{render_filter(p)}]" for p in step.predicates)
    if step.axis is Axis.SELF and isinstance(step.test, AnyItemTest) and not preds:
        return "."
    if step.axis is Axis.PARENT and isinstance(step.test, AnyItemTest) and not preds:
        return ".."
    if step.axis is Axis.ATTRIBUTE and isinstance(step.test, NameTest) and not preds:
        return f"@{step.test.name}"
    if isinstance(step.test, NameTest):
        test = step.test.name
    elif isinstance(step.test, AnyElementTest):
        test = "*"
    elif isinstance(step.test, TextTest):
        test = "text()"
    else:
        test = "self::*"  # AnyItemTest has no surface form outside . and ..
        if step.axis in (Axis.SELF, Axis.PARENT):
            test = "*"
    if step.axis is Axis.CHILD:
        return f"{test}{preds}"
    return f"{step.axis.value}::{test}{preds}"
