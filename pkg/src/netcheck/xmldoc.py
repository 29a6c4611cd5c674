"""XML subset parser and document tree.

Parses a closed XML subset into a tree of element and text items with
parent links and a global document order. The subset has no namespaces,
no CDATA sections, no processing instructions, and no DTDs; comments are
skipped; the five predefined entities are decoded and anything else in
entity position is an error. Text consisting entirely of whitespace is
dropped, so indentation between tags never becomes data; all other text
is kept verbatim and adjacent runs are merged.

Trees are treated as immutable once parsing returns.
"""

from __future__ import annotations

from .errors import ParseError

_XML_WS = " \t\r\n"
_ENTITIES = {"amp": "&", "lt": "<", "gt": ">", "quot": '"', "apos": "'"}


class XmlElement:
    """Element item: tag name, attributes, ordered children, parent link."""

    __slots__ = ("name", "attrs", "children", "parent", "pos", "index", "attr_items")

    def __init__(self, name: str, attrs: dict[str, str], pos: int):
        self.name = name
        self.attrs = attrs
        self.children: list[XmlElement | XmlText] = []
        self.parent: XmlElement | None = None
        self.pos = pos  # document-order rank of this item
        self.index = 0  # position within parent.children
        self.attr_items = tuple(
            XmlAttribute(self, n, v, (pos, 1, i)) for i, (n, v) in enumerate(attrs.items())
        )

    def __repr__(self) -> str:
        return f"XmlElement({self.name!r})"


class XmlText:
    """Text item; always a non-whitespace-only string after parsing."""

    __slots__ = ("text", "parent", "pos", "index")

    def __init__(self, text: str, pos: int):
        self.text = text
        self.parent: XmlElement | None = None
        self.pos = pos
        self.index = 0

    def __repr__(self) -> str:
        return f"XmlText({self.text!r})"


class XmlAttribute:
    """Attribute item as exposed on the attribute axis."""

    __slots__ = ("owner", "name", "value", "order_key")

    def __init__(self, owner: XmlElement, name: str, value: str, order_key: tuple):
        self.owner = owner
        self.name = name
        self.value = value
        self.order_key = order_key

    def __repr__(self) -> str:
        return f"XmlAttribute({self.name!r}={self.value!r})"


XmlItem = XmlElement | XmlText | XmlAttribute


def doc_order_key(item: XmlItem) -> tuple:
    """Total order on items of one document: elements and text by rank,
    attributes after their owner and before the owner's first child."""
    if isinstance(item, XmlAttribute):
        return item.order_key
    return (item.pos, 0, 0)


def string_value(item: XmlItem) -> str:
    """Concatenation of all text beneath the item, in document order."""
    if isinstance(item, XmlText):
        return item.text
    if isinstance(item, XmlAttribute):
        return item.value
    parts: list[str] = []
    stack = list(reversed(item.children))
    while stack:
        node = stack.pop()
        if isinstance(node, XmlText):
            parts.append(node.text)
        else:
            stack.extend(reversed(node.children))
    return "".join(parts)


def _is_name_start(c: str) -> bool:
    # Names: ASCII letters, digits, underscore, hyphen, dot; no leading digit.
    return (c.isascii() and c.isalpha()) or c in "_-."


def _is_name_char(c: str) -> bool:
    return (c.isascii() and (c.isalpha() or c.isdigit())) or c in "_-."


class _Scanner:
    __slots__ = ("text", "n", "i", "line", "col")

    def __init__(self, text: str):
        self.text = text
        self.n = len(text)
        self.i = 0
        self.line = 1
        self.col = 1

    def at_end(self) -> bool:
        return self.i >= self.n

    def peek(self) -> str:
        return self.text[self.i] if self.i < self.n else ""

    def startswith(self, s: str) -> bool:
        return self.text.startswith(s, self.i)

    def advance(self) -> str:
        c = self.text[self.i]
        self.i += 1
        if c == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return c

    def skip(self, k: int) -> None:
        for _ in range(k):
            self.advance()

    def error(self, message: str, line: int | None = None, col: int | None = None):
        raise ParseError(message, line if line is not None else self.line,
                         col if col is not None else self.col)


def parse_xml(data: bytes | str) -> XmlElement:
    """Parse a document and return its root element.

    Accepts bytes (UTF-8, optional BOM) or an already-decoded string.
    Raises ParseError with a 1-based line and column on any violation:
    mismatched or unterminated tags, unquoted or duplicate attributes,
    unknown entities, markup outside the subset, multiple roots.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc.reason}") from exc
    else:
        text = data
    if text.startswith("﻿"):
        text = text[1:]

    sc = _Scanner(text)
    counter = [0]
    _skip_between_elements(sc, allow_declaration=True)
    if sc.at_end():
        sc.error("document has no root element")
    if sc.peek() != "<":
        sc.error("content outside the root element")
    root = _parse_element(sc, counter)
    _skip_between_elements(sc)
    if not sc.at_end():
        if sc.peek() == "<":
            sc.error("multiple root elements")
        sc.error("content outside the root element")
    return root


def _skip_between_elements(sc: _Scanner, allow_declaration: bool = False) -> None:
    if allow_declaration and sc.startswith("<?xml"):
        line, col = sc.line, sc.col
        while not sc.startswith("?>"):
            if sc.at_end():
                sc.error("unterminated XML declaration", line, col)
            sc.advance()
        sc.skip(2)
    while not sc.at_end():
        c = sc.peek()
        if c in _XML_WS:
            sc.advance()
        elif sc.startswith("<!--"):
            _skip_comment(sc)
        else:
            return


def _skip_comment(sc: _Scanner) -> None:
    line, col = sc.line, sc.col
    sc.skip(4)
    while not sc.startswith("-->"):
        if sc.at_end():
            sc.error("unterminated comment", line, col)
        sc.advance()
    sc.skip(3)


def _read_name(sc: _Scanner, what: str) -> str:
    if sc.at_end() or not _is_name_start(sc.peek()):
        sc.error(f"expected {what}")
    chars = [sc.advance()]
    while not sc.at_end() and _is_name_char(sc.peek()):
        chars.append(sc.advance())
    return "".join(chars)


def _read_entity(sc: _Scanner) -> str:
    line, col = sc.line, sc.col
    sc.advance()  # '&'
    name_chars: list[str] = []
    while True:
        if sc.at_end() or len(name_chars) > 8:
            sc.error("unterminated entity reference", line, col)
        c = sc.advance()
        if c == ";":
            break
        name_chars.append(c)
    name = "".join(name_chars)
    if name not in _ENTITIES:
        sc.error(f"unknown entity &{name};", line, col)
    return _ENTITIES[name]


def _parse_element(sc: _Scanner, counter: list[int]) -> XmlElement:
    start_line, start_col = sc.line, sc.col
    sc.advance()  # '<'
    name = _read_name(sc, "element name")
    pos = counter[0]
    counter[0] += 1

    attrs: dict[str, str] = {}
    while True:
        saw_ws = False
        while not sc.at_end() and sc.peek() in _XML_WS:
            sc.advance()
            saw_ws = True
        if sc.at_end():
            sc.error(f"unterminated start tag <{name}>", start_line, start_col)
        c = sc.peek()
        if c in "/>":
            break
        if not saw_ws:
            sc.error("expected whitespace before attribute")
        attr_line, attr_col = sc.line, sc.col
        attr_name = _read_name(sc, "attribute name")
        while not sc.at_end() and sc.peek() in _XML_WS:
            sc.advance()
        if sc.peek() != "=":
            sc.error(f"expected '=' after attribute {attr_name!r}")
        sc.advance()
        while not sc.at_end() and sc.peek() in _XML_WS:
            sc.advance()
        quote = sc.peek()
        if quote not in "'\"":
            sc.error("attribute value must be quoted")
        q_line, q_col = sc.line, sc.col
        sc.advance()
        value_parts: list[str] = []
        while True:
            if sc.at_end():
                sc.error("unterminated attribute value", q_line, q_col)
            c = sc.peek()
            if c == quote:
                sc.advance()
                break
            if c == "<":
                sc.error("'<' is not allowed in an attribute value")
            if c == "&":
                value_parts.append(_read_entity(sc))
            else:
                value_parts.append(sc.advance())
        if attr_name in attrs:
            sc.error(f"duplicate attribute {attr_name!r}", attr_line, attr_col)
        attrs[attr_name] = "".join(value_parts)

    elem = XmlElement(name, attrs, pos)
    if sc.peek() == "/":
        sc.advance()
        if sc.peek() != ">":
            sc.error("expected '>' after '/'")
        sc.advance()
        return elem
    sc.advance()  # '>'

    text_parts: list[str] = []

    def flush_text() -> None:
        if not text_parts:
            return
        s = "".join(text_parts)
        text_parts.clear()
        if s.strip(_XML_WS) == "":
            return  # inter-tag whitespace is formatting, not data
        node = XmlText(s, counter[0])
        counter[0] += 1
        node.parent = elem
        node.index = len(elem.children)
        elem.children.append(node)

    while True:
        if sc.at_end():
            sc.error(f"unterminated element <{name}>", start_line, start_col)
        c = sc.peek()
        if c == "<":
            if sc.startswith("</"):
                flush_text()
                end_line, end_col = sc.line, sc.col
                sc.skip(2)
                end_name = _read_name(sc, "element name")
                while not sc.at_end() and sc.peek() in _XML_WS:
                    sc.advance()
                if sc.peek() != ">":
                    sc.error("expected '>' in closing tag")
                sc.advance()
                if end_name != name:
                    sc.error(
                        f"mismatched closing tag: expected </{name}>, found </{end_name}>",
                        end_line, end_col,
                    )
                return elem
            if sc.startswith("<!--"):
                # Comments do not break up runs of text.
                _skip_comment(sc)
            elif sc.startswith("<!"):
                sc.error("'<!' markup is not supported")
            elif sc.startswith("<?"):
                sc.error("processing instructions are not supported")
            else:
                flush_text()
                child = _parse_element(sc, counter)
                child.parent = elem
                child.index = len(elem.children)
                elem.children.append(child)
        elif c == "&":
            text_parts.append(_read_entity(sc))
        else:
            text_parts.append(sc.advance())


def escape_text(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def escape_attr(s: str) -> str:
    return escape_text(s).replace('"', "&quot;")


def serialize_xml(element: XmlElement) -> str:
    """Serialize a tree back to text; reparsing yields a structurally
    identical tree."""
    parts: list[str] = []
    _serialize_into(element, parts)
    return "".join(parts)


def _serialize_into(element: XmlElement, out: list[str]) -> None:
    out.append(f"<{element.name}")
    for n, v in element.attrs.items():
        out.append(f' {n}="{escape_attr(v)}"')
    if not element.children:
        out.append("/>")
        return
    out.append(">")
    for child in element.children:
        if isinstance(child, XmlText):
            out.append(escape_text(child.text))
        else:
            _serialize_into(child, out)
    out.append(f"</{element.name}>")


def xml_equal(a: XmlElement | XmlText, b: XmlElement | XmlText) -> bool:
    """Structural equality: names, attributes, and merged-text children.

    Attribute order is ignored; document positions and parents are not
    compared.
    """
    if isinstance(a, XmlText) or isinstance(b, XmlText):
        return isinstance(a, XmlText) and isinstance(b, XmlText) and a.text == b.text
    if a.name != b.name or a.attrs != b.attrs:
        return False
    if len(a.children) != len(b.children):
        return False
    return all(xml_equal(x, y) for x, y in zip(a.children, b.children))
