"""Document parser, serializer, and ordering tests."""

import pytest
from hypothesis import given, strategies as st

from netcheck.errors import ParseError
from netcheck.xmldoc import (
    XmlElement,
    XmlText,
    doc_order_key,
    escape_attr,
    escape_text,
    parse_xml,
    serialize_xml,
    string_value,
    xml_equal,
)


def test_basic_structure():
    root = parse_xml('<a x="1"><b>hi</b><c/></a>')
    assert root.name == "a"
    assert root.attrs == {"x": "1"}
    assert [c.name for c in root.children] == ["b", "c"]
    b = root.children[0]
    assert isinstance(b.children[0], XmlText)
    assert b.children[0].text == "hi"
    assert root.children[1].children == []


def test_parent_and_index_links():
    root = parse_xml("<a><b/><c/>tail</a>")
    b, c, tail = root.children
    assert b.parent is root and c.parent is root and tail.parent is root
    assert (b.index, c.index, tail.index) == (0, 1, 2)
    assert root.parent is None


def test_whitespace_only_text_is_dropped():
    root = parse_xml("<a>\n  <b/>\n  <c/>\n</a>")
    assert [c.name for c in root.children] == ["b", "c"]


def test_mixed_text_is_preserved():
    root = parse_xml("<p>one <em>two</em> three</p>")
    kinds = [type(c).__name__ for c in root.children]
    assert kinds == ["XmlText", "XmlElement", "XmlText"]
    assert root.children[0].text == "one "
    assert root.children[2].text == " three"


def test_string_value_concatenates_descendant_text():
    root = parse_xml("<a>x<b>y<c>z</c></b>w</a>")
    assert string_value(root) == "xyzw"
    assert string_value(root.children[1]) == "yz"


def test_entities_decode():
    root = parse_xml("<a>&lt;&gt;&amp;&quot;&apos;</a>")
    assert root.children[0].text == "<>&\"'"


def test_entity_in_attribute():
    root = parse_xml('<a t="a&amp;b"/>')
    assert root.attrs["t"] == "a&b"


def test_unknown_entity_rejected():
    with pytest.raises(ParseError) as exc:
        parse_xml("<a>&nbsp;</a>")
    assert "entity" in str(exc.value)


def test_unterminated_entity_rejected():
    with pytest.raises(ParseError):
        parse_xml("<a>&ampx</a>")


def test_comment_skipped_and_text_merges_across_it():
    root = parse_xml("<a>foo<!-- note -->bar</a>")
    assert len(root.children) == 1
    assert root.children[0].text == "foobar"


def test_comment_between_elements():
    root = parse_xml("<a><!-- x --><b/><!-- y --></a>")
    assert [c.name for c in root.children] == ["b"]


def test_bom_and_declaration_accepted():
    data = b'\xef\xbb\xbf<?xml version="1.0" encoding="UTF-8"?>\n<a/>'
    assert parse_xml(data).name == "a"


def test_declaration_only_at_start():
    with pytest.raises(ParseError):
        parse_xml('<a/><?xml version="1.0"?>')


def test_doctype_rejected():
    with pytest.raises(ParseError):
        parse_xml("<!DOCTYPE a><a/>")


def test_mismatched_closing_tag_position():
    with pytest.raises(ParseError) as exc:
        parse_xml("<a>\n<b></c></a>")
    err = exc.value
    assert err.line == 2
    assert "c" in err.message and "b" in err.message


def test_duplicate_attribute_rejected():
    with pytest.raises(ParseError) as exc:
        parse_xml('<a x="1" x="2"/>')
    assert "duplicate" in str(exc.value)


def test_attributes_need_separating_space():
    with pytest.raises(ParseError):
        parse_xml('<a x="1"y="2"/>')


def test_multiple_roots_rejected():
    with pytest.raises(ParseError):
        parse_xml("<a/><b/>")


def test_text_outside_root_rejected():
    with pytest.raises(ParseError):
        parse_xml("<a/>junk")


def test_unclosed_element_rejected():
    with pytest.raises(ParseError):
        parse_xml("<a><b></b>")


def test_error_carries_line_and_column():
    with pytest.raises(ParseError) as exc:
        parse_xml("<a>\n  <3/>\n</a>")
    err = exc.value
    assert err.line == 2
    assert err.column >= 3
    assert f"line {err.line}, column {err.column}" in str(err)


def test_invalid_utf8_rejected():
    with pytest.raises(ParseError):
        parse_xml(b"<a>\xff</a>")


def test_document_order_attrs_before_children():
    root = parse_xml('<a x="1" y="2"><b/></a>')
    ax, ay = root.attr_items
    b = root.children[0]
    items = sorted([b, ay, ax, root], key=doc_order_key)
    assert items == [root, ax, ay, b]


def test_serialize_self_closing_and_escaping():
    root = parse_xml('<a t="x&amp;y">a&lt;b<e/></a>')
    text = serialize_xml(root)
    assert '<a t="x&amp;y">' in text
    assert "a&lt;b" in text
    assert "<e/>" in text


def test_escape_helpers():
    assert escape_text("a<b&c>") == "a&lt;b&amp;c&gt;"
    assert escape_attr('he said "hi"') == "he said &quot;hi&quot;"


def test_xml_equal_ignores_attr_order():
    a = parse_xml('<a x="1" y="2"/>')
    b = parse_xml('<a y="2" x="1"/>')
    assert xml_equal(a, b)


def test_xml_equal_detects_differences():
    a = parse_xml("<a><b/></a>")
    assert not xml_equal(a, parse_xml("<a><c/></a>"))
    assert not xml_equal(a, parse_xml("<a><b/><b/></a>"))
    assert not xml_equal(a, parse_xml('<a z="1"><b/></a>'))


# -- round-trip property -----------------------------------------------------

_names = st.from_regex(r"[a-z][a-z0-9_.\-]{0,5}", fullmatch=True)
_attr_values = st.text(
    alphabet=st.characters(codec="utf-8", exclude_characters="\x00\r"),
    max_size=8,
)
_texts = st.text(
    alphabet=st.characters(codec="utf-8", exclude_characters="\x00\r"),
    min_size=1,
    max_size=8,
).filter(lambda s: s.strip(" \t\n") != "")


@st.composite
def _element_source(draw, depth=2):
    name = draw(_names)
    n_attrs = draw(st.integers(0, 2))
    attr_names = draw(
        st.lists(_names, min_size=n_attrs, max_size=n_attrs, unique=True)
    )
    attrs = "".join(
        f' {an}="{escape_attr(draw(_attr_values))}"' for an in attr_names
    )
    if depth <= 0:
        return f"<{name}{attrs}/>"
    parts = []
    last_was_text = True  # no leading text so text nodes never merge on reparse
    for _ in range(draw(st.integers(0, 3))):
        if not last_was_text and draw(st.booleans()):
            parts.append(escape_text(draw(_texts)))
            last_was_text = True
        else:
            parts.append(draw(_element_source(depth=depth - 1)))
            last_was_text = False
    body = "".join(parts)
    return f"<{name}{attrs}>{body}</{name}>"


@given(_element_source())
def test_parse_serialize_round_trip(source):
    doc = parse_xml(source)
    again = parse_xml(serialize_xml(doc))
    assert xml_equal(doc, again)
