"""Node-attributed networks and their XML wire format.

A network is a keyed set of nodes, each carrying an XML payload, plus a
multiset of weighted edges. The XML format is::

    <network directed="true|false">      directed defaults to "true"
      <node key="K"> ... payload ... </node>
      <edge from="K1" to="K2" weight="W"/>   weight optional, default 1

An undirected edge is a single record incident to both endpoints.
Parallel edges are kept as separate records; adjacency lists are
deduplicated and sorted, and multiplicity is answered separately.
Weights must be positive; the logic ignores them entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Mapping

from .errors import FormatError, UnknownKeyError
from .xmldoc import XmlElement, XmlText, escape_attr, parse_xml, serialize_xml, xml_equal


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    weight: Decimal = Decimal(1)


@dataclass(frozen=True)
class AdjacencyView:
    """Read-only successor and predecessor maps (sorted key tuples)."""

    successors: Mapping[str, tuple[str, ...]]
    predecessors: Mapping[str, tuple[str, ...]]

    def transposed(self) -> "AdjacencyView":
        return AdjacencyView(self.predecessors, self.successors)


class Network:
    """Immutable network: payloads by key plus an edge multiset."""

    def __init__(self, directed: bool, nodes: Mapping[str, XmlElement], edges):
        self.directed = directed
        self.nodes: dict[str, XmlElement] = dict(nodes)
        self.edges: tuple[Edge, ...] = tuple(edges)
        succ: dict[str, set[str]] = {k: set() for k in self.nodes}
        pred: dict[str, set[str]] = {k: set() for k in self.nodes}
        mult: dict[tuple[str, str], int] = {}
        for e in self.edges:
            if e.src not in self.nodes:
                raise FormatError(f"edge endpoint {e.src!r} is not a declared node")
            if e.dst not in self.nodes:
                raise FormatError(f"edge endpoint {e.dst!r} is not a declared node")
            if e.weight <= 0:
                raise FormatError(f"edge weight must be positive, got {e.weight}")
            succ[e.src].add(e.dst)
            pred[e.dst].add(e.src)
            mult[(e.src, e.dst)] = mult.get((e.src, e.dst), 0) + 1
            if not directed:
                succ[e.dst].add(e.src)
                pred[e.src].add(e.dst)
                if e.src != e.dst:
                    mult[(e.dst, e.src)] = mult.get((e.dst, e.src), 0) + 1
        self._succ = {k: tuple(sorted(v)) for k, v in succ.items()}
        self._pred = {k: tuple(sorted(v)) for k, v in pred.items()}
        self._mult = mult
        self._keys = tuple(sorted(self.nodes))

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    def node_keys(self) -> tuple[str, ...]:
        """All node keys in ascending order."""
        return self._keys

    def payload(self, key: str) -> XmlElement:
        try:
            return self.nodes[key]
        except KeyError:
            raise UnknownKeyError(f"unknown node key {key!r}") from None

    def successors(self, key: str) -> tuple[str, ...]:
        """Distinct successor keys in ascending order. For undirected
        networks every neighbour counts as both successor and
        predecessor."""
        try:
            return self._succ[key]
        except KeyError:
            raise UnknownKeyError(f"unknown node key {key!r}") from None

    def predecessors(self, key: str) -> tuple[str, ...]:
        try:
            return self._pred[key]
        except KeyError:
            raise UnknownKeyError(f"unknown node key {key!r}") from None

    def edge_multiplicity(self, src: str, dst: str) -> int:
        """Number of parallel edge records from src to dst (either
        orientation counts when undirected)."""
        if src not in self.nodes:
            raise UnknownKeyError(f"unknown node key {src!r}")
        if dst not in self.nodes:
            raise UnknownKeyError(f"unknown node key {dst!r}")
        return self._mult.get((src, dst), 0)

    def adjacency(self) -> AdjacencyView:
        return AdjacencyView(self._succ, self._pred)

    def transpose(self) -> "Network":
        """Network with every edge reversed; undirected networks are
        returned unchanged. Payloads are shared, not copied."""
        if not self.directed:
            return self
        return Network(
            True, self.nodes, [Edge(e.dst, e.src, e.weight) for e in self.edges]
        )


def parse_network(data: bytes | str) -> Network:
    """Parse the XML wire format. Raises ParseError for malformed XML
    and FormatError for well-formed XML that is not a valid network."""
    root = parse_xml(data)
    if root.name != "network":
        raise FormatError(f"root element must be <network>, got <{root.name}>")
    for attr in root.attrs:
        if attr != "directed":
            raise FormatError(f"unknown attribute {attr!r} on <network>")
    directed_attr = root.attrs.get("directed", "true")
    if directed_attr not in ("true", "false"):
        raise FormatError(f'directed must be "true" or "false", got {directed_attr!r}')
    directed = directed_attr == "true"

    nodes: dict[str, XmlElement] = {}
    edges: list[Edge] = []
    for child in root.children:
        if isinstance(child, XmlText):
            raise FormatError("text content is not allowed inside <network>")
        if child.name == "node":
            if "key" not in child.attrs:
                raise FormatError("<node> requires a key attribute")
            key = child.attrs["key"]
            if key == "":
                raise FormatError("node key must be nonempty")
            if key in nodes:
                raise FormatError(f"duplicate node key {key!r}")
            # The payload is the node element itself, detached so that
            # upward axes cannot escape into the enclosing document.
            child.parent = None
            child.index = 0
            nodes[key] = child
        elif child.name == "edge":
            for attr in child.attrs:
                if attr not in ("from", "to", "weight"):
                    raise FormatError(f"unknown attribute {attr!r} on <edge>")
            if "from" not in child.attrs or "to" not in child.attrs:
                raise FormatError("<edge> requires from and to attributes")
            if child.children:
                raise FormatError("<edge> must be empty")
            weight_attr = child.attrs.get("weight", "1")
            try:
                weight = Decimal(weight_attr)
            except InvalidOperation:
                raise FormatError(f"edge weight must be numeric, got {weight_attr!r}") from None
            if not weight.is_finite() or weight <= 0:
                raise FormatError(f"edge weight must be positive, got {weight_attr!r}")
            edges.append(Edge(child.attrs["from"], child.attrs["to"], weight))
        else:
            raise FormatError(f"unknown element <{child.name}> inside <network>")
    return Network(directed, nodes, edges)


def load_network(path) -> Network:
    with open(path, "rb") as fh:
        return parse_network(fh.read())


def serialize_network(net: Network) -> str:
    """Serialize back to the wire format; reparsing yields a
    structurally equal network."""
    lines = [f'<network directed="{"true" if net.directed else "false"}">']
    for key in net.node_keys():
        lines.append(serialize_xml(net.nodes[key]))
    for e in net.edges:
        lines.append(
            f'<edge from="{escape_attr(e.src)}" to="{escape_attr(e.dst)}"'
            f' weight="{e.weight}"/>'
        )
    lines.append("</network>")
    return "\n".join(lines)


def _edge_signature(net: Network) -> list[tuple]:
    sig = []
    for e in net.edges:
        ends = (e.src, e.dst) if net.directed else tuple(sorted((e.src, e.dst)))
        sig.append((ends[0], ends[1], e.weight))
    sig.sort()
    return sig


def network_equal(a: Network, b: Network) -> bool:
    """Structural equality: direction, keyed payloads, edge multisets
    (orientation-insensitive when undirected)."""
    if a.directed != b.directed or set(a.nodes) != set(b.nodes):
        return False
    if any(not xml_equal(a.nodes[k], b.nodes[k]) for k in a.nodes):
        return False
    return _edge_signature(a) == _edge_signature(b)
