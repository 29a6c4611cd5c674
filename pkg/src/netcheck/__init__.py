"""Model checking of XML-attributed networks.

Networks carry an XML payload on every node. Properties are written as
branching-time formulas whose atoms are XPath-style filters evaluated
against the payloads, so one query can mix navigation inside a node's
document with navigation along the network's edges.
"""

__version__ = "0.1.0"

from .checker import (
    FilterRegistry,
    check,
    collect_filters,
    label_nodes,
    parse_formula,
    replace_filters,
)
from .ctl import (
    And,
    Atom,
    Bool,
    Not,
    Or,
    Temporal,
    Until,
    Witness,
    formula_length,
    model_check,
    oracle_check,
    witness,
)
from .errors import (
    EmptyNetworkError,
    FilterTypeError,
    FormatError,
    MissingFilterError,
    NotSatisfiedError,
    ParseError,
    SizeExceededError,
    UnboundAtomError,
    UnknownKeyError,
)
from .metrics import (
    ComponentDecomposition,
    DegreeHistogram,
    clustering_coefficient,
    components,
    degree_histogram,
    diameter,
    eulerian_path_exists,
    mean_geodesic,
)
from .network import (
    Edge,
    Network,
    load_network,
    network_equal,
    parse_network,
    serialize_network,
)
from .xmldoc import XmlAttribute, XmlElement, XmlText, parse_xml, serialize_xml, xml_equal
from .xpath import eval_filter, parse_filter, render_filter

__all__ = [
    "__version__",
    "And",
    "Atom",
    "Bool",
    "ComponentDecomposition",
    "DegreeHistogram",
    "Edge",
    "EmptyNetworkError",
    "FilterRegistry",
    "FilterTypeError",
    "FormatError",
    "MissingFilterError",
    "Network",
    "Not",
    "NotSatisfiedError",
    "Or",
    "ParseError",
    "SizeExceededError",
    "Temporal",
    "UnboundAtomError",
    "UnknownKeyError",
    "Until",
    "Witness",
    "XmlAttribute",
    "XmlElement",
    "XmlText",
    "check",
    "clustering_coefficient",
    "collect_filters",
    "components",
    "degree_histogram",
    "diameter",
    "eulerian_path_exists",
    "eval_filter",
    "formula_length",
    "label_nodes",
    "load_network",
    "mean_geodesic",
    "model_check",
    "network_equal",
    "oracle_check",
    "parse_filter",
    "parse_formula",
    "parse_network",
    "parse_xml",
    "render_filter",
    "replace_filters",
    "serialize_network",
    "serialize_xml",
    "witness",
    "xml_equal",
]
