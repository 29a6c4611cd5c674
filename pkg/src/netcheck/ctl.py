"""Branching-time formulas over labelled networks.

Formulas combine boolean connectives with the temporal operators
EX AX EF AF EG AG EU AU and their inverse forms (IEX, IAX, ...), which
quantify over the transposed edge relation. Path quantification ranges
over maximal paths: a path is either infinite or ends at a node with no
successor. At a sink this makes EX false and AX true, collapses EG and
AF to the current node, and collapses EU to its right argument.

Two evaluators are provided. ``model_check`` is the production
algorithm: bottom-up over the formula with memoization on structural
equality, linear-time set computations per operator. ``oracle_check``
recomputes satisfaction by deliberately different brute-force means and
is capped at 12 nodes; it exists so the two can be compared on random
instances.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    NotSatisfiedError,
    SizeExceededError,
    UnboundAtomError,
    UnknownKeyError,
)
from .network import Network

UNARY_OPS = ("EX", "AX", "EF", "AF", "EG", "AG",
              "IEX", "IAX", "IEF", "IAF", "IEG", "IAG")
UNTIL_OPS = ("EU", "AU", "IEU", "IAU")


@dataclass(frozen=True)
class Bool:
    value: bool


@dataclass(frozen=True)
class Atom:
    """Atomic proposition: a registered proposition id, or (before the
    replacement stage) a filter expression."""

    value: object


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Temporal:
    op: str
    operand: "Formula"

    def __post_init__(self):
        if self.op not in UNARY_OPS:
            raise ValueError(f"unknown temporal operator {self.op!r}")


@dataclass(frozen=True)
class Until:
    op: str
    left: "Formula"
    right: "Formula"

    def __post_init__(self):
        if self.op not in UNTIL_OPS:
            raise ValueError(f"unknown until operator {self.op!r}")


Formula = Bool | Atom | Not | And | Or | Temporal | Until

TRUE = Bool(True)
FALSE = Bool(False)


def formula_length(formula: Formula) -> int:
    """Number of AST nodes."""
    if isinstance(formula, (Bool, Atom)):
        return 1
    if isinstance(formula, Not):
        return 1 + formula_length(formula.operand)
    if isinstance(formula, Temporal):
        return 1 + formula_length(formula.operand)
    return 1 + formula_length(formula.left) + formula_length(formula.right)


def _split_op(op: str) -> tuple[str, bool]:
    """Return (base operator, inverse?)."""
    if op.startswith("I"):
        return op[1:], True
    return op, False


@dataclass
class LabelMap:
    """Assignment of registered proposition ids to nodes.

    ``by_node`` maps every node key to the set of propositions holding
    there; ``props`` is the registered universe, so an unlabelled but
    registered proposition is simply false everywhere, while an
    unregistered one is an error.
    """

    props: frozenset[str]
    by_node: dict[str, frozenset[str]] = field(default_factory=dict)

    @classmethod
    def build(cls, assignments: Mapping[str, Iterable[str]],
              props: Iterable[str] | None = None) -> "LabelMap":
        by_node = {k: frozenset(v) for k, v in assignments.items()}
        universe = frozenset(props) if props is not None else frozenset(
            p for ps in by_node.values() for p in ps
        )
        for key, ps in by_node.items():
            extra = ps - universe
            if extra:
                raise UnboundAtomError(
                    f"node {key!r} labelled with unregistered propositions {sorted(extra)}"
                )
        return cls(universe, by_node)

    def holds(self, prop: str, key: str) -> bool:
        return prop in self.by_node.get(key, frozenset())


def _check_labels(net: Network, labels: LabelMap) -> None:
    unknown = set(labels.by_node) - set(net.nodes)
    if unknown:
        raise UnknownKeyError(
            f"label map mentions keys not in the network: {sorted(unknown)}"
        )


# ---------------------------------------------------------------------------
# Production checker


def model_check(net: Network, labels: LabelMap, formula: Formula) -> frozenset[str]:
    """Satisfaction set of a formula over a labelled network.

    Bottom-up over the formula, memoized on structural equality, with
    per-operator set computations linear in nodes plus edges: EX by
    predecessor scan, EF and EU by backward breadth-first fixpoints, EG
    by restricting to the operand's subgraph and finding the nodes that
    reach a cycle of that subgraph or a sink of the original graph.
    Universal operators go through their existential duals. Inverse
    operators run the same computations on the transposed relation.
    """
    _check_labels(net, labels)
    return _Checker(net, labels).sat(formula)


class _Checker:
    def __init__(self, net: Network, labels: LabelMap):
        self.universe = frozenset(net.nodes)
        view = net.adjacency()
        self.forward = (dict(view.successors), dict(view.predecessors))
        self.backward = (self.forward[1], self.forward[0])
        self.labels = labels
        self.memo: dict[Formula, frozenset[str]] = {}

    def sat(self, f: Formula) -> frozenset[str]:
        hit = self.memo.get(f)
        if hit is not None:
            return hit
        result = self._compute(f)
        self.memo[f] = result
        return result

    def _compute(self, f: Formula) -> frozenset[str]:
        if isinstance(f, Bool):
            return self.universe if f.value else frozenset()
        if isinstance(f, Atom):
            if f.value not in self.labels.props:
                raise UnboundAtomError(f"unregistered proposition {f.value!r}")
            return frozenset(
                k for k, ps in self.labels.by_node.items() if f.value in ps
            )
        if isinstance(f, Not):
            return self.universe - self.sat(f.operand)
        if isinstance(f, And):
            return self.sat(f.left) & self.sat(f.right)
        if isinstance(f, Or):
            return self.sat(f.left) | self.sat(f.right)
        if isinstance(f, Temporal):
            base, inverse = _split_op(f.op)
            succ, pred = self.backward if inverse else self.forward
            s = self.sat(f.operand)
            if base == "EX":
                return self._pre(s, pred)
            if base == "AX":
                return self.universe - self._pre(self.universe - s, pred)
            if base == "EF":
                return self._reach(s, pred)
            if base == "AG":
                return self.universe - self._reach(self.universe - s, pred)
            if base == "EG":
                return self._eg(s, succ, pred)
            # AF via the EG dual.
            return self.universe - self._eg(self.universe - s, succ, pred)
        base, inverse = _split_op(f.op)
        succ, pred = self.backward if inverse else self.forward
        a = self.sat(f.left)
        b = self.sat(f.right)
        if base == "EU":
            return self._eu(a, b, pred)
        # AU(a, b) fails where some path breaks a before reaching b, or
        # some maximal path avoids b forever.
        not_b = self.universe - b
        bad = self._eu(not_b, (self.universe - a) & not_b, pred)
        bad |= self._eg(not_b, succ, pred)
        return self.universe - bad

    @staticmethod
    def _pre(s: frozenset[str], pred) -> frozenset[str]:
        return frozenset(v for w in s for v in pred[w])

    @staticmethod
    def _reach(s: frozenset[str], pred) -> frozenset[str]:
        seen = set(s)
        queue = deque(s)
        while queue:
            w = queue.popleft()
            for v in pred[w]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return frozenset(seen)

    @staticmethod
    def _eu(a: frozenset[str], b: frozenset[str], pred) -> frozenset[str]:
        seen = set(b)
        queue = deque(b)
        while queue:
            w = queue.popleft()
            for v in pred[w]:
                if v not in seen and v in a:
                    seen.add(v)
                    queue.append(v)
        return frozenset(seen)

    def _eg(self, s: frozenset[str], succ, pred) -> frozenset[str]:
        if not s:
            return frozenset()
        # A maximal path inside s either stops at a sink of the original
        # graph or eventually loops within s.
        targets = {v for v in s if not succ[v] or v in succ[v]}
        for comp in _strongly_connected(s, succ):
            if len(comp) > 1:
                targets.update(comp)
        seen = set(targets)
        queue = deque(targets)
        while queue:
            w = queue.popleft()
            for v in pred[w]:
                if v in s and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return frozenset(seen)


def _strongly_connected(nodes: frozenset[str], succ) -> list[list[str]]:
    """Tarjan's algorithm, iterative, restricted to the given node set."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    result: list[list[str]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            v, ci = work.pop()
            if ci == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            children = [w for w in succ[v] if w in nodes]
            advanced = False
            for j in range(ci, len(children)):
                w = children[j]
                if w not in index:
                    work.append((v, j + 1))
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                result.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return result


# ---------------------------------------------------------------------------
# Witness extraction


@dataclass(frozen=True)
class Witness:
    """A path demonstrating a top-level existential operator.

    ``kind`` is "path" (two or more nodes), "node" (the start already
    settles it), or "none-available" for operators that have no single
    finite witness path. For inverse operators the path follows the
    transposed relation and ``in_transpose`` is set.
    """

    kind: str
    path: tuple[str, ...] = ()
    in_transpose: bool = False


_WITNESSABLE = {"EX", "EF", "EU", "IEX", "IEF", "IEU"}


def witness(net: Network, labels: LabelMap, formula: Formula, start: str) -> Witness:
    """Shortest witness path for a top-level EX, EF, or EU (or inverse)
    at ``start``; ties are broken by ascending key at each expansion.

    Returns kind "none-available" when the top operator has no finite
    witness (EG, universal and boolean forms). Raises NotSatisfiedError
    when the node does not satisfy the formula, UnknownKeyError for an
    unknown node.
    """
    if start not in net.nodes:
        raise UnknownKeyError(f"unknown node key {start!r}")
    if isinstance(formula, Temporal):
        op = formula.op
    elif isinstance(formula, Until):
        op = formula.op
    else:
        op = None
    if op not in _WITNESSABLE:
        return Witness("none-available")

    if start not in model_check(net, labels, formula):
        raise NotSatisfiedError(f"node {start!r} does not satisfy the formula")

    base, inverse = _split_op(op)
    view = net.adjacency()
    adj = view.predecessors if inverse else view.successors
    checker = _Checker(net, labels)

    if base == "EX":
        target = checker.sat(formula.operand)
        for w in adj[start]:  # ascending key order
            if w in target:
                return Witness("path", (start, w), inverse)
        raise AssertionError("satisfied EX without a witnessing successor")

    if base == "EF":
        targets = checker.sat(formula.operand)
        allowed = frozenset(net.nodes)
    else:
        targets = checker.sat(formula.right)
        allowed = checker.sat(formula.left)

    if start in targets:
        return Witness("node", (start,), inverse)
    parent: dict[str, str | None] = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w in parent:
                continue
            parent[w] = u
            if w in targets:
                path = [w]
                node: str | None = u
                while node is not None:
                    path.append(node)
                    node = parent[node]
                path.reverse()
                return Witness("path", tuple(path), inverse)
            if w in allowed:
                queue.append(w)
    raise AssertionError("satisfied formula without a witness path")


# ---------------------------------------------------------------------------
# Brute-force oracle


_ORACLE_MAX_NODES = 12


def oracle_check(net: Network, labels: LabelMap, formula: Formula) -> frozenset[str]:
    """Satisfaction set by brute force, for cross-checking.

    EX/AX scan neighbours directly, EF/AG go through a reflexive
    transitive-closure matrix, EU iterates its defining equation from
    the empty set, and EG searches for a maximal path (sink or lasso)
    by depth-first search with explicit cycle detection. Exponential in
    the worst case; refuses networks with more than 12 nodes.
    """
    if net.n > _ORACLE_MAX_NODES:
        raise SizeExceededError(
            f"oracle_check is capped at {_ORACLE_MAX_NODES} nodes, got {net.n}"
        )
    _check_labels(net, labels)
    return _Oracle(net, labels).sat(formula)


class _Oracle:
    def __init__(self, net: Network, labels: LabelMap):
        self.keys = net.node_keys()
        self.universe = frozenset(self.keys)
        view = net.adjacency()
        self.succ = dict(view.successors)
        self.pred = dict(view.predecessors)
        self.labels = labels
        self._closures: dict[bool, dict[str, frozenset[str]]] = {}

    def sat(self, f: Formula) -> frozenset[str]:
        if isinstance(f, Bool):
            return self.universe if f.value else frozenset()
        if isinstance(f, Atom):
            if f.value not in self.labels.props:
                raise UnboundAtomError(f"unregistered proposition {f.value!r}")
            return frozenset(k for k in self.keys if self.labels.holds(f.value, k))
        if isinstance(f, Not):
            return self.universe - self.sat(f.operand)
        if isinstance(f, And):
            return self.sat(f.left) & self.sat(f.right)
        if isinstance(f, Or):
            return self.sat(f.left) | self.sat(f.right)
        if isinstance(f, Temporal):
            base, inverse = _split_op(f.op)
            adj = self.pred if inverse else self.succ
            s = self.sat(f.operand)
            if base == "EX":
                return frozenset(v for v in self.keys if any(w in s for w in adj[v]))
            if base == "AX":
                return frozenset(v for v in self.keys if all(w in s for w in adj[v]))
            if base == "EF":
                reach = self._closure(inverse)
                return frozenset(v for v in self.keys if reach[v] & s)
            if base == "AG":
                reach = self._closure(inverse)
                return frozenset(v for v in self.keys if reach[v] <= s)
            if base == "EG":
                return frozenset(v for v in self.keys if self._eg_holds(v, s, adj))
            # AF: no maximal path avoids the operand forever.
            return frozenset(
                v for v in self.keys if not self._eg_holds(v, self.universe - s, adj)
            )
        base, inverse = _split_op(f.op)
        adj = self.pred if inverse else self.succ
        a = self.sat(f.left)
        b = self.sat(f.right)
        if base == "EU":
            return self._eu(a, b, adj)
        # AU: no finite prefix breaks the left argument before the right
        # one holds, and no maximal path avoids the right one forever.
        not_b = self.universe - b
        bad_prefix = self._eu(not_b, (self.universe - a) & not_b, adj)
        return frozenset(
            v for v in self.keys
            if v not in bad_prefix and not self._eg_holds(v, not_b, adj)
        )

    def _closure(self, inverse: bool) -> dict[str, frozenset[str]]:
        if inverse not in self._closures:
            adj = self.pred if inverse else self.succ
            reach = {v: {v} for v in self.keys}
            changed = True
            while changed:
                changed = False
                for v in self.keys:
                    new = set(reach[v])
                    for w in adj[v]:
                        new |= reach[w]
                    if new != reach[v]:
                        reach[v] = new
                        changed = True
            self._closures[inverse] = {v: frozenset(r) for v, r in reach.items()}
        return self._closures[inverse]

    def _eu(self, a: frozenset[str], b: frozenset[str], adj) -> frozenset[str]:
        z: frozenset[str] = frozenset()
        while True:
            nz = b | frozenset(
                v for v in a if any(w in z for w in adj[v])
            )
            if nz == z:
                return z
            z = nz

    def _eg_holds(self, v: str, allowed: frozenset[str], adj) -> bool:
        if v not in allowed:
            return False
        on_path: set[str] = set()

        def walk(u: str) -> bool:
            if not adj[u]:
                return True  # sink of the full graph: the path may stop
            on_path.add(u)
            try:
                for w in adj[u]:
                    if w in allowed and (w in on_path or walk(w)):
                        return True
            finally:
                on_path.discard(u)
            return False

        return walk(v)
