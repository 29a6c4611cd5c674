"""Whole-network statistics.

Clustering, components, and geodesic statistics are defined on the
undirected simple view of the network: directions are dropped, parallel
edges collapse, self-loops are ignored. Degree histograms and the
Eulerian-path criterion instead respect edge multiplicity. Ratios are
returned as exact f:class:`fractions.Fraction` values so callers decide
how to format them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyNetworkError, FormatError
from .network import Network


def simple_neighbours(net: Network) -> dict[str, set[str]]:
    """Undirected simple view: distinct neighbours, no self-loops."""
    adj: dict[str, set[str]] = {k: set() for k in net.nodes}
    for e in net.edges:
        if e.src != e.dst:
            adj[e.src].add(e.dst)
            adj[e.dst].add(e.src)
    return adj


def triangle_triple_counts(net: Network) -> tuple[int, int]:
    """(number of triangles, number of connected triples) of the simple
    undirected view. A triple is a node with an unordered pair of
    distinct neighbours, so each triangle yields three triples."""
    adj = simple_neighbours(net)
    triples = sum(len(nbrs) * (len(nbrs) - 1) // 2 for nbrs in adj.values())
    triangles = 0
    for v, nbrs in adj.items():
        for w in nbrs:
            if w > v:
                # common neighbours above w close each triangle once
                triangles += sum(1 for u in (adj[v] & adj[w]) if u > w)
    return triangles, triples


def clustering_coefficient(net: Network) -> Fraction:
    """Transitivity ratio: three times the triangle count over the
    connected-triple count; 0 when there are no triples."""
    triangles, triples = triangle_triple_counts(net)
    if triples == 0:
        return Fraction(0)
    return Fraction(3 * triangles, triples)


@dataclass(frozen=True)
class ComponentDecomposition:
    """Weakly connected components, largest first (ties: smallest key),
    keys ascending inside each component."""

    components: tuple[tuple[str, ...], ...]

    @property
    def giant(self) -> tuple[str, ...]:
        return self.components[0] if self.components else ()

    def __len__(self) -> int:
        return len(self.components)


def components(net: Network) -> ComponentDecomposition:
    adj = simple_neighbours(net)
    seen: set[str] = set()
    comps: list[tuple[str, ...]] = []
    for start in net.node_keys():
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(tuple(sorted(comp)))
    comps.sort(key=lambda c: (-len(c), c[0]))
    return ComponentDecomposition(tuple(comps))


def _giant_distance_sums(net: Network) -> tuple[int, int, int]:
    """(giant size, eccentricity max, sum of ordered-pair distances)
    over the giant component, by per-source breadth-first search."""
    if net.n == 0:
        raise EmptyNetworkError("network has no nodes")
    giant = components(net).giant
    adj = simple_neighbours(net)
    members = set(giant)
    longest = 0
    total = 0
    for source in giant:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w in members and w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        longest = max(longest, max(dist.values()))
        total += sum(dist.values())
    return len(giant), longest, total


def diameter(net: Network) -> int:
    """Longest geodesic within the giant component."""
    return _giant_distance_sums(net)[1]


def mean_geodesic(net: Network) -> Fraction:
    """Mean shortest-path length over unordered distinct pairs of the
    giant component; 0 for a single-node giant."""
    size, _, total = _giant_distance_sums(net)
    if size < 2:
        return Fraction(0)
    return Fraction(total, size * (size - 1))


@dataclass(frozen=True)
class DegreeHistogram:
    """Node counts per degree. Undirected networks fill ``counts``;
    directed ones fill ``in_counts`` and ``out_counts``."""

    directed: bool
    counts: dict[int, int] | None = None
    in_counts: dict[int, int] | None = None
    out_counts: dict[int, int] | None = None


def degree_histogram(net: Network) -> DegreeHistogram:
    """Degrees counted with edge multiplicity; an undirected self-loop
    adds two, a directed one adds one to each side."""
    if net.directed:
        ins = {k: 0 for k in net.nodes}
        outs = {k: 0 for k in net.nodes}
        for e in net.edges:
            outs[e.src] += 1
            ins[e.dst] += 1
        return DegreeHistogram(True, None, _histogram(ins), _histogram(outs))
    degs = {k: 0 for k in net.nodes}
    for e in net.edges:
        degs[e.src] += 1
        degs[e.dst] += 1
    return DegreeHistogram(False, _histogram(degs))


def _histogram(values: dict[str, int]) -> dict[int, int]:
    hist: dict[int, int] = {}
    for v in values.values():
        hist[v] = hist.get(v, 0) + 1
    return dict(sorted(hist.items()))


def eulerian_path_exists(net: Network) -> bool:
    """Whether a trail using every edge exactly once exists: all edges
    in one component and zero or two odd-degree nodes.

    Undirected networks only. Weights act as multiplicities here and
    must be positive integers; otherwise FormatError.
    """
    if net.directed:
        raise ValueError("Eulerian path criterion applies to undirected networks")
    degs = {k: 0 for k in net.nodes}
    for e in net.edges:
        w = e.weight
        if w != w.to_integral_value():
            raise FormatError(
                f"edge weight {w} is not an integer multiplicity"
            )
        degs[e.src] += int(w)
        degs[e.dst] += int(w)
    odd = sum(1 for d in degs.values() if d % 2 == 1)
    if odd not in (0, 2):
        return False
    # every edge in one component (isolated nodes do not matter)
    touched = [k for k, d in degs.items() if d > 0]
    if not touched:
        return True
    adj = simple_neighbours(net)
    seen = {touched[0]}
    queue = deque([touched[0]])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return all(k in seen for k in touched)
