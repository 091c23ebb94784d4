"""Undirected graphs with self loops, padded to power-of-two order.

Nodes are 1-based. Edges are unordered pairs {j, k}; a self loop {j, j}
is an ordinary edge and is what allows a walker to hold amplitude in
|j,j>. Construction pads the node count up to the next power of two
with fully isolated nodes, which later receive identity coins.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NodeOutOfRange,
    ParseError,
    RemovalNotPresent,
    ValidationError,
)


def _next_power_of_two(n: int) -> int:
    return 1 if n <= 1 else 2 ** math.ceil(math.log2(n))


def _normalize(j: int, k: int) -> tuple[int, int]:
    return (j, k) if j <= k else (k, j)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph on ``n_nodes`` (a power of two) nodes.

    ``padded_from`` records the pre-padding node count, or None when no
    padding happened. Padded nodes have empty neighbor sets.
    """

    n_nodes: int
    edges: frozenset[tuple[int, int]]
    padded_from: int | None = None

    def __post_init__(self) -> None:
        n = self.n_nodes
        if n < 1 or (n & (n - 1)) != 0:
            raise ValidationError(f"node count {n} is not a power of two")
        limit = self.padded_from if self.padded_from is not None else n
        for j, k in self.edges:
            if not (1 <= j <= k <= n):
                raise ValidationError(f"edge ({j},{k}) out of range or unnormalized")
            if j > limit or k > limit:
                raise ValidationError(f"edge ({j},{k}) touches a padded node")

    def has_edge(self, j: int, k: int) -> bool:
        return _normalize(j, k) in self.edges

    def neighbors(self, j: int) -> tuple[int, ...]:
        if not (1 <= j <= self.n_nodes):
            raise NodeOutOfRange(f"node {j} not in [1, {self.n_nodes}]")
        out = [k for k in range(1, self.n_nodes + 1) if self.has_edge(j, k)]
        return tuple(out)

    def allowed_states(self) -> list[tuple[int, int]]:
        """All |j,k> with {j,k} an edge, both orientations, row-major order."""
        out = []
        for j in range(1, self.n_nodes + 1):
            for k in range(1, self.n_nodes + 1):
                if self.has_edge(j, k):
                    out.append((j, k))
        return out

    def isolation_mask(self) -> np.ndarray:
        """Boolean N x N array, True where the state |j,k> is isolated."""
        n = self.n_nodes
        mask = np.ones((n, n), dtype=bool)
        for j, k in self.allowed_states():
            mask[j - 1, k - 1] = False
        return mask


@dataclass(frozen=True)
class CoinDirections:
    node: int
    allowed: tuple[int, ...]


def complete_graph(n: int) -> Graph:
    """Complete graph on n nodes including self loops, padded to a power of two."""
    if n < 1:
        raise ValidationError(f"node count must be >= 1, got {n}")
    size = _next_power_of_two(n)
    edges = frozenset(
        (j, k) for j in range(1, n + 1) for k in range(j, n + 1)
    )
    return Graph(size, edges, padded_from=n if size != n else None)


def remove_edges(g: Graph, removals: list[tuple[int, int]]) -> Graph:
    """Return g without the listed edges; every removal must be present."""
    remaining = set(g.edges)
    for j, k in removals:
        if not (1 <= j <= g.n_nodes and 1 <= k <= g.n_nodes):
            raise NodeOutOfRange(f"removal ({j},{k}) outside [1, {g.n_nodes}]")
        pair = _normalize(j, k)
        if pair not in remaining:
            raise RemovalNotPresent(f"edge {{{j},{k}}} is not present")
        remaining.remove(pair)
    return Graph(g.n_nodes, frozenset(remaining), padded_from=g.padded_from)


def coin_directions(g: Graph, j: int) -> CoinDirections:
    return CoinDirections(node=j, allowed=g.neighbors(j))


def parse_graph(text: str) -> Graph:
    """Parse the JSON graph format {"nodes": int, "edges": [[j,k], ...]}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    if "nodes" not in doc:
        raise ParseError("missing field 'nodes'")
    if "edges" not in doc:
        raise ParseError("missing field 'edges'")
    n = doc["nodes"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"field 'nodes' must be a positive integer, got {n!r}")
    raw = doc["edges"]
    if not isinstance(raw, list):
        raise ParseError("field 'edges' must be a list of [j,k] pairs")
    seen: set[tuple[int, int]] = set()
    for idx, item in enumerate(raw):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in item)
        ):
            raise ParseError(f"edges[{idx}] must be a pair of integers, got {item!r}")
        j, k = item
        if not (1 <= j <= n and 1 <= k <= n):
            raise ValidationError(f"edges[{idx}] = [{j},{k}] has endpoint outside [1, {n}]")
        pair = _normalize(j, k)
        if pair in seen:
            raise ValidationError(f"edges[{idx}] = [{j},{k}] duplicates an earlier edge")
        seen.add(pair)
    size = _next_power_of_two(n)
    return Graph(size, frozenset(seen), padded_from=n if size != n else None)


def serialize_graph(g: Graph) -> str:
    """Inverse of parse_graph; emits the original (pre-padding) node count."""
    nodes = g.padded_from if g.padded_from is not None else g.n_nodes
    edges = sorted(g.edges)
    return json.dumps({"nodes": nodes, "edges": [list(e) for e in edges]})


def random_graph(n: int, seed: int, remove_fraction: float = 0.3) -> Graph:
    """Seeded fixture: complete n-graph with ceil(remove_fraction * E) edges removed.

    Deterministic for a given (n, seed, remove_fraction).
    """
    if not (0.0 <= remove_fraction < 1.0):
        raise ValidationError(f"remove_fraction must be in [0, 1), got {remove_fraction}")
    g = complete_graph(n)
    edges = sorted(g.edges)
    count = math.ceil(remove_fraction * len(edges))
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(edges), size=count, replace=False)
    return remove_edges(g, [edges[i] for i in sorted(chosen)])
