"""Per-node coin operators with removed-edge masking.

Each node j gets an N x N unitary that acts as a chosen coin family on
the allowed coin directions S_j and as the exact identity on every
other index: for k not in S_j, row k and column k are zero except for
the diagonal 1. Those entries are constructed, not computed, so the
masking pattern is bit-exact and an amplitude that starts at zero on a
masked index can never leave zero.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionUnsupported,
    NotUnitary,
    ParseError,
    ValidationError,
)
from .graphs import Graph

UNITARITY_TOL = 1e-10

FAMILIES = ("hadamard", "grover", "dft", "custom")


@dataclass(frozen=True)
class CoinSpec:
    family: str = "grover"
    custom_matrix: np.ndarray | None = None
    overrides: dict[int, "CoinSpec"] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValidationError(
                f"unknown coin family {self.family!r}; expected one of {FAMILIES}"
            )
        if self.family == "custom" and self.custom_matrix is None:
            raise ValidationError("family 'custom' requires a matrix")

    def resolve(self, node: int) -> "CoinSpec":
        return self.overrides.get(node, self)


@dataclass(frozen=True)
class CoinSet:
    n: int
    coins: tuple[np.ndarray, ...]


def assert_unitary(u: np.ndarray, tol: float = UNITARITY_TOL, what: str = "matrix") -> None:
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionMismatch(f"{what} must be square, got shape {u.shape}")
    dev = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
    if dev > tol:
        raise NotUnitary(f"{what} deviates from unitarity by {dev:.3e} (tol {tol:.0e})")


def named_coin(family: str, dim: int) -> np.ndarray:
    if dim < 1:
        raise DimensionUnsupported(f"coin dimension must be >= 1, got {dim}")
    if family == "hadamard":
        if dim & (dim - 1) != 0:
            raise DimensionUnsupported(
                f"hadamard coin needs a power-of-two dimension, got {dim}"
            )
        h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
        out = np.array([[1.0]])
        while out.shape[0] < dim:
            out = np.kron(out, h)
        return out.astype(complex)
    if family == "grover":
        return (2.0 / dim) * np.ones((dim, dim), dtype=complex) - np.eye(dim)
    if family == "dft":
        a = np.arange(dim)
        omega = np.exp(2j * np.pi / dim)
        return omega ** np.outer(a, a) / math.sqrt(dim)
    raise ValidationError(f"unknown coin family {family!r}")


def _active_block(spec: CoinSpec, dim: int, node: int) -> np.ndarray:
    if spec.family == "custom":
        m = np.asarray(spec.custom_matrix, dtype=complex)
        if m.shape != (dim, dim):
            raise DimensionMismatch(
                f"custom coin for node {node} has shape {m.shape}, "
                f"needs ({dim}, {dim}) to match the node's {dim} allowed directions"
            )
        assert_unitary(m, what=f"custom coin for node {node}")
        return m
    return named_coin(spec.family, dim)


def masked_coin(g: Graph, j: int, spec: CoinSpec) -> np.ndarray:
    """Identity outside S_j, the resolved coin family on S_j."""
    allowed = g.neighbors(j)
    n = g.n_nodes
    out = np.eye(n, dtype=complex)
    if not allowed:
        return out
    node_spec = spec.resolve(j)
    block = _active_block(node_spec, len(allowed), j)
    idx = np.array([k - 1 for k in allowed])
    out[np.ix_(idx, idx)] = block
    return out


def build_coin_set(g: Graph, spec: CoinSpec) -> CoinSet:
    coins: list[np.ndarray] = []
    failures: list[tuple[int, Exception]] = []
    for j in range(1, g.n_nodes + 1):
        try:
            c = masked_coin(g, j, spec)
            assert_unitary(c, what=f"coin for node {j}")
            coins.append(c)
        except (DimensionUnsupported, DimensionMismatch, NotUnitary, ValidationError) as e:
            failures.append((j, e))
    if failures:
        detail = "; ".join(f"node {j}: {e}" for j, e in failures)
        raise type(failures[0][1])(f"coin construction failed for {len(failures)} node(s): {detail}")
    return CoinSet(g.n_nodes, tuple(coins))


def _parse_matrix(raw: object, where: str) -> np.ndarray:
    # Row-major [re, im] pairs: [[[1,0],[0,0]], [[0,0],[1,0]]] is the 2x2 identity.
    try:
        m = np.array([[complex(re, im) for re, im in row] for row in raw], dtype=complex)
    except (TypeError, ValueError) as e:
        raise ParseError(f"{where}: matrix must be rows of [re,im] pairs: {e}") from e
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{where}: matrix must be square, got shape {m.shape}")
    return m


def _parse_spec_node(raw: object, where: str) -> CoinSpec:
    if isinstance(raw, str):
        if raw not in FAMILIES or raw == "custom":
            raise ValidationError(
                f"{where}: expected a family name in {FAMILIES[:-1]}, got {raw!r}"
            )
        return CoinSpec(family=raw)
    if isinstance(raw, dict):
        if "custom" in raw:
            return CoinSpec(family="custom", custom_matrix=_parse_matrix(raw["custom"], where))
        if "family" in raw:
            return _parse_spec_node(raw["family"], where)
        raise ParseError(f"{where}: object needs a 'family' or 'custom' field")
    raise ParseError(f"{where}: expected family name or object, got {type(raw).__name__}")


def parse_coin_spec(text: str) -> CoinSpec:
    """Parse the JSON coin format: {"default": ..., "overrides": {"3": ...}, "custom": ...}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise ParseError("coin spec must be a JSON object")
    unknown = set(doc) - {"default", "overrides", "custom"}
    if unknown:
        raise ParseError(f"unknown coin spec field(s): {sorted(unknown)}")
    if "custom" in doc and "default" in doc:
        raise ParseError("give either 'default' or a top-level 'custom', not both")
    if "custom" in doc:
        base = CoinSpec(family="custom", custom_matrix=_parse_matrix(doc["custom"], "custom"))
    elif "default" in doc:
        base = _parse_spec_node(doc["default"], "default")
    else:
        base = CoinSpec()
    overrides: dict[int, CoinSpec] = {}
    for key, raw in doc.get("overrides", {}).items():
        try:
            node = int(key)
        except ValueError as e:
            raise ParseError(f"override key {key!r} is not a node index") from e
        if node < 1:
            raise ValidationError(f"override node {node} must be >= 1")
        overrides[node] = _parse_spec_node(raw, f"overrides[{key}]")
    return CoinSpec(
        family=base.family, custom_matrix=base.custom_matrix, overrides=overrides
    )
