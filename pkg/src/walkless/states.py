"""Walker state: an N x N complex amplitude array over |node, coin>.

Row index j is the node register, column index k the coin register.
The translation |j,k> -> |k,j> is literally a matrix transpose.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraph, IndexOutOfRange, ParseError, ValidationError
from .graphs import Graph

NORM_TOL = 1e-12


@dataclass(frozen=True)
class StateSpace:
    n: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if self.amps.shape != (self.n, self.n):
            raise ValidationError(
                f"amplitude array shape {self.amps.shape} does not match n={self.n}"
            )

    def amplitude(self, j: int, k: int) -> complex:
        """A_{j,k} with 1-based indices."""
        if not (1 <= j <= self.n and 1 <= k <= self.n):
            raise IndexOutOfRange(f"state |{j},{k}> outside [1, {self.n}]^2")
        return complex(self.amps[j - 1, k - 1])


@dataclass(frozen=True)
class NodeDistribution:
    probs: np.ndarray

    def __post_init__(self) -> None:
        if np.any(self.probs < -1e-15):
            raise ValidationError("negative probability entry")


def localized_state(n: int, j: int, k: int) -> StateSpace:
    if not (1 <= j <= n and 1 <= k <= n):
        raise IndexOutOfRange(f"state |{j},{k}> outside [1, {n}]^2")
    amps = np.zeros((n, n), dtype=complex)
    amps[j - 1, k - 1] = 1.0
    return StateSpace(n, amps)


def uniform_state(g: Graph) -> StateSpace:
    """Equal weight on every allowed |j,k>, both orientations of each edge."""
    allowed = g.allowed_states()
    if not allowed:
        raise EmptyGraph("graph has no edges, no allowed states to populate")
    amps = np.zeros((g.n_nodes, g.n_nodes), dtype=complex)
    w = 1.0 / np.sqrt(len(allowed))
    for j, k in allowed:
        amps[j - 1, k - 1] = w
    return StateSpace(g.n_nodes, amps)


def transpose(s: StateSpace) -> StateSpace:
    return StateSpace(s.n, s.amps.T.copy())


def norm(s: StateSpace) -> float:
    return float(np.linalg.norm(s.amps))


def node_distribution(s: StateSpace) -> NodeDistribution:
    return NodeDistribution(np.sum(np.abs(s.amps) ** 2, axis=1))


def state_to_csv(s: StateSpace) -> str:
    out = io.StringIO()
    out.write("j,k,re,im\n")
    for j in range(1, s.n + 1):
        for k in range(1, s.n + 1):
            a = s.amps[j - 1, k - 1]
            out.write(f"{j},{k},{float(a.real)!r},{float(a.imag)!r}\n")
    return out.getvalue()


def state_from_csv(text: str) -> StateSpace:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "j,k,re,im":
        raise ParseError("expected header 'j,k,re,im'")
    entries: dict[tuple[int, int], complex] = {}
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 4:
            raise ParseError(f"expected 4 fields, got {len(parts)}: {ln!r}")
        try:
            j, k = int(parts[0]), int(parts[1])
            re, im = float(parts[2]), float(parts[3])
        except ValueError as e:
            raise ParseError(f"bad row {ln!r}: {e}") from e
        entries[(j, k)] = complex(re, im)
    n = max(max(j, k) for j, k in entries)
    amps = np.zeros((n, n), dtype=complex)
    for (j, k), a in entries.items():
        if not (1 <= j <= n and 1 <= k <= n):
            raise ValidationError(f"index ({j},{k}) outside [1, {n}]^2")
        amps[j - 1, k - 1] = a
    return StateSpace(n, amps)


def state_to_json(s: StateSpace) -> str:
    rows = [[[float(a.real), float(a.imag)] for a in row] for row in s.amps]
    return json.dumps({"n": s.n, "amps": rows})


def state_from_json(text: str) -> StateSpace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}") from e
    if not isinstance(doc, dict) or "n" not in doc or "amps" not in doc:
        raise ParseError("expected object with fields 'n' and 'amps'")
    n = doc["n"]
    rows = doc["amps"]
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"'n' must be a positive integer, got {n!r}")
    try:
        amps = np.array(
            [[complex(re, im) for re, im in row] for row in rows], dtype=complex
        )
    except (TypeError, ValueError) as e:
        raise ParseError(f"'amps' must be an n x n array of [re,im] pairs: {e}") from e
    if amps.shape != (n, n):
        raise ValidationError(f"'amps' shape {amps.shape} does not match n={n}")
    return StateSpace(n, amps)
