"""Optical-lattice simulation of the walk hardware.

The walk array lives on a square grid with a key site every spacing-th
site along each axis; state |j,k> sits at ((j-1)*spacing, (k-1)*spacing).
Each site carries two internal levels. Rotations act instantaneously on
a site's (|1>, |0>) amplitude pair; transport shifts every |1> amplitude
by an integer number of sites along one axis while |0> stays put. A
pairwise rotation runs as the five-step protocol: flip p to |1>, move
it onto q, rotate the (visitor, host) pair, move back, flip back.

Operations mutate the LatticeState in place and return it; callers that
need the old state copy() it first.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .csd import Stage
from .errors import SiteOutOfRange, TransportOutOfRange, ValidationError
from .states import NodeDistribution, StateSpace

PI_FLIP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)

# sites array layout: [x, y, spin] with spin index 0 <-> |0>, 1 <-> |1>


@dataclass(frozen=True)
class LatticeConfig:
    n: int
    spacing: int = 2
    wavelength: float = 785.0
    rotation_overshoot: float = 0.0
    transport_leakage: float = 0.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.n}")
        if self.spacing < 1:
            raise ValidationError(f"spacing must be >= 1, got {self.spacing}")

    @property
    def extent(self) -> int:
        return (self.n - 1) * self.spacing + 1

    def key_site(self, j: int, k: int) -> tuple[int, int]:
        return (j - 1) * self.spacing, (k - 1) * self.spacing


@dataclass(frozen=True)
class TransportEvent:
    axis: str
    shift: int
    theta: float  # polarization angle, radians
    displacement: float  # theta * wavelength / (2 pi)


@dataclass
class LatticeState:
    cfg: LatticeConfig
    sites: np.ndarray
    transport_log: list[TransportEvent] = field(default_factory=list)

    def copy(self) -> "LatticeState":
        return LatticeState(self.cfg, self.sites.copy(), list(self.transport_log))


@dataclass(frozen=True)
class PairProtocolTrace:
    steps: tuple[np.ndarray, ...]  # site arrays after each of the five steps


@dataclass(frozen=True)
class ReadOut:
    state: StateSpace
    state_probs: np.ndarray
    node_dist: NodeDistribution


def load_state(s: StateSpace, cfg: LatticeConfig) -> LatticeState:
    if cfg.n != s.n:
        raise ValidationError(f"state dimension {s.n} != lattice dimension {cfg.n}")
    sites = np.zeros((cfg.extent, cfg.extent, 2), dtype=complex)
    sites[:: cfg.spacing, :: cfg.spacing, 0] = s.amps
    return LatticeState(cfg, sites)


def norm(ls: LatticeState) -> float:
    return float(np.linalg.norm(ls.sites))


def spin_one_population(ls: LatticeState) -> float:
    return float(np.sum(np.abs(ls.sites[:, :, 1]) ** 2))


def intermediate_population(ls: LatticeState) -> float:
    """Total probability outside key sites, both internal levels."""
    mask = np.ones(ls.sites.shape[:2], dtype=bool)
    mask[:: ls.cfg.spacing, :: ls.cfg.spacing] = False
    return float(np.sum(np.abs(ls.sites[mask]) ** 2))


def stirap_rotate(ls: LatticeState, sites: list[tuple[int, int]], u: np.ndarray) -> LatticeState:
    extent = ls.cfg.extent
    u = np.asarray(u, dtype=complex)
    eps = ls.cfg.rotation_overshoot
    if eps != 0.0:
        c, s = math.cos(eps), math.sin(eps)
        u = u @ np.array([[c, s], [-s, c]], dtype=complex)
    for x, y in sites:
        if not (0 <= x < extent and 0 <= y < extent):
            raise SiteOutOfRange(f"site ({x},{y}) outside [0,{extent - 1}]^2")
        a1, a0 = ls.sites[x, y, 1], ls.sites[x, y, 0]
        ls.sites[x, y, 1] = u[0, 0] * a1 + u[0, 1] * a0
        ls.sites[x, y, 0] = u[1, 0] * a1 + u[1, 1] * a0
    return ls


def _shift_plane(plane: np.ndarray, axis_idx: int, shift: int) -> np.ndarray:
    out = np.zeros_like(plane)
    src = [slice(None), slice(None)]
    dst = [slice(None), slice(None)]
    if shift > 0:
        src[axis_idx] = slice(0, plane.shape[axis_idx] - shift)
        dst[axis_idx] = slice(shift, None)
    else:
        src[axis_idx] = slice(-shift, None)
        dst[axis_idx] = slice(0, plane.shape[axis_idx] + shift)
    out[tuple(dst)] = plane[tuple(src)]
    return out


def transport(ls: LatticeState, axis: str, shift: int) -> LatticeState:
    """Move every |1> amplitude by shift sites along the axis.

    axis 'row' moves within rows (second grid index), 'column' within
    columns (first grid index). The implied polarization angle is
    logged; one site spacing corresponds to half a wavelength.
    """
    if axis not in ("row", "column"):
        raise ValidationError(f"axis must be 'row' or 'column', got {axis!r}")
    if shift == 0:
        return ls
    axis_idx = 1 if axis == "row" else 0
    plane = ls.sites[:, :, 1]
    occupied = np.argwhere(plane != 0)
    if occupied.size:
        coords = occupied[:, axis_idx]
        leak = ls.cfg.transport_leakage
        reach = shift + (1 if shift > 0 else -1) if leak != 0.0 else shift
        lo = int(coords.min()) + min(shift, reach, 0)
        hi = int(coords.max()) + max(shift, reach, 0)
        if lo < 0 or hi >= ls.cfg.extent:
            raise TransportOutOfRange(
                f"shift {shift} along {axis} pushes |1> amplitude to index "
                f"{lo if lo < 0 else hi}, grid is [0,{ls.cfg.extent - 1}]"
            )
    moved = _shift_plane(plane, axis_idx, shift)
    if ls.cfg.transport_leakage != 0.0:
        delta = ls.cfg.transport_leakage
        spill = _shift_plane(moved, axis_idx, 1 if shift > 0 else -1)
        moved = math.sqrt(1.0 - delta * delta) * moved + delta * spill
    ls.sites[:, :, 1] = moved
    theta = math.pi * shift
    ls.transport_log.append(
        TransportEvent(axis, shift, theta, theta * ls.cfg.wavelength / (2.0 * math.pi))
    )
    return ls


def _line_site(cfg: LatticeConfig, axis: str, line: int, key_index: int) -> tuple[int, int]:
    # axis 'row': line = node j, key_index = coin k. axis 'column': swapped.
    if axis == "row":
        return cfg.key_site(line, key_index)
    return cfg.key_site(key_index, line)


def pair_interact(
    ls: LatticeState, axis: str, line: int, p: int, q: int, u: np.ndarray
) -> LatticeState:
    ls, _ = _pair_interact(ls, axis, line, p, q, u, want_trace=False)
    return ls


def pair_interact_traced(
    ls: LatticeState, axis: str, line: int, p: int, q: int, u: np.ndarray
) -> tuple[LatticeState, PairProtocolTrace]:
    return _pair_interact(ls, axis, line, p, q, u, want_trace=True)


def _pair_interact(
    ls: LatticeState, axis: str, line: int, p: int, q: int, u: np.ndarray, want_trace: bool
) -> tuple[LatticeState, PairProtocolTrace | None]:
    if p == q:
        raise ValidationError(f"pair indices must differ, got p=q={p}")
    site_p = _line_site(ls.cfg, axis, line, p)
    site_q = _line_site(ls.cfg, axis, line, q)
    shift = (q - p) * ls.cfg.spacing
    snaps: list[np.ndarray] = []

    def snap() -> None:
        if want_trace:
            snaps.append(ls.sites.copy())

    stirap_rotate(ls, [site_p], PI_FLIP)
    snap()
    transport(ls, axis, shift)
    snap()
    stirap_rotate(ls, [site_q], u)
    snap()
    transport(ls, axis, -shift)
    snap()
    stirap_rotate(ls, [site_p], PI_FLIP)
    snap()
    return ls, PairProtocolTrace(tuple(snaps)) if want_trace else None


def execute_stage_on_lattice(
    ls: LatticeState, axis: str, stage: Stage | Mapping[int, Stage]
) -> LatticeState:
    """Run one schedule stage with a single shared transport.

    stage may be one Stage (same rotations on every line) or a mapping
    line -> Stage (per-line rotations, e.g. per-node coins); all stages
    must share the interval, since one polarization change moves every
    flipped packet at once.
    """
    if isinstance(stage, Stage):
        stage_map: Mapping[int, Stage] = {line: stage for line in range(1, ls.cfg.n + 1)}
    else:
        stage_map = stage
    work = [(line, st) for line, st in sorted(stage_map.items()) if st.rotations]
    if not work:
        return ls
    intervals = {st.interval for _, st in work}
    if len(intervals) != 1:
        raise ValidationError(f"stage intervals differ across lines: {sorted(intervals)}")
    shift = intervals.pop() * ls.cfg.spacing

    p_sites = [
        _line_site(ls.cfg, axis, line, rot.p) for line, st in work for rot in st.rotations
    ]
    stirap_rotate(ls, p_sites, PI_FLIP)
    transport(ls, axis, shift)
    for line, st in work:
        for rot in st.rotations:
            stirap_rotate(ls, [_line_site(ls.cfg, axis, line, rot.q)], rot.u)
    transport(ls, axis, -shift)
    stirap_rotate(ls, p_sites, PI_FLIP)
    return ls


def read_out(ls: LatticeState, cfg: LatticeConfig | None = None) -> ReadOut:
    """Nearest-key-site probability integration plus a key-site snapshot.

    Every grid site belongs to the cell of its nearest key site (ties go
    to the lower index), so cell probabilities always sum to the global
    norm even when residual amplitude sits between keys.
    """
    cfg = ls.cfg if cfg is None else cfg
    n, ell = cfg.n, cfg.spacing
    cell = (np.arange(cfg.extent) + (ell - 1) // 2) // ell
    probs2 = np.abs(ls.sites) ** 2
    site_prob = probs2.sum(axis=2)
    state_probs = np.zeros((n, n))
    np.add.at(state_probs, (cell[:, None], cell[None, :]), site_prob)
    snapshot = ls.sites[::ell, ::ell, 0].copy()
    return ReadOut(
        StateSpace(n, snapshot),
        state_probs,
        NodeDistribution(state_probs.sum(axis=1)),
    )


def lattice_to_csv(ls: LatticeState) -> str:
    out = io.StringIO()
    out.write("x,y,spin,re,im\n")
    extent = ls.cfg.extent
    for x in range(extent):
        for y in range(extent):
            for spin in (0, 1):
                a = ls.sites[x, y, spin]
                out.write(f"{x},{y},{spin},{float(a.real)!r},{float(a.imag)!r}\n")
    return out.getvalue()
