"""Walk evolution in four modes and the cross-mode equivalence check.

explicit   : each step applies row coins then transposes the array.
walkless   : odd steps apply row coins, even steps column coins; no
             transposition ever happens. The two agree exactly at even
             step counts and up to one transposition at odd ones.
compiled   : walkless semantics, but every coin runs as its emitted
             pulse schedule.
lattice    : walkless semantics on the simulated optical lattice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coins import CoinSet, assert_unitary
from .csd import compile_coin_set, compiled_coin_apply
from .errors import (
    DimensionMismatch,
    EquivalenceViolation,
    InitialAmplitudeOnIsolatedState,
    NormViolation,
    ValidationError,
)
from .graphs import Graph
from .states import NodeDistribution, StateSpace, node_distribution, transpose

MODES = ("explicit", "walkless", "compiled", "lattice")
STEP_NORM_TOL = 1e-10
VERTICAL_TRANSPOSE_TOL = 1e-14


@dataclass(frozen=True)
class WalkRun:
    graph: Graph
    coin_set: CoinSet
    initial: StateSpace
    n_steps: int
    mode: str = "walkless"
    record_trajectory: bool = False
    spacing: int = 2  # lattice mode only

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValidationError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.n_steps < 0:
            raise ValidationError(f"n_steps must be >= 0, got {self.n_steps}")


@dataclass(frozen=True)
class WalkResult:
    final: StateSpace
    distributions: tuple[NodeDistribution, ...]
    trajectory: tuple[StateSpace, ...] | None = None


@dataclass(frozen=True)
class EquivalenceReport:
    deviations: tuple[float, ...]
    max_deviation: float


def _check_dims(s: StateSpace, c: CoinSet) -> None:
    if s.n != c.n:
        raise DimensionMismatch(f"state dimension {s.n} != coin dimension {c.n}")


def apply_coins_horizontal(s: StateSpace, c: CoinSet) -> StateSpace:
    """Row j of the array becomes c_j @ row j."""
    _check_dims(s, c)
    stack = np.stack(c.coins)
    return StateSpace(s.n, np.einsum("jab,jb->ja", stack, s.amps))


def apply_coins_vertical(s: StateSpace, c: CoinSet) -> StateSpace:
    """Column k becomes c_k @ column k."""
    _check_dims(s, c)
    stack = np.stack(c.coins)
    return StateSpace(s.n, np.einsum("kab,bk->ak", stack, s.amps))


def step_explicit(s: StateSpace, c: CoinSet) -> StateSpace:
    return transpose(apply_coins_horizontal(s, c))


def _isolation_offenders(walk: WalkRun) -> list[tuple[int, int]]:
    mask = walk.graph.isolation_mask()
    bad = np.argwhere(mask & (walk.initial.amps != 0))
    return [(int(j) + 1, int(k) + 1) for j, k in bad]


def _check_norm(amps_norm: float, step: int) -> None:
    if abs(amps_norm - 1.0) > STEP_NORM_TOL:
        raise NormViolation(f"norm {amps_norm!r} after step {step} (tol {STEP_NORM_TOL:.0e})")


def run(walk: WalkRun) -> WalkResult:
    _check_dims(walk.initial, walk.coin_set)
    offenders = _isolation_offenders(walk)
    if offenders:
        states = ", ".join(f"|{j},{k}>" for j, k in offenders)
        raise InitialAmplitudeOnIsolatedState(
            f"initial state populates isolated state(s) {states}"
        )
    if walk.mode == "lattice":
        return _run_lattice(walk)

    if walk.mode == "compiled":
        _, schedules = compile_coin_set(walk.coin_set.coins)

        def advance(s: StateSpace, step: int) -> StateSpace:
            orientation = "horizontal" if step % 2 == 1 else "vertical"
            return compiled_coin_apply(s, schedules, orientation)

    elif walk.mode == "walkless":

        def advance(s: StateSpace, step: int) -> StateSpace:
            if step % 2 == 1:
                return apply_coins_horizontal(s, walk.coin_set)
            return apply_coins_vertical(s, walk.coin_set)

    else:

        def advance(s: StateSpace, step: int) -> StateSpace:
            return step_explicit(s, walk.coin_set)

    s = walk.initial
    dists = [node_distribution(s)]
    traj = [s] if walk.record_trajectory else None
    for i in range(1, walk.n_steps + 1):
        s = advance(s, i)
        _check_norm(float(np.linalg.norm(s.amps)), i)
        dists.append(node_distribution(s))
        if traj is not None:
            traj.append(s)
    return WalkResult(s, tuple(dists), tuple(traj) if traj is not None else None)


def _run_lattice(walk: WalkRun) -> WalkResult:
    from . import lattice as lat

    cfg = lat.LatticeConfig(n=walk.coin_set.n, spacing=walk.spacing)
    _, schedules = compile_coin_set(walk.coin_set.coins)
    n_stages = len(schedules[0].stages)
    ls = lat.load_state(walk.initial, cfg)
    first = lat.read_out(ls, cfg)
    dists = [first.node_dist]
    traj = [first.state] if walk.record_trajectory else None
    for i in range(1, walk.n_steps + 1):
        axis = "row" if i % 2 == 1 else "column"
        for stage_idx in range(n_stages):
            stage_map = {line: schedules[line - 1].stages[stage_idx] for line in range(1, walk.coin_set.n + 1)}
            lat.execute_stage_on_lattice(ls, axis, stage_map)
        _check_norm(lat.norm(ls), i)
        out = lat.read_out(ls, cfg)
        dists.append(out.node_dist)
        if traj is not None:
            traj.append(out.state)
    final = lat.read_out(ls, cfg).state
    return WalkResult(final, tuple(dists), tuple(traj) if traj is not None else None)


def verify_equivalence(walk: WalkRun, tol: float = 1e-10) -> EquivalenceReport:
    """Run explicit and walkless side by side; the walkless state must
    equal the explicit state at even steps and its transpose at odd
    steps, within tol. Returns the per-step maximum deviations.
    """
    for j, c in enumerate(walk.coin_set.coins, start=1):
        assert_unitary(c, what=f"coin for node {j}")
    _check_dims(walk.initial, walk.coin_set)
    s_e = walk.initial
    s_w = walk.initial
    devs = []
    for i in range(1, walk.n_steps + 1):
        s_e = step_explicit(s_e, walk.coin_set)
        if i % 2 == 1:
            s_w = apply_coins_horizontal(s_w, walk.coin_set)
            ref = transpose(s_e)
        else:
            s_w = apply_coins_vertical(s_w, walk.coin_set)
            ref = s_e
        dev = float(np.max(np.abs(s_w.amps - ref.amps)))
        devs.append(dev)
        if dev > tol:
            e = EquivalenceViolation(
                f"walkless and explicit states differ by {dev:.3e} at step {i} (tol {tol:.0e})"
            )
            e.step = i
            e.deviation = dev
            raise e
    return EquivalenceReport(tuple(devs), max(devs) if devs else 0.0)
