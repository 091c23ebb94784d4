"""Recursive cosine-sine factorization of coins into pulse schedules.

A coin on N = 2^t indices is written as a product of exactly N-1
block-diagonal factors U_1 ... U_{N-1} (U_1 applied first) whose block
sizes follow the binary ruler order, (2,4,2) for N=4, (2,4,2,8,2,4,2)
for N=8. A block of size d couples only index pairs (p, p + d/2), so a
factor executes as one stage of simultaneous disjoint two-level
rotations at a uniform interval.

Masked coins get special handling: indices whose row and column are an
exact basis vector are pinned. A pinned pair (both halves of a coupled
position isolated) is never touched by any factor. When a mask
straddles a split, an isolated index may have to carry amplitude
transiently inside one level (the interval structure admits no other
route); the level's factors then park and restore it so the composite
stays exactly identity on it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cossin

from .errors import (
    BadBlockSize,
    DimensionMismatch,
    IndexCollision,
    NotPowerOfTwo,
    NotUnitary,
    ParseError,
    ValidationError,
)

RECONSTRUCTION_TOL = 1e-10
FACTOR_UNITARITY_TOL = 1e-12
IDENTITY_DROP_TOL = 1e-12


@dataclass(frozen=True)
class CsdFactor:
    """One block-diagonal factor.

    kind 'general2' (d=2): blocks holds n/2 arbitrary 2x2 unitaries.
    kind 'cosine_sine' (d>2): angles holds n/d arrays of d/2 angles;
    block k acts on pairs ((k-1)d+r, (k-1)d+r+d/2) as
    [[cos f_r, sin f_r], [-sin f_r, cos f_r]].
    """

    d: int
    kind: str
    blocks: tuple[np.ndarray, ...] | None = None
    angles: tuple[np.ndarray, ...] | None = None


@dataclass(frozen=True)
class CsdProgram:
    n: int
    factors: tuple[CsdFactor, ...]


@dataclass(frozen=True)
class Rotation:
    p: int
    q: int
    u: np.ndarray


@dataclass(frozen=True)
class Stage:
    interval: int
    d: int
    rotations: tuple[Rotation, ...]


@dataclass(frozen=True)
class PulseSchedule:
    n: int
    stages: tuple[Stage, ...]


def ruler_sequence(n: int) -> tuple[int, ...]:
    """Block sizes d_1..d_{N-1}: d_i = 2^(nu2(i)+1), nu2 = dyadic valuation."""
    out = []
    for i in range(1, n):
        d = 2
        while i % d == 0:
            d *= 2
        out.append(d)
    return tuple(out)


def _exact_e_coords(u: np.ndarray) -> list[int]:
    """Indices whose row and column are bit-exactly the basis vector."""
    out = []
    for i in range(u.shape[0]):
        if (
            u[i, i] == 1.0
            and not u[i, :i].any()
            and not u[i, i + 1 :].any()
            and not u[:i, i].any()
            and not u[i + 1 :, i].any()
        ):
            out.append(i)
    return out


def _repair_permutation(h: int, carriers: np.ndarray, homes: list[int]) -> np.ndarray:
    """Permutation sending each carrier coordinate to its home coordinate.

    Coordinates free on both sides stay put, so pinned indices are
    untouched; the leftovers pair up in ascending order.
    """
    dst = np.full(h, -1, dtype=int)
    for c, home in zip(carriers, homes):
        dst[c] = home
    taken = set(homes)
    open_dst = set(range(h)) - taken
    src_left = [i for i in range(h) if dst[i] < 0]
    for i in src_left:
        if i in open_dst:
            dst[i] = i
            open_dst.remove(i)
    rest_src = [i for i in src_left if dst[i] < 0]
    for s, t in zip(rest_src, sorted(open_dst)):
        dst[s] = t
    p = np.zeros((h, h))
    p[dst, np.arange(h)] = 1.0
    return p


def _level_split(
    u: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """One cosine-sine level: u = (l1 + l2) . middle(phi) . (r1 + r2).

    The middle factor couples (r, r+h) by [[cos, sin], [-sin, cos]].
    Pinned coordinates stay exactly identity in every returned piece.
    """
    m = u.shape[0]
    h = m // 2
    iso = set(_exact_e_coords(u))
    act = [i for i in range(m) if i not in iso]

    def eye() -> np.ndarray:
        return np.eye(h, dtype=complex)

    if not act:
        return eye(), eye(), np.zeros(h), eye(), eye()

    act_top = [i for i in act if i < h]
    act_bot = [i - h for i in act if i >= h]
    a_t, a_b = len(act_top), len(act_bot)

    if a_t == 0 or a_b == 0:
        # Active block confined to one half: no cross coupling at this level.
        sub = u[np.ix_(act, act)]
        l1, l2 = eye(), eye()
        if a_t == 0:
            l2[np.ix_(act_bot, act_bot)] = sub
        else:
            l1[np.ix_(act_top, act_top)] = sub
        return l1, l2, np.zeros(h), eye(), eye()

    a = u[np.ix_(act, act)]
    (u1, u2), theta, (v1h, v2h) = cossin(a, p=a_t, q=a_t, separate=True)
    # LAPACK's middle factor is [[C,-S],[S,C]]; negating u2 and v2h flips it
    # to the [[C,S],[-S,C]] convention used everywhere here.
    u2 = -u2
    v2h = -v2h
    rc = len(theta)
    k1 = a_t - rc  # leading uncoupled slots of the top block
    k2 = a_b - rc

    top_set, bot_set = set(act_top), set(act_bot)
    free = sorted(top_set & bot_set)
    straddle = sorted(top_set ^ bot_set)
    # Coupled pairs take free positions first (theta ascending, so cosines
    # descend along positions); the overflow is forced onto straddle
    # positions, where the isolated half becomes a transient carrier.
    pair_pos = (free + straddle)[:rc]
    used = set(pair_pos)
    spare_t = [r for r in sorted(top_set - bot_set) if r not in used]
    spare_b = [r for r in sorted(bot_set - top_set) if r not in used]

    sigma_t = np.empty(a_t, dtype=int)
    sigma_b = np.empty(a_b, dtype=int)
    sigma_t[:k1] = spare_t[:k1]
    sigma_b[:k2] = spare_b[:k2]
    sigma_t[k1:] = pair_pos
    sigma_b[k2:] = pair_pos

    l1, l2, r1, r2 = eye(), eye(), eye(), eye()
    l1[np.ix_(sigma_t, sigma_t)] = u1
    l2[np.ix_(sigma_b, sigma_b)] = u2
    r1[np.ix_(sigma_t, sigma_t)] = v1h
    r2[np.ix_(sigma_b, sigma_b)] = v2h
    phi = np.zeros(h)
    phi[np.asarray(pair_pos, dtype=int)] = theta

    p_t = _repair_permutation(h, sigma_t, act_top)
    p_b = _repair_permutation(h, sigma_b, act_bot)
    return p_t @ l1, p_b @ l2, phi, r1 @ p_t.T, r2 @ p_b.T


def _merge(a: list[CsdFactor], b: list[CsdFactor]) -> list[CsdFactor]:
    # Sibling factor lists are structurally identical; zip and widen.
    out = []
    for fa, fb in zip(a, b, strict=True):
        if fa.kind == "general2":
            out.append(CsdFactor(2, "general2", blocks=fa.blocks + fb.blocks))
        else:
            out.append(CsdFactor(fa.d, "cosine_sine", angles=fa.angles + fb.angles))
    return out


def _decompose(u: np.ndarray) -> list[CsdFactor]:
    m = u.shape[0]
    if m == 2:
        return [CsdFactor(2, "general2", blocks=(u.copy(),))]
    l1, l2, phi, r1, r2 = _level_split(u)
    left = _merge(_decompose(l1), _decompose(l2))
    right = _merge(_decompose(r1), _decompose(r2))
    mid = CsdFactor(m, "cosine_sine", angles=(phi,))
    return right + [mid] + left


def csd_decompose(u: np.ndarray) -> CsdProgram:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {u.shape}")
    n = u.shape[0]
    if n < 2 or n & (n - 1) != 0:
        raise NotPowerOfTwo(f"dimension {n} is not a power of two >= 2")
    dev = float(np.max(np.abs(u.conj().T @ u - np.eye(n))))
    if dev > 1e-10:
        raise NotUnitary(f"input deviates from unitarity by {dev:.3e}")
    factors = _decompose(u)
    assert len(factors) == n - 1
    assert tuple(f.d for f in factors) == ruler_sequence(n)
    return CsdProgram(n, tuple(factors))


def materialize(f: CsdFactor, n: int) -> np.ndarray:
    if f.d < 2 or n % f.d != 0:
        raise BadBlockSize(f"block size {f.d} does not divide dimension {n}")
    out = np.zeros((n, n), dtype=complex)
    if f.kind == "general2":
        if f.d != 2 or f.blocks is None or len(f.blocks) != n // 2:
            raise BadBlockSize(f"general2 factor needs {n // 2} blocks of size 2")
        for k, b in enumerate(f.blocks):
            out[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = b
        return out
    if f.kind != "cosine_sine":
        raise ValidationError(f"unknown factor kind {f.kind!r}")
    if f.angles is None or len(f.angles) != n // f.d:
        raise BadBlockSize(f"cosine_sine factor needs {n // f.d} angle blocks")
    half = f.d // 2
    for k, phis in enumerate(f.angles):
        if len(phis) != half:
            raise BadBlockSize(f"angle block {k} has {len(phis)} angles, needs {half}")
        base = k * f.d
        for r, phi in enumerate(phis):
            c, s = np.cos(phi), np.sin(phi)
            p, q = base + r, base + r + half
            out[p, p] = c
            out[p, q] = s
            out[q, p] = -s
            out[q, q] = c
    return out


def reconstruct(prog: CsdProgram) -> np.ndarray:
    """Product U_{N-1} ... U_1 of the materialized factors."""
    out = np.eye(prog.n, dtype=complex)
    for f in prog.factors:
        out = materialize(f, prog.n) @ out
    return out


def emit_schedule(prog: CsdProgram, drop_tol: float = IDENTITY_DROP_TOL) -> PulseSchedule:
    """One stage per factor, in application order, 1-based indices.

    Rotations that are identity within drop_tol are omitted; the stage
    itself is kept so the stage count stays N-1.
    """
    eye2 = np.eye(2)
    stages = []
    for f in prog.factors:
        rots = []
        interval = f.d // 2
        if f.kind == "general2":
            for k, b in enumerate(f.blocks, start=1):
                if np.max(np.abs(b - eye2)) <= drop_tol:
                    continue
                rots.append(Rotation(2 * k - 1, 2 * k, b.copy()))
        else:
            for k, phis in enumerate(f.angles, start=1):
                for r, phi in enumerate(phis, start=1):
                    c, s = np.cos(phi), np.sin(phi)
                    u = np.array([[c, s], [-s, c]], dtype=complex)
                    if np.max(np.abs(u - eye2)) <= drop_tol:
                        continue
                    p = (k - 1) * f.d + r
                    rots.append(Rotation(p, p + interval, u))
        stages.append(Stage(interval, f.d, tuple(rots)))
    return PulseSchedule(prog.n, tuple(stages))


def _apply_stage(v: np.ndarray, stage: Stage) -> None:
    seen: set[int] = set()
    for rot in stage.rotations:
        if rot.p in seen or rot.q in seen or rot.p == rot.q:
            raise IndexCollision(
                f"stage pairs overlap at ({rot.p},{rot.q}); schedule is malformed"
            )
        seen.update((rot.p, rot.q))
    for rot in stage.rotations:
        a, b = v[rot.p - 1], v[rot.q - 1]
        u = rot.u
        v[rot.p - 1] = u[0, 0] * a + u[0, 1] * b
        v[rot.q - 1] = u[1, 0] * a + u[1, 1] * b


def execute_schedule(v: np.ndarray, sched: PulseSchedule) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (sched.n,):
        raise DimensionMismatch(f"vector shape {v.shape} does not match n={sched.n}")
    out = v.copy()
    for stage in sched.stages:
        _apply_stage(out, stage)
    return out


def compile_coin_set(coins) -> tuple[list[CsdProgram], list[PulseSchedule]]:
    programs = [csd_decompose(c) for c in coins]
    return programs, [emit_schedule(p) for p in programs]


def compiled_coin_apply(s, programs, orientation: str):
    """Apply per-line schedules stage-major: stage i runs on every row
    (column) before stage i+1 starts anywhere, mirroring simultaneous
    hardware execution. Accepts CsdPrograms or prebuilt PulseSchedules.
    """
    from .states import StateSpace

    if orientation not in ("horizontal", "vertical"):
        raise ValidationError(f"orientation must be horizontal or vertical, got {orientation!r}")
    scheds = [p if isinstance(p, PulseSchedule) else emit_schedule(p) for p in programs]
    n = s.n
    if len(scheds) != n or any(sc.n != n for sc in scheds):
        raise DimensionMismatch(f"need {n} schedules of dimension {n}")
    n_stages = {len(sc.stages) for sc in scheds}
    if len(n_stages) != 1:
        raise ValidationError(f"stage counts differ across lines: {sorted(n_stages)}")
    amps = s.amps.copy()
    for i in range(n_stages.pop()):
        for line in range(n):
            vec = amps[line, :] if orientation == "horizontal" else amps[:, line]
            _apply_stage(vec, scheds[line].stages[i])
    return StateSpace(n, amps)


def _u_as_pairs(u: np.ndarray) -> list[list[list[float]]]:
    return [[[float(x.real), float(x.imag)] for x in row] for row in u]


def schedule_to_json(sched: PulseSchedule) -> str:
    doc = {
        "n": sched.n,
        "stages": [
            {
                "interval": st.interval,
                "d": st.d,
                "rotations": [
                    {"p": r.p, "q": r.q, "u": _u_as_pairs(r.u)} for r in st.rotations
                ],
            }
            for st in sched.stages
        ],
    }
    return json.dumps(doc)


def schedule_from_json(text: str) -> PulseSchedule:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}") from e
    try:
        stages = tuple(
            Stage(
                int(st["interval"]),
                int(st["d"]),
                tuple(
                    Rotation(
                        int(r["p"]),
                        int(r["q"]),
                        np.array(
                            [[complex(re, im) for re, im in row] for row in r["u"]],
                            dtype=complex,
                        ),
                    )
                    for r in st["rotations"]
                ),
            )
            for st in doc["stages"]
        )
        return PulseSchedule(int(doc["n"]), stages)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed schedule document: {e}") from e


def program_to_json(prog: CsdProgram) -> str:
    factors = []
    for f in prog.factors:
        if f.kind == "general2":
            factors.append({"d": 2, "kind": "general2", "blocks": [_u_as_pairs(b) for b in f.blocks]})
        else:
            factors.append(
                {"d": f.d, "kind": "cosine_sine", "angles": [[float(x) for x in a] for a in f.angles]}
            )
    return json.dumps({"n": prog.n, "factors": factors})
