"""Operational-stage accounting: walkless scheme vs circuit baseline.

A walk on N nodes uses m = log2(N^2) qubits in the circuit picture.
The circuit baseline costs 4^m / (m/2) stages per step (equivalently
2 N^4 / log2(N^2)); the walkless scheme needs N-1 pulse stages per
step, one per factor of the coin decomposition.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ContractViolation, NotPowerOfTwo, ValidationError


@dataclass(frozen=True)
class CostReport:
    n: int
    m: int
    n_steps: int
    walkless_stages_per_step: int
    circuit_stages_per_step: float
    speedup: float
    walkless_total: int
    circuit_total: float


def cost_report(n: int, n_steps: int = 1) -> CostReport:
    if n < 2 or n & (n - 1) != 0:
        raise NotPowerOfTwo(f"dimension {n} is not a power of two >= 2")
    if n_steps < 0:
        raise ValidationError(f"n_steps must be >= 0, got {n_steps}")
    m = round(math.log2(n * n))
    circuit = 4.0**m / (m / 2.0)
    alt_form = 2.0 * n**4 / math.log2(n * n)
    if not math.isclose(circuit, alt_form, rel_tol=1e-12):
        raise ContractViolation(
            f"circuit stage forms disagree: 4^m/(m/2) = {circuit!r}, "
            f"2N^4/log2(N^2) = {alt_form!r}"
        )
    walkless = n - 1
    return CostReport(
        n=n,
        m=m,
        n_steps=n_steps,
        walkless_stages_per_step=walkless,
        circuit_stages_per_step=circuit,
        speedup=circuit / walkless,
        walkless_total=walkless * n_steps,
        circuit_total=circuit * n_steps,
    )


def report_to_json(r: CostReport) -> str:
    return json.dumps(
        {
            "n": r.n,
            "m": r.m,
            "n_steps": r.n_steps,
            "walkless_stages_per_step": r.walkless_stages_per_step,
            "circuit_stages_per_step": r.circuit_stages_per_step,
            "speedup": r.speedup,
            "walkless_total": r.walkless_total,
            "circuit_total": r.circuit_total,
        }
    )


def report_table(r: CostReport) -> str:
    rows = [
        ("dimension N", str(r.n)),
        ("qubits m = log2(N^2)", str(r.m)),
        ("steps", str(r.n_steps)),
        ("walkless stages / step", str(r.walkless_stages_per_step)),
        ("circuit stages / step", f"{r.circuit_stages_per_step:g}"),
        ("speedup", f"{r.speedup:g}"),
        ("walkless stages total", str(r.walkless_total)),
        ("circuit stages total", f"{r.circuit_total:g}"),
    ]
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label.ljust(width)}  {value}" for label, value in rows)
