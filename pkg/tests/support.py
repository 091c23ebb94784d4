"""Independent oracles for cross-checking the walk engine and compiler.

Everything here evolves the walk through dense N^2 x N^2 operators on
the row-major flattened amplitude vector. No code is shared with the
array-based engine, so agreement between the two routes is meaningful.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import block_diag
from scipy.stats import unitary_group

from walkless import CoinSet


def transposition_operator(n: int) -> np.ndarray:
    """Permutation matrix sending vec(A) to vec(A^T), row-major."""
    t = np.zeros((n * n, n * n))
    for j in range(n):
        for k in range(n):
            t[k * n + j, j * n + k] = 1.0
    return t


def horizontal_coin_operator(c: CoinSet) -> np.ndarray:
    """Row j of the array gets c_j: block diagonal in row-major layout."""
    return block_diag(*c.coins)


def vertical_coin_operator(c: CoinSet) -> np.ndarray:
    t = transposition_operator(c.n)
    return t @ horizontal_coin_operator(c) @ t


def evolve_dense(initial: np.ndarray, c: CoinSet, n_steps: int, mode: str) -> np.ndarray:
    """Evolve by explicit dense matrix products; returns the N x N array."""
    n = c.n
    v = initial.reshape(n * n).astype(complex)
    ch = horizontal_coin_operator(c)
    if mode == "explicit":
        step_ops = [transposition_operator(n) @ ch] * n_steps
    elif mode == "walkless":
        cv = vertical_coin_operator(c)
        step_ops = [ch if i % 2 == 1 else cv for i in range(1, n_steps + 1)]
    else:
        raise ValueError(f"unknown oracle mode {mode!r}")
    for op in step_ops:
        v = op @ v
    return v.reshape(n, n)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    return unitary_group.rvs(dim, random_state=seed)


def random_state_array(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a / np.linalg.norm(a)


def masked_random_state(n: int, mask: np.ndarray, seed: int) -> np.ndarray:
    """Normalized random array that is exactly zero on masked entries."""
    a = random_state_array(n, seed)
    a[mask] = 0.0
    return a / np.linalg.norm(a)
