"""Shared fixtures and independent oracle implementations.

The oracles here deliberately avoid the library's own code paths: the
partial-trace oracle contracts indices with explicit Python loops, the game
oracle enumerates every branch with exact rationals.  Tests compare the
fast implementations against these.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Random full-rank density matrix via a Gaussian Wishart construction."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m)


def random_pure_amplitudes(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-ish random unitary from a QR decomposition with phase fixing."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def _flatten_index(multi: tuple[int, ...], dims: list[int]) -> int:
    idx = 0
    for i, d in zip(multi, dims):
        idx = idx * d + i
    return idx


def ptrace_oracle(matrix: np.ndarray, dims: list[int], keep: list[int]) -> np.ndarray:
    """Brute-force partial trace by explicit index contraction."""
    keep = sorted(keep)
    traced = [i for i in range(len(dims)) if i not in keep]
    kept_dims = [dims[i] for i in keep]
    out_dim = int(np.prod(kept_dims))
    out = np.zeros((out_dim, out_dim), dtype=complex)
    kept_indices = list(itertools.product(*[range(d) for d in kept_dims]))
    traced_indices = list(itertools.product(*[range(dims[i]) for i in traced]))
    for row_pos, row_kept in enumerate(kept_indices):
        for col_pos, col_kept in enumerate(kept_indices):
            total = 0.0 + 0.0j
            for tr in traced_indices:
                row_full = [0] * len(dims)
                col_full = [0] * len(dims)
                for pos, i in enumerate(keep):
                    row_full[i] = row_kept[pos]
                    col_full[i] = col_kept[pos]
                for pos, i in enumerate(traced):
                    row_full[i] = tr[pos]
                    col_full[i] = tr[pos]
                total += matrix[_flatten_index(tuple(row_full), dims), _flatten_index(tuple(col_full), dims)]
            out[row_pos, col_pos] = total
    return out


def monty_win_oracle(n_doors: int, k_opened: int, strategy: str) -> Fraction:
    """Exact win probability by exhaustive enumeration of every game branch."""
    pick = 0
    total = Fraction(0)
    for car in range(n_doors):
        p_car = Fraction(1, n_doors)
        if car == pick:
            pool = [d for d in range(n_doors) if d != pick]
        else:
            pool = [d for d in range(n_doors) if d != pick and d != car]
        host_sets = list(itertools.combinations(pool, k_opened))
        for opened in host_sets:
            p_branch = p_car / len(host_sets)
            if strategy == "stay":
                if car == pick:
                    total += p_branch
                continue
            remaining = [d for d in range(n_doors) if d != pick and d not in opened]
            for target in remaining:
                if target == car:
                    total += p_branch / len(remaining)
    return total
