"""Shared random generators for the test suite."""

from __future__ import annotations

import numpy as np

from frustra.model import Bond, SpinModel


def random_density_matrix(dim: int, rng, rank: int | None = None) -> np.ndarray:
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_state(dim: int, rng) -> np.ndarray:
    z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return z / np.linalg.norm(z)


def random_model(n: int, rng, edge_prob: float = 0.5) -> SpinModel:
    """Arbitrary-coupling model on a random graph (a ring guarantees bonds)."""
    bonds = []
    for i in range(n):
        for j in range(i + 1, n):
            ring = j == i + 1 or (i == 0 and j == n - 1)
            if ring or rng.random() < edge_prob:
                bonds.append(Bond(i, j, tuple(rng.uniform(-1, 1, size=3))))
    return SpinModel(n, tuple(bonds))


def random_gauged_model(n: int, rng) -> SpinModel:
    m = random_model(n, rng)
    gauges = tuple(rng.choice(list("IXYZ")) for _ in range(n))
    pt = frozenset(int(s) for s in range(n) if rng.random() < 0.3)
    return SpinModel(n, m.bonds, gauges=gauges, pt_sites=pt)
