"""Independent oracles used by the test suite.

Everything here deliberately avoids the library's own computational
paths: the free-fermion oracle solves the chain in real space from the
Majorana quadratic form, the roof oracle is a dense grid over the
two-parameter family of rank-2 decompositions, and connectivity is plain
breadth-first search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


# ---------------------------------------------------------------------------
# finite-chain Jordan-Wigner oracle for the XY chain
#   H = (1/2) sum_i (1+g) Sx Sx + (1-g) Sy Sy   (periodic, N sites)
# fermionized: hopping t = 1/4, pairing gamma/4, boundary sign -1 in the
# even-parity sector.  Correlators come from the ground-state Majorana
# covariance matrix; Wick's theorem gives the zz correlator.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainCorrelators:
    sxx: float
    syy: float
    szz: float
    sz: float
    energy: float


def free_fermion_chain(gamma: float, n: int, boundary: float = -1.0) -> ChainCorrelators:
    t = 0.25
    dp = gamma / 4.0
    K = np.zeros((2 * n, 2 * n))
    for j in range(n):
        l = (j + 1) % n
        s = boundary if j == n - 1 else 1.0
        # bond (j,l): (i/2)[(t-dp) w_{2j} w_{2l+1} + (t+dp) w_{2l} w_{2j+1}]
        K[2 * j, 2 * l + 1] += s * (t - dp)
        K[2 * l + 1, 2 * j] -= s * (t - dp)
        K[2 * l, 2 * j + 1] += s * (t + dp)
        K[2 * j + 1, 2 * l] -= s * (t + dp)
    lam, U = np.linalg.eigh(-1j * K)
    cov = np.real(1j * (U * np.sign(lam)) @ U.conj().T)

    def ww(m, p):  # <w_m w_p>, m != p
        return -1j * cov[m, p]

    def ba(j, l):  # <B_j A_l> with A = c^dag + c, B = c^dag - c
        return 1j * ww(2 * j + 1, 2 * l)

    def ab(j, l):
        return 1j * ww(2 * j, 2 * l + 1)

    def aa(j, l):
        return ww(2 * j, 2 * l)

    def bb(j, l):
        return -ww(2 * j + 1, 2 * l + 1)

    sxx = ba(0, 1)
    syy = -ab(0, 1)
    sz = ab(0, 0)
    szz = ab(0, 0) * ab(1, 1) - aa(0, 1) * bb(0, 1) + ab(0, 1) * ba(0, 1)
    energy = 0.25 * np.einsum("mn,mn->", K, cov)
    return ChainCorrelators(
        sxx=float(np.real(sxx)),
        syy=float(np.real(syy)),
        szz=float(np.real(szz)),
        sz=float(np.real(sz)),
        energy=float(np.real(energy)),
    )


# ---------------------------------------------------------------------------
# dense-grid convex roof for rank-2 states
# ---------------------------------------------------------------------------

def grid_roof_rank2(rho: np.ndarray, dims: tuple[int, int], d: int,
                    coarse: int = 120, refinements: int = 3) -> float:
    """Brute-force infimum over cardinality-2 decompositions of a rank-2 state.

    The family is two-parameter: mixing angle theta and relative phase phi
    of the 2x2 unitary acting on the scaled eigen-ensemble (row phases do
    not change the ensemble).  >= 10^4 grid points before refinement.
    """
    ds, dr = dims
    w, v = np.linalg.eigh(rho)
    keep = w > 1e-12
    if keep.sum() != 2:
        raise ValueError(f"grid oracle needs a rank-2 state, got rank {keep.sum()}")
    roots = (v[:, keep] * np.sqrt(w[keep])).T.reshape(2, ds, dr)

    def value(thetas, phis):
        c = np.cos(thetas)[:, None]
        s = np.sin(thetas)[:, None]
        e = np.exp(1j * phis)[None, :]
        # members over the (theta, phi) grid
        m1 = (
            c[..., None, None] * roots[0]
            + (s * e)[..., None, None] * roots[1]
        )
        m2 = (
            (-s * np.conj(e))[..., None, None] * roots[0]
            + c[..., None, None] * roots[1]
        )
        out = np.zeros(c.shape[0] * e.shape[1]).reshape(c.shape[0], e.shape[1])
        for m in (m1, m2):
            gram = np.einsum("tpsr,tpur->tpsu", m, m.conj())
            lam = np.linalg.eigvalsh(gram)
            out += np.einsum("tpii->tp", gram).real - lam[..., ds - d:].sum(axis=-1)
        return out

    thetas = np.linspace(0, np.pi / 2, coarse, endpoint=False)
    phis = np.linspace(0, 2 * np.pi, coarse, endpoint=False)
    dth = thetas[1] - thetas[0]
    dph = phis[1] - phis[0]
    vals = value(thetas, phis)
    k = np.unravel_index(np.argmin(vals), vals.shape)
    best = (vals[k], thetas[k[0]], phis[k[1]])
    for _ in range(refinements):
        dth /= 8.0
        dph /= 8.0
        thetas = best[1] + np.linspace(-8, 8, 33) * dth
        phis = best[2] + np.linspace(-8, 8, 33) * dph
        vals = value(thetas, phis)
        k = np.unravel_index(np.argmin(vals), vals.shape)
        if vals[k] < best[0]:
            best = (vals[k], thetas[k[0]], phis[k[1]])
    return float(best[0])


# ---------------------------------------------------------------------------
# plain BFS connectivity
# ---------------------------------------------------------------------------

def is_connected(edges, n: int) -> bool:
    adj = {i: [] for i in range(n)}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {0}
    queue = [0]
    while queue:
        v = queue.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == n
