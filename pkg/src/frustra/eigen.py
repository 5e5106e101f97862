"""Hermitian eigendecomposition, ground spaces, MMGS, and partial traces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .model import assert_hermitian

DEGENERACY_TOL = 1e-9  # relative window deciding what counts as "ground"


@dataclass(frozen=True)
class GroundSpace:
    """Ground energy, degeneracy and an orthonormal basis (columns)."""

    energy: float
    degeneracy: int
    basis: np.ndarray


def eig_hermitian(H: np.ndarray, check: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Full spectral decomposition, eigenvalues ascending.

    With `check`, verifies the reconstruction residual
    ||H - V diag(w) V^dag||_max <= 1e-9 * max(1, ||H||_max).
    """
    assert_hermitian(H, tol=1e-12 * max(1.0, np.abs(H).max()))
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigh failed on a {H.shape[0]}-dim operator: {exc}") from exc
    if check:
        resid = np.abs(H - (V * w) @ V.conj().T).max()
        bound = 1e-9 * max(1.0, np.abs(H).max())
        if resid > bound:
            raise NumericalError(f"eigh reconstruction residual {resid:.3e} > {bound:.3e}")
    return w, V


def ground_space(H: np.ndarray, tol: float = DEGENERACY_TOL) -> GroundSpace:
    """All eigenvectors with E_i - E_0 <= tol * max(1, |E_0|).

    Eigenvector blocks inside the window are re-orthonormalized with
    modified Gram-Schmidt: generic eigensolvers do not guarantee tight
    orthogonality within near-degenerate clusters.
    """
    if tol <= 0:
        raise ValidationError("degeneracy tolerance must be positive")
    w, V = eig_hermitian(H)
    e0 = w[0]
    mask = (w - e0) <= tol * max(1.0, abs(e0))
    basis = _mgs(V[:, mask])
    return GroundSpace(energy=float(e0), degeneracy=basis.shape[1], basis=basis)


def mmgs(gs: GroundSpace) -> np.ndarray:
    """Maximally mixed ground state: the ground projector over the degeneracy."""
    return (gs.basis @ gs.basis.conj().T) / gs.degeneracy


def projector(basis: np.ndarray) -> np.ndarray:
    """Pi = sum_k |v_k><v_k| from (defensively re-orthonormalized) columns."""
    cols = _mgs(np.atleast_2d(basis.T).T if basis.ndim == 1 else basis)
    return cols @ cols.conj().T


def partial_trace(rho: np.ndarray, keep, num_sites: int | None = None) -> np.ndarray:
    """Reduced state on `keep` (ordered): keep[p] becomes bit p of the output."""
    keep = [int(s) for s in keep]
    if not keep:
        raise ValidationError("keep must be non-empty")
    if len(set(keep)) != len(keep):
        raise ValidationError(f"repeated sites in keep: {keep}")
    n = _qubits_of(rho) if num_sites is None else num_sites
    if any(not 0 <= s < n for s in keep):
        raise ValidationError(f"keep sites {keep} out of range for {n} sites")
    rest = [s for s in range(n) if s not in keep]
    perm = _axis_order(n, keep, rest)
    T = rho.reshape((2,) * (2 * n))
    T = np.transpose(T, perm + [n + p for p in perm])
    dk, dr = 2 ** len(keep), 2 ** len(rest)
    T = T.reshape(dk, dr, dk, dr)
    return np.ascontiguousarray(np.einsum("irjr->ij", T))


def sites_to_front(array: np.ndarray, front, num_sites: int) -> np.ndarray:
    """Reorder a state vector or operator so `front` forms the leading factor.

    The result lives on H_front (x) H_rest with flat index
    ``s * 2**(n - len(front)) + r`` where ``s`` uses the same bit order as
    `partial_trace` (front[p] = bit p).  Tracing the trailing factor of
    the reordered state reproduces ``partial_trace(rho, front)``.
    """
    front = [int(s) for s in front]
    n = num_sites
    rest = [s for s in range(n) if s not in front]
    perm = _axis_order(n, front, rest)
    dim = 2 ** n
    if array.ndim == 1:
        return np.ascontiguousarray(
            np.transpose(array.reshape((2,) * n), perm).reshape(dim)
        )
    T = array.reshape((2,) * (2 * n))
    T = np.transpose(T, perm + [n + p for p in perm])
    return np.ascontiguousarray(T.reshape(dim, dim))


def subspace_operator(op: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Restriction of an operator to the span of orthonormal basis columns."""
    return basis.conj().T @ op @ basis


def assert_density_matrix(
    rho: np.ndarray,
    herm_tol: float = 1e-12,
    trace_tol: float = 1e-10,
    psd_tol: float = 1e-10,
) -> None:
    assert_hermitian(rho, tol=herm_tol)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise ValidationError(f"trace {tr} deviates from 1 beyond {trace_tol}")
    if np.linalg.eigvalsh(rho).min() < -psd_tol:
        raise ValidationError("density matrix has a negative eigenvalue beyond tolerance")


def _axis_order(n: int, lead: list[int], rest: list[int]) -> list[int]:
    # reshape axes run from the most significant bit (site n-1) down to site 0;
    # the leading block gets lead[-1], ..., lead[0], then the rest descending.
    sites_msb_first = list(reversed(lead)) + sorted(rest, reverse=True)
    return [n - 1 - s for s in sites_msb_first]


def _qubits_of(rho: np.ndarray) -> int:
    dim = rho.shape[0]
    n = int(round(np.log2(dim)))
    if 2 ** n != dim:
        raise ValidationError(f"dimension {dim} is not a power of two")
    return n


def _mgs(V: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt with one re-orthogonalization pass."""
    V = np.array(V, dtype=complex, copy=True)
    if V.ndim != 2 or V.shape[1] == 0:
        raise ValidationError("need at least one basis column")
    cols = []
    for k in range(V.shape[1]):
        v = V[:, k]
        for _ in range(2):
            for u in cols:
                v = v - u * (u.conj() @ v)
        norm = np.linalg.norm(v)
        if norm < 1e-10:
            raise ValidationError("basis is rank deficient after orthonormalization")
        cols.append(v / norm)
    return np.column_stack(cols)
