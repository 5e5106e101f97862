"""Frustration measure, its interlacing lower bound, and FF/INES classification.

Per bond S the measure is ``f_S = 1 - tr(rho_S Pi_S)`` with ``Pi_S`` the
projector onto the ground space of the bond's analyzed local term, and
``eps_d = 1 - (sum of the d largest eigenvalues of rho_S)`` its lower
bound, d being the local ground degeneracy.  A state is FF when f
vanishes on every bond, INES when f equals eps_d on every bond.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import eigen, model as mod
from .errors import ValidationError

FF = "FF"
INES = "INES"
NON_INES = "NON_INES"

EQUALITY_TOL = 1e-7  # |f - eps| below this counts as saturation

CSV_HEADER = "bond_i,bond_j,d_local,f_S,epsilon_d,residual,class"


@dataclass(frozen=True)
class FrustrationRecord:
    """Per-bond evidence: (f_S, eps_d, local degeneracy, residual, label)."""

    bond: tuple[int, int]
    d_local: int
    f: float
    epsilon: float
    residual: float
    label: str

    def csv_row(self) -> str:
        return (
            f"{self.bond[0]},{self.bond[1]},{self.d_local},"
            f"{self.f:.12g},{self.epsilon:.12g},{self.residual:.12g},{self.label}"
        )


@dataclass(frozen=True)
class Classification:
    records: tuple[FrustrationRecord, ...]
    verdict: str
    scope: str  # "on_average" for the MMGS, "local:<description>" otherwise
    ground_weight: float  # tr(P_G rho): support on the global ground space (reported, not enforced)

    @property
    def worst_residual(self) -> float:
        return max((abs(r.residual) for r in self.records), default=0.0)


def epsilon_d(rho_s: np.ndarray, d: int) -> float:
    """1 minus the sum of the d largest eigenvalues (raw, no clamping)."""
    dim = rho_s.shape[0]
    if not 1 <= d <= dim:
        raise ValidationError(f"d={d} out of range for a {dim}-dim state")
    lam = np.linalg.eigvalsh(rho_s)  # ascending
    return float(1.0 - lam[dim - d:].sum())


def frustration(rho_full: np.ndarray, pi_s: np.ndarray, bond_sites, num_sites: int | None = None) -> float:
    """f_S = 1 - tr(rho_S Pi_S) for the two bond sites."""
    if pi_s.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 projector, got {pi_s.shape}")
    if np.abs(pi_s @ pi_s - pi_s).max() > 1e-10:
        raise ValidationError("Pi_S is not idempotent within tolerance")
    rho_s = eigen.partial_trace(rho_full, bond_sites, num_sites)
    return float(1.0 - np.einsum("ij,ji->", rho_s, pi_s).real)


def bond_ground_projectors(
    spin_model: mod.SpinModel, tol_degeneracy: float = eigen.DEGENERACY_TOL
) -> list[tuple[mod.Bond, int, np.ndarray]]:
    """(bond, d, Pi_S) for every bond, from each bond's analyzed local term."""
    out = []
    for b in spin_model.bonds:
        h = mod.analyzed_local_term(spin_model, b)
        gs = eigen.ground_space(h, tol=tol_degeneracy)
        out.append((b, gs.degeneracy, eigen.projector(gs.basis)))
    return out


def classify(records, tol_eq: float = EQUALITY_TOL) -> str:
    if all(r.f <= tol_eq for r in records):
        return FF
    if all(abs(r.residual) <= tol_eq for r in records):
        return INES
    return NON_INES


def _bond_label(f: float, residual: float, tol_eq: float) -> str:
    if f <= tol_eq:
        return FF
    if abs(residual) <= tol_eq:
        return INES
    return NON_INES


def records_for_state(
    rho: np.ndarray,
    projectors,
    num_sites: int,
    tol_eq: float = EQUALITY_TOL,
) -> tuple[FrustrationRecord, ...]:
    recs = []
    for bond, d, pi in projectors:
        rho_s = eigen.partial_trace(rho, bond.sites, num_sites)
        f = float(1.0 - np.einsum("ij,ji->", rho_s, pi).real)
        eps = epsilon_d(rho_s, d)
        recs.append(
            FrustrationRecord(
                bond=bond.sites,
                d_local=d,
                f=f,
                epsilon=eps,
                residual=f - eps,
                label=_bond_label(f, f - eps, tol_eq),
            )
        )
    return tuple(recs)


def analyze_state(
    spin_model: mod.SpinModel,
    rho: np.ndarray | None = None,
    tol_eq: float = EQUALITY_TOL,
    tol_degeneracy: float = eigen.DEGENERACY_TOL,
    scope: str | None = None,
) -> Classification:
    """Classify a state (default: the MMGS) of the model as FF/INES/NON_INES.

    Support of `rho` on the global ground space is reported via
    `ground_weight`; states outside the ground space are analyzed as
    given, not rejected.
    """
    H = mod.build_hamiltonian(spin_model)
    gs = eigen.ground_space(H, tol=tol_degeneracy)
    if rho is None:
        rho = eigen.mmgs(gs)
        scope = scope or "on_average"
    else:
        scope = scope or "local:state"
    pg = gs.basis @ gs.basis.conj().T
    weight = float(np.einsum("ij,ji->", pg, rho).real)
    projs = bond_ground_projectors(spin_model, tol_degeneracy)
    recs = records_for_state(rho, projs, spin_model.num_sites, tol_eq)
    return Classification(
        records=recs,
        verdict=classify(recs, tol_eq),
        scope=scope,
        ground_weight=weight,
    )


@dataclass(frozen=True)
class PureSweepReport:
    """Spread of f_S across random superpositions of a twofold ground space."""

    bonds: tuple[tuple[int, int], ...]
    f_min: np.ndarray
    f_max: np.ndarray
    mmgs_f: np.ndarray
    trials: int

    @property
    def spread(self) -> np.ndarray:
        return self.f_max - self.f_min


def analyze_pure_sweep(
    spin_model: mod.SpinModel,
    trials: int,
    seed: int = 0,
    tol_degeneracy: float = eigen.DEGENERACY_TOL,
) -> PureSweepReport:
    """Evaluate f_S on random ground superpositions a|g1> + b|g2|.

    The state-independence statement is proved only for twofold global
    degeneracy, so any other d_G is rejected.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    H = mod.build_hamiltonian(spin_model)
    gs = eigen.ground_space(H, tol=tol_degeneracy)
    if gs.degeneracy != 2:
        raise ValidationError(
            f"pure-state sweep needs a twofold ground space, got d_G={gs.degeneracy}"
        )
    projs = bond_ground_projectors(spin_model, tol_degeneracy)
    n = spin_model.num_sites
    mmgs_vals = np.array([r.f for r in records_for_state(eigen.mmgs(gs), projs, n)])
    rng = np.random.default_rng(seed)
    f_min = np.full(len(projs), np.inf)
    f_max = np.full(len(projs), -np.inf)
    for _ in range(trials):
        ab = rng.normal(size=2) + 1j * rng.normal(size=2)
        ab /= np.linalg.norm(ab)
        psi = gs.basis @ ab
        rho = np.outer(psi, psi.conj())
        vals = np.array([r.f for r in records_for_state(rho, projs, n)])
        f_min = np.minimum(f_min, vals)
        f_max = np.maximum(f_max, vals)
    return PureSweepReport(
        bonds=tuple(b.sites for b, _, _ in projs),
        f_min=f_min,
        f_max=f_max,
        mmgs_f=mmgs_vals,
        trials=trials,
    )
