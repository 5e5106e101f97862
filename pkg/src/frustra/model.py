"""Spin-1/2 exchange models on arbitrary graphs.

A model is a set of pairwise exchange bonds, each contributing
``-sum_mu J^mu S_i^mu S_j^mu`` (with ``S^mu = sigma^mu / 2``) to the
Hamiltonian, optionally followed by single-site Pauli gauges (unitary
conjugation) and partial transposition over a set of sites, applied in
that order.

Basis convention: computational basis index ``b`` has bit ``i`` equal to
the state of site ``i``, site 0 least significant, bit value 0 = spin-up
(+1 eigenstate of ``sigma^z``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ValidationError

SIZE_CAP = 14  # dense 2^N storage; sweep sizes top out well below this

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_AXES = ("X", "Y", "Z")


@dataclass(frozen=True)
class Bond:
    """Exchange bond between sites i and j with coupling vector (Jx, Jy, Jz)."""

    i: int
    j: int
    coupling: tuple[float, float, float]

    def __post_init__(self):
        if self.i == self.j:
            raise ValidationError(f"bond ({self.i},{self.j}) joins a site to itself")
        c = tuple(float(x) for x in self.coupling)
        if len(c) != 3 or not all(np.isfinite(c)):
            raise ValidationError(f"bond ({self.i},{self.j}) coupling must be 3 finite reals")
        object.__setattr__(self, "coupling", c)

    @property
    def sites(self) -> tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True)
class SpinModel:
    """Interaction graph plus the transformation data (gauges, PT sites).

    Connectivity of the graph is not required here; generators that need
    it check it themselves.
    """

    num_sites: int
    bonds: tuple[Bond, ...]
    gauges: tuple[str, ...] = ()
    pt_sites: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        n = self.num_sites
        if n < 1:
            raise ValidationError("num_sites must be positive")
        object.__setattr__(self, "bonds", tuple(self.bonds))
        seen = set()
        for b in self.bonds:
            if not (0 <= b.i < n and 0 <= b.j < n):
                raise ValidationError(f"bond ({b.i},{b.j}) out of range for {n} sites")
            key = frozenset((b.i, b.j))
            if key in seen:
                raise ValidationError(f"duplicate bond ({b.i},{b.j})")
            seen.add(key)
        gauges = tuple(self.gauges) if self.gauges else ("I",) * n
        if len(gauges) != n:
            raise ValidationError(f"expected {n} gauges, got {len(gauges)}")
        if any(g not in PAULI for g in gauges):
            raise ValidationError(f"gauges must be in I/X/Y/Z, got {gauges}")
        object.__setattr__(self, "gauges", gauges)
        pt = frozenset(int(s) for s in self.pt_sites)
        if any(not 0 <= s < n for s in pt):
            raise ValidationError(f"pt_sites {sorted(pt)} out of range")
        object.__setattr__(self, "pt_sites", pt)

    @property
    def dim(self) -> int:
        return 2 ** self.num_sites


def site_operator(op: np.ndarray, site: int, num_sites: int) -> np.ndarray:
    """Embed a single-site operator at `site` (site 0 = least significant bit)."""
    if not 0 <= site < num_sites:
        raise ValidationError(f"site {site} out of range")
    return np.kron(np.eye(2 ** (num_sites - 1 - site)), np.kron(op, np.eye(2 ** site)))


def parity_operator(num_sites: int, axis: str) -> np.ndarray:
    """Global parity P_axis = tensor product of sigma^axis over all sites."""
    if axis.upper() not in _AXES:
        raise ValidationError(f"axis must be x, y or z, got {axis!r}")
    p = PAULI[axis.upper()]
    out = p
    for _ in range(num_sites - 1):
        out = np.kron(out, p)
    return out


def two_site_operator(op_i: np.ndarray, op_j: np.ndarray, i: int, j: int, num_sites: int) -> np.ndarray:
    """op_i on site i times op_j on site j, built as one kron chain."""
    if i == j:
        raise ValidationError("two_site_operator needs distinct sites")
    (lo, op_lo), (hi, op_hi) = sorted(((i, op_i), (j, op_j)), key=lambda t: t[0])
    out = np.kron(op_lo, np.eye(2 ** lo))
    out = np.kron(np.eye(2 ** (hi - lo - 1)), out)
    out = np.kron(op_hi, out)
    return np.kron(np.eye(2 ** (num_sites - 1 - hi)), out)


def assert_hermitian(H: np.ndarray, tol: float = 1e-12) -> None:
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {H.shape}")
    if np.abs(H - H.conj().T).max() > tol:
        raise ValidationError("matrix is not Hermitian within tolerance")


def local_term(bond: Bond) -> np.ndarray:
    """Raw 4x4 two-site term -sum_mu J^mu S^mu x S^mu (no gauges, no PT).

    In the returned matrix, bond site i is bit 0 and site j is bit 1,
    matching the ordering of `eigen.partial_trace` with keep=(i, j).
    """
    h = np.zeros((4, 4), dtype=complex)
    for mu, ax in enumerate(_AXES):
        J = bond.coupling[mu]
        if J != 0.0:
            p = PAULI[ax]
            h -= 0.25 * J * np.kron(p, p)
    return h


def analyzed_local_term(model: SpinModel, bond: Bond) -> np.ndarray:
    """The bond's two-site term after the model's gauges and PT act on it.

    Gauge conjugations and partial transposition both factorize over
    tensor legs, so restricting the global transform chain to one bond's
    term equals transforming the 4x4 term with the entries of the chain
    that touch the bond's two sites.
    """
    h = local_term(bond)
    h = apply_gauge(h, (model.gauges[bond.i], model.gauges[bond.j]))
    pt_local = tuple(k for k, s in enumerate(bond.sites) if s in model.pt_sites)
    if pt_local:
        h = partial_transpose(h, pt_local, num_sites=2)
    return h


def apply_gauge(H: np.ndarray, gauges) -> np.ndarray:
    """Conjugate H by the tensor product of single-site Paulis; spectrum-preserving."""
    n = _num_sites_of(H)
    gauges = tuple(gauges)
    if len(gauges) != n:
        raise ValidationError(f"expected {n} gauges, got {len(gauges)}")
    if any(g not in PAULI for g in gauges):
        raise ValidationError(f"gauges must be in I/X/Y/Z, got {gauges}")
    out = H
    for site, g in enumerate(gauges):
        if g != "I":
            U = site_operator(PAULI[g], site, n)
            out = U @ out @ U  # Paulis are involutions: U^dagger = U
    return out


def partial_transpose(H: np.ndarray, sites, num_sites: int | None = None) -> np.ndarray:
    """Transpose the matrix over the tensor factors of `sites` (an involution)."""
    n = _num_sites_of(H) if num_sites is None else num_sites
    sites = sorted(set(int(s) for s in sites))
    if any(not 0 <= s < n for s in sites):
        raise ValidationError(f"pt sites {sites} out of range for {n} sites")
    if not sites:
        return H.copy()
    T = H.reshape((2,) * (2 * n))
    for s in sites:
        # row axis of site s sits at position n-1-s, column axis n further
        T = np.swapaxes(T, n - 1 - s, 2 * n - 1 - s)
    return np.ascontiguousarray(T.reshape(2 ** n, 2 ** n))


def build_hamiltonian(model: SpinModel, cap: int = SIZE_CAP) -> np.ndarray:
    """Dense Hamiltonian: couplings, then gauges, then partial transposition."""
    n = model.num_sites
    if n > cap:
        raise CapacityError(f"{n} sites exceed the dense cap of {cap}")
    dim = model.dim
    H = np.zeros((dim, dim), dtype=complex)
    for b in model.bonds:
        for mu, ax in enumerate(_AXES):
            J = b.coupling[mu]
            if J != 0.0:
                p = PAULI[ax]
                H -= 0.25 * J * two_site_operator(p, p, b.i, b.j, n)
    if any(g != "I" for g in model.gauges):
        H = apply_gauge(H, model.gauges)
    if model.pt_sites:
        H = partial_transpose(H, model.pt_sites, num_sites=n)
    assert_hermitian(H, tol=1e-12 * max(1.0, np.abs(H).max()))
    return H


def _num_sites_of(H: np.ndarray) -> int:
    dim = H.shape[0]
    n = int(round(np.log2(dim)))
    if H.ndim != 2 or H.shape != (dim, dim) or 2 ** n != dim:
        raise ValidationError(f"operator shape {H.shape} is not a square qubit register")
    return n


# ---------------------------------------------------------------------------
# Model files: {"sites": N, "bonds": [{"i":..,"j":..,"J":[x,y,z]}, ...],
#               "gauges": ["I",...], "partial_transpose": [sites...]}
# ---------------------------------------------------------------------------

_TOP_KEYS = {"sites", "bonds", "gauges", "partial_transpose"}
_BOND_KEYS = {"i", "j", "J"}


def model_from_dict(doc: dict) -> SpinModel:
    if not isinstance(doc, dict):
        raise ValidationError("model document must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ValidationError(f"unknown keys in model file: {sorted(unknown)}")
    if "sites" not in doc or "bonds" not in doc:
        raise ValidationError("model file needs 'sites' and 'bonds'")
    bonds = []
    for entry in doc["bonds"]:
        if not isinstance(entry, dict):
            raise ValidationError("each bond must be an object")
        bad = set(entry) - _BOND_KEYS
        if bad:
            raise ValidationError(f"unknown keys in bond: {sorted(bad)}")
        if set(entry) != _BOND_KEYS:
            raise ValidationError("each bond needs keys i, j, J")
        bonds.append(Bond(int(entry["i"]), int(entry["j"]), tuple(entry["J"])))
    return SpinModel(
        num_sites=int(doc["sites"]),
        bonds=tuple(bonds),
        gauges=tuple(doc.get("gauges", ())),
        pt_sites=frozenset(doc.get("partial_transpose", ())),
    )


def model_to_dict(model: SpinModel) -> dict:
    doc = {
        "sites": model.num_sites,
        "bonds": [{"i": b.i, "j": b.j, "J": list(b.coupling)} for b in model.bonds],
    }
    if any(g != "I" for g in model.gauges):
        doc["gauges"] = list(model.gauges)
    if model.pt_sites:
        doc["partial_transpose"] = sorted(model.pt_sites)
    return doc


def load_model(path) -> SpinModel:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed JSON in {path}: {exc}") from exc
    return model_from_dict(doc)


def dump_model(model: SpinModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")
