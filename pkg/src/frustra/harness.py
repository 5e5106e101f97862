"""Random prototype models and the saturation-conjecture sweep.

Prototype models are pairwise exchange Hamiltonians with non-negative
coupling components and a local ground state shared by every bond.  For
``H = -sum J^mu S^mu S^mu`` with ``J >= 0`` each bond's Bell-state
energies are ``-(|J|_1 - 2 J^nu)/4`` over the negative-signature axis
``nu``, so the bond ground state is the Bell state whose negative axis
carries the smallest coupling component; fixing one minimal axis (XYZ),
one anisotropy regime (XXZ), or full isotropy (XXX) per model makes the
shared ground state explicit by construction.

The sweep generates such models on random connected graphs, optionally
applies random parity gauges and a random partial transposition, and
tallies how many are saturating ("INES") on average.  Results are
bit-reproducible for a given seed regardless of worker count: each model
draws from its own counter-based stream keyed by (seed, index).
"""

from __future__ import annotations

import hashlib
import heapq
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import eigen, metrics, presets
from .errors import ValidationError
from .model import SIZE_CAP, Bond, SpinModel, local_term

MODEL_CLASSES = ("XYZ", "XXZ", "XXX")
EXTRA_EDGE_PROB = 0.3
COUPLING_LOW, COUPLING_HIGH = 0.1, 1.0
MIN_GAP = 1e-6  # resample guard against tolerance-ambiguous local degeneracies

# Bell states keyed by their negative-signature axis (eigenvalue -1 of
# sigma^axis x sigma^axis, +1 on the other two); "s" is the singlet.
BELL_STATES = {
    "x": np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2),
    "y": np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2),
    "z": np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2),
    "s": np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2),
}

CSV_HEADER = "index,n,class,edges,gauged,pt_set,verdict,worst_residual"


@dataclass(frozen=True)
class SweepConfig:
    model_class: str
    sites: int
    count: int
    seed: int = 0
    homogeneous: bool = False
    apply_gauges: bool = True
    apply_pt: bool = True
    single_axis_gauge: bool = False  # one parity axis per model instead of per site
    tol_degeneracy: float = eigen.DEGENERACY_TOL
    tol_equality: float = metrics.EQUALITY_TOL
    inject_geometric: bool = False  # replace model 0 with the frustrated-triangle control

    def __post_init__(self):
        if self.model_class.upper() not in MODEL_CLASSES:
            raise ValidationError(f"model class must be one of {MODEL_CLASSES}")
        object.__setattr__(self, "model_class", self.model_class.upper())
        if self.count < 1:
            raise ValidationError("count must be >= 1")
        if not 3 <= self.sites <= SIZE_CAP:
            raise ValidationError(f"sites must be in [3, {SIZE_CAP}]")


@dataclass(frozen=True)
class ModelRecord:
    index: int
    sites: int
    model_class: str
    edges: tuple[tuple[int, int], ...]
    gauges: str
    pt_sites: tuple[int, ...]
    verdict: str
    worst_residual: float
    couplings_hash: str
    flag: str = ""  # non-empty when evaluation failed; such models count as rejected

    @property
    def accepted(self) -> bool:
        return not self.flag and self.verdict in (metrics.FF, metrics.INES)

    def csv_row(self) -> str:
        edges = ";".join(f"{i}-{j}" for i, j in self.edges)
        pt = ";".join(str(s) for s in self.pt_sites)
        return (
            f"{self.index},{self.sites},{self.model_class},{edges},"
            f"{self.gauges},{pt},{self.verdict},{self.worst_residual:.12g}"
        )


@dataclass(frozen=True)
class SweepReport:
    config: SweepConfig
    records: tuple[ModelRecord, ...] = field(default_factory=tuple)

    @property
    def accepted(self) -> int:
        return sum(1 for r in self.records if r.accepted)

    @property
    def rejected(self) -> int:
        return len(self.records) - self.accepted

    def csv_lines(self) -> list[str]:
        lines = [CSV_HEADER]
        lines.extend(r.csv_row() for r in self.records)
        lines.append(f"{self.config.sites},{self.accepted},{self.rejected}")
        return lines


def _model_rng(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed % 2**64, index % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def random_graph(n: int, rng: np.random.Generator) -> tuple[tuple[int, int], ...]:
    """Connected graph: uniform random spanning tree plus Bernoulli(0.3) extras."""
    if n < 3:
        raise ValidationError("graphs need at least 3 vertices")
    seq = [int(v) for v in rng.integers(0, n, size=n - 2)]
    edges = set(_tree_from_pruefer(seq, n))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < EXTRA_EDGE_PROB:
                edges.add((i, j))
    return tuple(sorted(edges))


def _tree_from_pruefer(seq: list[int], n: int) -> list[tuple[int, int]]:
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u, w = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((min(u, w), max(u, w)))
    return edges


def _draw_coupling(model_class: str, minimal_axis: int, easy_axis: bool, rng) -> tuple[float, float, float]:
    if model_class == "XXX":
        j = rng.uniform(COUPLING_LOW, COUPLING_HIGH)
        return (j, j, j)
    if model_class == "XXZ":
        while True:
            a, b = np.sort(rng.uniform(COUPLING_LOW, COUPLING_HIGH, size=2))
            if b - a >= MIN_GAP:
                break
        jz, jxy = (b, a) if easy_axis else (a, b)
        return (jxy, jxy, jz)
    # XYZ: the designated axis carries the strictly smallest component
    while True:
        vals = np.sort(rng.uniform(COUPLING_LOW, COUPLING_HIGH, size=3))
        if vals[1] - vals[0] >= MIN_GAP:
            break
    order = [1, 2] if rng.random() < 0.5 else [2, 1]
    out = [0.0, 0.0, 0.0]
    out[minimal_axis] = float(vals[0])
    rest = [mu for mu in range(3) if mu != minimal_axis]
    out[rest[0]] = float(vals[order[0]])
    out[rest[1]] = float(vals[order[1]])
    return tuple(out)


def random_prototype(
    model_class: str,
    edges,
    num_sites: int,
    homogeneous: bool,
    rng: np.random.Generator,
) -> SpinModel:
    """Couplings in [0.1, 1] with a per-model choice that pins the shared
    local ground state: minimal axis (XYZ) or anisotropy regime (XXZ)."""
    model_class = model_class.upper()
    if model_class not in MODEL_CLASSES:
        raise ValidationError(f"model class must be one of {MODEL_CLASSES}")
    minimal_axis = int(rng.integers(0, 3))
    easy_axis = bool(rng.random() < 0.5)
    if homogeneous:
        coupling = _draw_coupling(model_class, minimal_axis, easy_axis, rng)
        bonds = tuple(Bond(i, j, coupling) for i, j in edges)
    else:
        bonds = tuple(
            Bond(i, j, _draw_coupling(model_class, minimal_axis, easy_axis, rng))
            for i, j in edges
        )
    return SpinModel(num_sites, bonds)


def common_ground_bells(model: SpinModel, tol: float = 1e-10) -> list[str]:
    """Bell states that are ground states of every bond's raw local term."""
    labels = list(BELL_STATES)
    common = set(labels)
    for bond in model.bonds:
        h = local_term(bond)
        energies = {k: float((v.conj() @ h @ v).real) for k, v in BELL_STATES.items()}
        emin = min(energies.values())
        common &= {k for k, e in energies.items() if e - emin <= tol}
        if not common:
            break
    return [k for k in labels if k in common]


def random_gauge(model: SpinModel, rng: np.random.Generator, single_axis: bool = False) -> SpinModel:
    """Per site: identity with probability 1/2, else a random parity (X/Y/Z).

    With `single_axis`, one axis is drawn per model and used for every
    non-identity site.
    """
    axes = "XYZ"
    fixed = axes[int(rng.integers(0, 3))] if single_axis else None
    gauges = []
    for _ in range(model.num_sites):
        if rng.random() < 0.5:
            gauges.append("I")
        else:
            gauges.append(fixed if fixed else axes[int(rng.integers(0, 3))])
    return replace(model, gauges=tuple(gauges))


def random_pt(model: SpinModel, rng: np.random.Generator) -> SpinModel:
    """Partial transposition over a uniformly random site subset."""
    sites = frozenset(s for s in range(model.num_sites) if rng.random() < 0.5)
    return replace(model, pt_sites=sites)


def _couplings_hash(model: SpinModel) -> str:
    arr = np.array([b.coupling for b in model.bonds], dtype=np.float64)
    return hashlib.sha1(arr.tobytes()).hexdigest()[:12]


def build_sweep_model(config: SweepConfig, index: int) -> SpinModel:
    """The fully transformed model for one sweep slot (deterministic)."""
    if config.inject_geometric and index == 0:
        return presets.frustrated_triangle()
    rng = _model_rng(config.seed, index)
    edges = random_graph(config.sites, rng)
    model = random_prototype(config.model_class, edges, config.sites, config.homogeneous, rng)
    if config.apply_gauges:
        model = random_gauge(model, rng, config.single_axis_gauge)
    if config.apply_pt:
        model = random_pt(model, rng)
    return model


def evaluate_sweep_model(config: SweepConfig, index: int) -> ModelRecord:
    model = build_sweep_model(config, index)
    base = dict(
        index=index,
        sites=model.num_sites,
        model_class=config.model_class,
        edges=tuple(b.sites for b in model.bonds),
        gauges="".join(model.gauges),
        pt_sites=tuple(sorted(model.pt_sites)),
        couplings_hash=_couplings_hash(model),
    )
    try:
        cls = metrics.analyze_state(
            model, tol_eq=config.tol_equality, tol_degeneracy=config.tol_degeneracy
        )
    except Exception as exc:  # never drop a model silently
        return ModelRecord(verdict="ERROR", worst_residual=float("nan"), flag=repr(exc), **base)
    return ModelRecord(verdict=cls.verdict, worst_residual=cls.worst_residual, **base)


def sweep(config: SweepConfig, jobs: int = 1) -> SweepReport:
    """Run the full generate/transform/classify pipeline `count` times.

    Records are keyed by model index and each index has its own RNG
    stream, so the report is identical for any `jobs`.
    """
    indices = range(config.count)
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_evaluate_star, ((config, i) for i in indices), chunksize=16))
    else:
        records = [evaluate_sweep_model(config, i) for i in indices]
    records.sort(key=lambda r: r.index)
    return SweepReport(config=config, records=tuple(records))


def _evaluate_star(args) -> ModelRecord:
    return evaluate_sweep_model(*args)
