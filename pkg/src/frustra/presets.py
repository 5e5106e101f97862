"""Ready-made models for the worked examples and controls.

The bundled JSON copies under ``frustra/models/`` are generated from
these constructors (see ``write_bundled_models``).
"""

from __future__ import annotations

from importlib import resources

from .model import Bond, SpinModel, dump_model


def ising_triangle() -> SpinModel:
    """Ferromagnetic x-Ising triangle: twofold degenerate, frustration free."""
    return SpinModel(3, tuple(Bond(i, (i + 1) % 3, (1.0, 0.0, 0.0)) for i in range(3)))


def ising_ring(n: int = 5) -> SpinModel:
    """Ferromagnetic x-Ising ring: FF on average."""
    return SpinModel(n, tuple(Bond(i, (i + 1) % n, (1.0, 0.0, 0.0)) for i in range(n)))


def xy_ring(n: int = 5, delta: float = 0.1) -> SpinModel:
    """Ferromagnetic XY ring H = -sum (Sx Sx + delta Sy Sy): INES on average."""
    return SpinModel(n, tuple(Bond(i, (i + 1) % n, (1.0, delta, 0.0)) for i in range(n)))


def chord_xy_ring(n: int = 5, delta: float = 0.1) -> SpinModel:
    """XY ring plus an antiferromagnetic chord between sites 0 and 2.

    The chord term +S0^x S2^x + delta S0^y S2^y enters our
    H = -sum J.SS convention as a bond with negated couplings; the
    geometric frustration it adds breaks saturation (non-INES).
    """
    bonds = list(xy_ring(n, delta).bonds)
    bonds.append(Bond(0, 2, (-1.0, -delta, 0.0)))
    return SpinModel(n, tuple(bonds))


def heisenberg_chain(n: int = 4) -> SpinModel:
    """Open ferromagnetic Heisenberg chain (d_G = 5 at n = 4)."""
    return SpinModel(n, tuple(Bond(i, i + 1, (1.0, 1.0, 1.0)) for i in range(n - 1)))


def heisenberg_chain_pt(n: int = 4) -> SpinModel:
    """The same chain partially transposed on the even-position sites {1, 3, ...}."""
    return SpinModel(
        n,
        tuple(Bond(i, i + 1, (1.0, 1.0, 1.0)) for i in range(n - 1)),
        pt_sites=frozenset(range(1, n, 2)),
    )


def frustrated_triangle() -> SpinModel:
    """Negative control: inhomogeneous XYZ triangle with J^x < 0 on one bond.

    Verified non-INES by exact diagonalization (worst residual ~ 0.6).
    Homogeneous variants (uniform Ising/XY/Heisenberg triangles, however
    frustrated) turn out to saturate the bound on average, so an
    inhomogeneous instance is required here.
    """
    return SpinModel(
        3,
        (
            Bond(0, 1, (0.4, 0.2, 0.5)),
            Bond(1, 2, (0.8, 0.3, 0.1)),
            Bond(2, 0, (-0.5, 0.3, 0.2)),
        ),
    )


def xy_chain_ring(n: int, gamma: float) -> SpinModel:
    """Finite ring with the thermodynamic-limit chain convention
    H = (1/2) sum (1+gamma) Sx Sx + (1-gamma) Sy Sy (note the overall + sign,
    distinct from the ferromagnetic `xy_ring` preset)."""
    J = (-(1.0 + gamma) / 2.0, -(1.0 - gamma) / 2.0, 0.0)
    return SpinModel(n, tuple(Bond(i, (i + 1) % n, J) for i in range(n)))


BUNDLED = {
    "triangle.json": ising_triangle,
    "ising5.json": ising_ring,
    "xy5_d0.1.json": xy_ring,
    "xy5_chord.json": chord_xy_ring,
    "heis4.json": heisenberg_chain,
    "heis4_pt13.json": heisenberg_chain_pt,
    "frustrated_triangle.json": frustrated_triangle,
}


def bundled_model_path(name: str):
    """Filesystem path of a bundled model file (context-manager-free access)."""
    return resources.files("frustra").joinpath("models", name)


def write_bundled_models(directory) -> None:
    """Regenerate the bundled JSON files into `directory`."""
    for name, ctor in BUNDLED.items():
        dump_model(ctor(), f"{directory}/{name}")
