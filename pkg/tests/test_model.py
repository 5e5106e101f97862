import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frustra import presets
from frustra.errors import CapacityError, ValidationError
from frustra.model import (
    Bond,
    SpinModel,
    apply_gauge,
    build_hamiltonian,
    local_term,
    load_model,
    model_from_dict,
    model_to_dict,
    parity_operator,
    partial_transpose,
    site_operator,
    two_site_operator,
)
from util import random_gauged_model, random_model


def test_single_z_bond_is_diagonal():
    m = SpinModel(2, (Bond(0, 1, (0.0, 0.0, 1.0)),))
    H = build_hamiltonian(m)
    np.testing.assert_allclose(H, np.diag([-0.25, 0.25, 0.25, -0.25]), atol=1e-15)


def test_ising_triangle_ground_energy_and_degeneracy():
    H = build_hamiltonian(presets.ising_triangle())
    w = np.linalg.eigvalsh(H)
    assert w[0] == pytest.approx(-0.75, abs=1e-12)
    assert w[1] == pytest.approx(-0.75, abs=1e-12)
    assert w[2] > -0.75 + 1e-6


def test_xy_ring_doubly_degenerate():
    H = build_hamiltonian(presets.xy_ring())
    assert H.shape == (32, 32)
    assert np.abs(H - H.conj().T).max() < 1e-12
    w = np.linalg.eigvalsh(H)
    assert w[1] - w[0] < 1e-10
    assert w[2] - w[0] > 1e-3


def test_local_term_heisenberg_spectrum():
    h = local_term(Bond(0, 1, (1.0, 1.0, 1.0)))
    w = np.linalg.eigvalsh(h)
    np.testing.assert_allclose(w, [-0.25, -0.25, -0.25, 0.75], atol=1e-14)


def test_local_term_xy_unique_ground():
    h = local_term(Bond(0, 1, (1.0, 0.1, 0.0)))
    w = np.linalg.eigvalsh(h)
    assert w[1] - w[0] > 1e-3  # unique Bell ground state


def test_local_term_zero_coupling():
    h = local_term(Bond(0, 1, (0.0, 0.0, 0.0)))
    np.testing.assert_array_equal(h, np.zeros((4, 4)))


def test_two_site_operator_matches_product():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    got = two_site_operator(sx, sy, 3, 1, 5)
    want = site_operator(sx, 3, 5) @ site_operator(sy, 1, 5)
    np.testing.assert_allclose(got, want, atol=1e-15)


def test_identity_gauge_is_identity():
    m = presets.xy_ring()
    H = build_hamiltonian(m)
    np.testing.assert_array_equal(apply_gauge(H, ("I",) * 5), H)


def test_z_gauge_flips_transverse_couplings():
    plain = SpinModel(2, (Bond(0, 1, (0.7, 0.3, 0.2)),))
    flipped = SpinModel(2, (Bond(0, 1, (-0.7, -0.3, 0.2)),))
    gauged = SpinModel(2, plain.bonds, gauges=("Z", "I"))
    np.testing.assert_allclose(
        build_hamiltonian(gauged), build_hamiltonian(flipped), atol=1e-14
    )


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_gauge_preserves_spectrum(seed):
    rng = np.random.default_rng(seed)
    m = random_model(4, rng)
    H = build_hamiltonian(m)
    gauges = tuple(rng.choice(list("IXYZ")) for _ in range(4))
    w0 = np.linalg.eigvalsh(H)
    w1 = np.linalg.eigvalsh(apply_gauge(H, gauges))
    np.testing.assert_allclose(w0, w1, atol=1e-10)


def test_gauge_length_mismatch():
    H = build_hamiltonian(presets.xy_ring())
    with pytest.raises(ValidationError):
        apply_gauge(H, ("X", "I"))


def test_partial_transpose_empty_is_identity():
    H = build_hamiltonian(presets.xy_ring())
    np.testing.assert_array_equal(partial_transpose(H, ()), H)


def test_partial_transpose_endpoint_negates_jy():
    m = SpinModel(3, (Bond(0, 1, (0.4, 0.8, 0.3)), Bond(1, 2, (0.2, 0.5, 0.9))))
    direct = SpinModel(
        3,
        (Bond(0, 1, (0.4, -0.8, 0.3)), Bond(1, 2, (0.2, 0.5, 0.9))),
    )
    pt = partial_transpose(build_hamiltonian(m), {0})
    np.testing.assert_array_equal(pt, build_hamiltonian(direct))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sets(st.integers(0, 3)))
def test_partial_transpose_is_involution(seed, sites):
    rng = np.random.default_rng(seed)
    H = build_hamiltonian(random_model(4, rng))
    np.testing.assert_array_equal(
        partial_transpose(partial_transpose(H, sites), sites), H
    )


def test_full_partial_transpose_preserves_spectrum():
    rng = np.random.default_rng(5)
    for _ in range(10):
        m = random_model(4, rng)
        H = build_hamiltonian(m)
        HT = partial_transpose(H, range(4))
        np.testing.assert_array_equal(HT, H.T)
        np.testing.assert_allclose(
            np.linalg.eigvalsh(H), np.linalg.eigvalsh(HT), atol=1e-10
        )


def test_heisenberg_pt_maps_to_antiferromagnet():
    H = build_hamiltonian(presets.heisenberg_chain_pt())
    afm = SpinModel(4, tuple(Bond(i, i + 1, (-1.0, -1.0, -1.0)) for i in range(3)))
    np.testing.assert_allclose(
        np.linalg.eigvalsh(H), np.linalg.eigvalsh(build_hamiltonian(afm)), atol=1e-10
    )


def test_hermiticity_of_random_transformed_models():
    rng = np.random.default_rng(11)
    for _ in range(100):
        m = random_gauged_model(int(rng.integers(2, 6)), rng)
        H = build_hamiltonian(m)
        assert np.abs(H - H.conj().T).max() < 1e-12


def test_parity_operator_shape_and_involution():
    for ax in "xyz":
        P = parity_operator(3, ax)
        np.testing.assert_allclose(P @ P, np.eye(8), atol=1e-14)


def test_size_cap():
    bonds = tuple(Bond(i, i + 1, (1.0, 0.0, 0.0)) for i in range(15))
    with pytest.raises(CapacityError):
        build_hamiltonian(SpinModel(16, bonds))


def test_bond_validation():
    with pytest.raises(ValidationError):
        Bond(1, 1, (1.0, 0.0, 0.0))
    with pytest.raises(ValidationError):
        Bond(0, 1, (np.inf, 0.0, 0.0))
    with pytest.raises(ValidationError):
        SpinModel(3, (Bond(0, 1, (1, 0, 0)), Bond(1, 0, (1, 0, 0))))
    with pytest.raises(ValidationError):
        SpinModel(2, (Bond(0, 3, (1, 0, 0)),))


def test_model_json_roundtrip(tmp_path):
    m = SpinModel(
        3,
        (Bond(0, 1, (0.5, -0.25, 1.0)), Bond(1, 2, (0.1, 0.2, 0.3))),
        gauges=("X", "I", "Z"),
        pt_sites=frozenset({1}),
    )
    doc = model_to_dict(m)
    again = model_from_dict(doc)
    assert again == m


def test_model_file_unknown_keys_rejected():
    with pytest.raises(ValidationError):
        model_from_dict({"sites": 2, "bonds": [], "flux": 1})
    with pytest.raises(ValidationError):
        model_from_dict({"sites": 2, "bonds": [{"i": 0, "j": 1, "J": [1, 0, 0], "w": 2}]})


def test_malformed_json_raises(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ValidationError):
        load_model(path)


def test_bundled_models_load():
    for name in presets.BUNDLED:
        m = load_model(presets.bundled_model_path(name))
        assert m == presets.BUNDLED[name]()
