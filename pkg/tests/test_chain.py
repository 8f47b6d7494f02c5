import json

import numpy as np
import pytest

from spinwire import chain
from spinwire.constants import FAP_CHAIN_SEPARATION, FAP_SPACING, GAMMA_F19


def test_fap_coupling_magnitude():
    # aligned fluorapatite chain: |b| close to the accepted 8.17e3 rad/s
    b = chain.coupling_from_geometry(FAP_SPACING, 0.0, GAMMA_F19)
    assert b < 0  # 1 - 3cos^2(0) = -2
    assert abs(abs(b) - 8.17e3) / 8.17e3 < 0.01


def test_magic_angle_zero():
    theta = np.arccos(1 / np.sqrt(3))
    assert chain.coupling_from_geometry(1e-9, theta) == pytest.approx(0.0, abs=1e-9)


def test_in_chain_to_cross_chain_ratio():
    b_chain = chain.coupling_from_geometry(FAP_SPACING, 0.0)
    b_cross = chain.coupling_from_geometry(FAP_CHAIN_SEPARATION, np.pi / 2)
    ratio = abs(b_chain) / abs(b_cross)
    assert ratio == pytest.approx(40.0, rel=0.02)


def test_nonpositive_distance_rejected():
    with pytest.raises(ValueError):
        chain.coupling_from_geometry(0.0, 0.0)
    with pytest.raises(ValueError):
        chain.coupling_from_geometry(-1e-9, 0.0)


def test_nn_chain_table():
    spec = chain.nn_chain(5, 100.0)
    assert spec.is_nearest_neighbor()
    assert spec.nn_coupling == 100.0
    b = spec.couplings
    assert np.allclose(b, b.T)
    assert np.all(np.diag(b) == 0)
    assert b[0, 2] == 0.0 and b[1, 2] == 100.0


def test_geometric_chain_cubic_decay():
    spec = chain.geometric_chain(6, FAP_SPACING, 0.0)
    b = spec.couplings
    # exact 1/r^3 law
    for j in range(6):
        for l in range(j + 1, 6):
            assert b[j, l] == pytest.approx(b[0, 1] / (l - j) ** 3, rel=1e-12)
    assert not spec.is_nearest_neighbor()


def test_geometric_nn_truncation_matches_uniform():
    spec = chain.geometric_chain(6, FAP_SPACING, 0.0, nn_only=True)
    b_nn = chain.coupling_from_geometry(FAP_SPACING, 0.0)
    assert spec.is_nearest_neighbor()
    assert np.allclose(spec.couplings, chain.nn_chain(6, b_nn).couplings)


def test_asymmetric_table_rejected():
    table = np.zeros((3, 3))
    table[0, 1] = 1.0
    with pytest.raises(ValueError):
        chain.ChainSpec(3, table)


def test_json_round_trip():
    for spec in (chain.nn_chain(8, 8.17e3),
                 chain.geometric_chain(11, FAP_SPACING, 0.1)):
        back = chain.chain_from_json(spec.to_json())
        assert back.n_spins == spec.n_spins
        assert np.allclose(back.couplings, spec.couplings)
        assert back.model == spec.model


def test_custom_round_trip():
    rng = np.random.default_rng(7)
    t = rng.normal(size=(4, 4))
    table = t + t.T
    np.fill_diagonal(table, 0.0)
    spec = chain.ChainSpec(4, table)
    back = chain.chain_from_config(json.loads(spec.to_json()))
    assert np.allclose(back.couplings, spec.couplings)


def test_dense_limit():
    with pytest.raises(chain.CapacityError, match="free-fermion"):
        chain.check_dense_size(15)
    chain.check_dense_size(14)
