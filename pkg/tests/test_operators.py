import numpy as np
import pytest

from spinwire import chain, operators, pauli


def kron_reference_hamiltonian(spec, kind):
    """Independent slow builder: explicit Pauli-string Kronecker products."""
    n = spec.n_spins
    h = np.zeros((2**n, 2**n), dtype=complex)
    for j in range(1, n + 1):
        for l in range(j + 1, n + 1):
            b = spec.coupling(j, l)
            if b == 0.0:
                continue
            xx = pauli.pauli_string(n, {j: "x", l: "x"})
            yy = pauli.pauli_string(n, {j: "y", l: "y"})
            zz = pauli.pauli_string(n, {j: "z", l: "z"})
            if kind == "dq":
                h += 0.5 * b * (xx - yy)
            else:
                h += b * (zz - 0.5 * (xx + yy))
    return h


@pytest.mark.parametrize("kind", ["dq", "dipolar"])
@pytest.mark.parametrize("n", [2, 3, 5])
def test_hamiltonian_matches_kron_reference(kind, n):
    rng = np.random.default_rng(n)
    t = rng.normal(size=(n, n))
    table = t + t.T
    np.fill_diagonal(table, 0.0)
    spec = chain.ChainSpec(n, table)
    h = operators.build_hamiltonian(spec, kind)
    ref = kron_reference_hamiltonian(spec, kind)
    assert np.allclose(h.matrix, ref, atol=1e-12)
    assert pauli.is_hermitian(h.matrix)


def test_dq_two_spin_structure():
    # expanding the flip-flip coupling by hand for 2 spins: only |00><11| + h.c.
    spec = chain.nn_chain(2, 3.0)
    h = operators.build_hamiltonian(spec, "dq").matrix
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 3] = expected[3, 0] = 3.0
    assert np.allclose(h, expected)


def test_single_spin_hamiltonians_vanish():
    spec = chain.ChainSpec(1, np.zeros((1, 1)))
    for kind in ("dq", "dipolar"):
        assert np.all(operators.build_hamiltonian(spec, kind).matrix == 0)


def test_dipolar_conserves_total_z():
    spec = chain.nn_chain(3, 1.0)
    h = operators.build_hamiltonian(spec, "dipolar").matrix
    sz = pauli.collective(3, "z")
    assert np.linalg.norm(h @ sz - sz @ h) < 1e-12


def test_dq_conserves_parity():
    # [H_DQ, prod_j sz_j] = 0: flip-flip terms change magnetization by +-4 halves
    for n in (2, 4, 6):
        spec = chain.geometric_chain(n, 0.3442e-9, 0.0)
        h = operators.build_hamiltonian(spec, "dq").matrix
        par = np.diag(np.prod(pauli.sigma_z_signs(n), axis=0).astype(complex))
        assert np.linalg.norm(h @ par - par @ h) < 1e-12


def test_capacity_error_names_freefermion_path():
    spec = chain.nn_chain(15, 1.0)
    with pytest.raises(chain.CapacityError, match="free-fermion"):
        operators.build_hamiltonian(spec, "dq")


def test_thermal_state_diagonal_counts():
    spec = chain.nn_chain(3, 1.0)
    th = operators.initial_state("thermal", spec)
    diag = np.diag(th.matrix).real
    # entries are (#zero bits - #one bits) per basis state, spin 1 = MSB
    expected = [3, 1, 1, -1, 1, -1, -1, -3]
    assert np.allclose(diag, expected)
    assert abs(np.trace(th.matrix)) < 1e-12


def test_end_polarized_small_chain():
    spec2 = chain.nn_chain(2, 1.0)
    end = operators.initial_state("end", spec2)
    th = operators.initial_state("thermal", spec2)
    assert np.allclose(end.matrix, th.matrix)


@pytest.mark.parametrize("name", ["thermal", "end", "xL", "yL", "zL"])
def test_named_states_traceless_hermitian(name):
    spec = chain.nn_chain(5, 1.0)
    state = operators.initial_state(name, spec)
    assert abs(np.trace(state.matrix)) < 1e-12
    assert pauli.is_hermitian(state.matrix)


def test_logical_states_require_four_spins():
    with pytest.raises(ValueError):
        operators.initial_state("yL", chain.nn_chain(3, 1.0))
    with pytest.raises(ValueError):
        operators.initial_state("end", chain.ChainSpec(1, np.zeros((1, 1))))


def test_logical_yl_rotates_as_double_quantum():
    # z rotation by phi sends yL -> cos(2 phi) yL - sin(2 phi) xL
    n = 4
    spec = chain.nn_chain(n, 1.0)
    yl = operators.initial_state("yL", spec).matrix
    xl = operators.initial_state("xL", spec).matrix
    for phi in (0.3, 1.1, 2.0):
        ph = pauli.z_rotation_phases(n, phi)
        rotated = ph[:, None] * yl * ph.conj()[None, :]
        expected = np.cos(2 * phi) * yl - np.sin(2 * phi) * xl
        assert np.allclose(rotated, expected, atol=1e-12)


def test_measure_normalization_values():
    n = 4
    spec = chain.nn_chain(n, 1.0)
    th = operators.initial_state("thermal", spec)
    end = operators.initial_state("end", spec)
    cz = operators.collective_z(n)
    ez = operators.end_z(n)
    assert operators.measure(th, cz) == pytest.approx(n * 2**n)
    assert operators.measure(end, cz) == pytest.approx(2 * 2**n)
    assert operators.measure(end, ez) == pytest.approx(2 * 2**n)
    # orthogonal Pauli strings
    yl = operators.initial_state("yL", spec)
    assert operators.measure(yl, cz) == pytest.approx(0.0, abs=1e-12)


def test_measure_dimension_mismatch():
    th = operators.initial_state("thermal", chain.nn_chain(3, 1.0))
    with pytest.raises(ValueError, match="dimension"):
        operators.measure(th, operators.collective_z(4))


def test_custom_observable_hermiticity_enforced():
    with pytest.raises(ValueError):
        operators.custom_observable(np.array([[0, 1], [0, 0]], dtype=complex))


def test_propagator_unitarity_and_composition():
    spec = chain.nn_chain(4, 2.0)
    h = operators.build_hamiltonian(spec, "dq")
    u1 = h.propagator(0.3).unitary
    u2 = h.propagator(0.5).unitary
    u12 = h.propagator(0.8).unitary
    eye = np.eye(u1.shape[0])
    assert np.linalg.norm(u1.conj().T @ u1 - eye) < 1e-10
    assert np.linalg.norm(u1 @ u2 - u12) < 1e-9
