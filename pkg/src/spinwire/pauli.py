"""Dense Pauli-operator algebra on the 2^N qubit register.

Basis convention used across the whole package: computational z-basis with
spin 1 on the most significant bit, bit value 0 meaning sigma_z = +1.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)

_PAULI = {"i": IDENTITY_2, "x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def kron_all(ops: list[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, ops)


def site_operator(n_spins: int, ops: dict[int, np.ndarray]) -> np.ndarray:
    """Embed single-spin operators on the given 1-based sites, identity elsewhere.

    Site 1 is the leftmost Kronecker factor (most significant bit).
    """
    for site in ops:
        if not 1 <= site <= n_spins:
            raise ValueError(f"site {site} outside chain of {n_spins} spins")
    factors = [ops.get(j, IDENTITY_2) for j in range(1, n_spins + 1)]
    return kron_all(factors)


def pauli_string(n_spins: int, spec: dict[int, str]) -> np.ndarray:
    """Dense Pauli string, e.g. pauli_string(4, {1: 'z', 4: 'z'})."""
    return site_operator(n_spins, {j: _PAULI[a] for j, a in spec.items()})


def spin_bits(n_spins: int) -> np.ndarray:
    """bits[j-1, i] = bit of basis state i at site j (0 means sigma_z = +1)."""
    idx = np.arange(2**n_spins)
    shifts = np.arange(n_spins - 1, -1, -1)
    return (idx[None, :] >> shifts[:, None]) & 1


def sigma_z_signs(n_spins: int) -> np.ndarray:
    """signs[j-1, i] = <i| sigma_z^j |i> = +/-1."""
    return 1 - 2 * spin_bits(n_spins)


def collective_z_diagonal(n_spins: int) -> np.ndarray:
    """Diagonal of the total magnetization Sum_j sigma_z^j."""
    return sigma_z_signs(n_spins).sum(axis=0).astype(np.float64)


def collective(n_spins: int, axis: str) -> np.ndarray:
    """Sum_j sigma_axis^j as a dense matrix."""
    if axis == "z":
        return np.diag(collective_z_diagonal(n_spins)).astype(np.complex128)
    op = np.zeros((2**n_spins, 2**n_spins), dtype=np.complex128)
    for j in range(1, n_spins + 1):
        op += pauli_string(n_spins, {j: axis})
    return op


def collective_rotation(n_spins: int, axis: str, angle: float) -> np.ndarray:
    """U = exp(-i * angle/2 * Sum_j sigma_axis^j), built site by site.

    `axis` is 'x', 'y', 'z' or an azimuthal angle phi (radians) for an
    axis cos(phi) x + sin(phi) y in the transverse plane.
    """
    if isinstance(axis, str):
        generator = _PAULI[axis]
    else:
        generator = np.cos(axis) * SIGMA_X + np.sin(axis) * SIGMA_Y
    u1 = np.cos(angle / 2) * IDENTITY_2 - 1j * np.sin(angle / 2) * generator
    return kron_all([u1] * n_spins)


def z_rotation_phases(n_spins: int, angle: float) -> np.ndarray:
    """Diagonal of exp(-i * angle * Sum_j sigma_z^j / 2)."""
    return np.exp(-0.5j * angle * collective_z_diagonal(n_spins))


def coherence_orders(n_spins: int) -> np.ndarray:
    """orders[r, c] = coherence order of the matrix element |r><c|.

    Order n means the element gains a phase exp(-i n phi) under the
    collective z rotation exp(-i phi Sum sigma_z / 2).
    """
    m = collective_z_diagonal(n_spins)
    return ((m[:, None] - m[None, :]) / 2).astype(np.int64)


def is_hermitian(a: np.ndarray, tol: float = 1e-12) -> bool:
    scale = max(np.linalg.norm(a), 1.0)
    return np.linalg.norm(a - a.conj().T) <= tol * scale


def hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Tr[a^dag b]."""
    return complex(np.vdot(a, b))
