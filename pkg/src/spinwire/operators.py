"""Dense Hamiltonians, deviation operators and observables for spin chains.

Deviation operators are the traceless part of the density matrix; all named
initial states are plain Pauli-string sums with the thermal polarization
scale absorbed into the overall signal normalization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from . import pauli
from .chain import ChainSpec, check_dense_size

HERMITIAN_TOL = 1e-12

DIPOLAR = "dipolar"
DOUBLE_QUANTUM = "dq"

INITIAL_STATES = ("thermal", "end", "xL", "yL", "zL")


@dataclass
class Hamiltonian:
    """Dense Hermitian generator with a cached eigendecomposition."""

    kind: str
    matrix: np.ndarray
    spec: ChainSpec

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eig(self) -> tuple[np.ndarray, np.ndarray]:
        """(eigenvalues, eigenvectors) with H = V diag(w) V^dag."""
        w, v = scipy.linalg.eigh(self.matrix, driver="evr")
        return w, v

    def propagator(self, t: float) -> "Propagator":
        w, v = self.eig
        u = (v * np.exp(-1j * w * t)) @ v.conj().T
        return Propagator(unitary=u, generator=self, time=t)


@dataclass(frozen=True)
class Propagator:
    """U = exp(-i H t) for a fixed Hamiltonian and time."""

    unitary: np.ndarray
    generator: Hamiltonian
    time: float


def build_hamiltonian(spec: ChainSpec, kind: str, dense_limit: int | None = None) -> Hamiltonian:
    """Dense chain Hamiltonian.

    kind "dq":      Sum_{j<l} b_jl/2 (sx_j sx_l - sy_j sy_l)
    kind "dipolar": Sum_{j<l} b_jl [sz_j sz_l - (sx_j sx_l + sy_j sy_l)/2]

    Matrix elements are filled by bit manipulation on the basis indices;
    the double-quantum term couples |..0..0..> with |..1..1..> (element
    b_jl) and the dipolar flip-flop couples |..0..1..> with |..1..0..>
    (element -b_jl) on top of the b_jl sz sz diagonal.
    """
    if dense_limit is None:
        check_dense_size(spec.n_spins)
    else:
        check_dense_size(spec.n_spins, dense_limit)
    if kind not in (DIPOLAR, DOUBLE_QUANTUM):
        raise ValueError(f"unknown Hamiltonian kind {kind!r}")

    n = spec.n_spins
    dim = 2**n
    h = np.zeros((dim, dim), dtype=np.complex128)
    idx = np.arange(dim)
    bits = pauli.spin_bits(n)
    signs = 1 - 2 * bits

    for j in range(n):
        for l in range(j + 1, n):
            b = spec.couplings[j, l]
            if b == 0.0:
                continue
            mask = (1 << (n - 1 - j)) | (1 << (n - 1 - l))
            equal = bits[j] == bits[l]
            if kind == DOUBLE_QUANTUM:
                src = idx[equal]
                h[src ^ mask, src] += b
            else:
                h[idx, idx] += b * signs[j] * signs[l]
                src = idx[~equal]
                h[src ^ mask, src] += -b
    return Hamiltonian(kind=kind, matrix=h, spec=spec)


@dataclass(frozen=True)
class DeviationOperator:
    """Traceless Hermitian deviation of the density operator."""

    matrix: np.ndarray
    name: str | None = None
    normalization: float = 1.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("deviation operator must be a square matrix")
        if not pauli.is_hermitian(m, HERMITIAN_TOL):
            raise ValueError("deviation operator must be Hermitian")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_spins(self) -> int:
        return int(np.log2(self.dim) + 0.5)

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def scaled(self, factor: float) -> "DeviationOperator":
        return DeviationOperator(self.matrix * factor, name=self.name,
                                 normalization=self.normalization * factor)


def logical_pair_operator(n_spins: int, kind: str, site: int) -> np.ndarray:
    """Two-spin encoded operator of the |00>,|11> logical basis on (site, site+1).

    xL: (sx sx - sy sy)/2     yL: (sy sx + sx sy)/2     zL: (sz + sz)/2
    """
    j, l = site, site + 1
    if kind == "xL":
        return 0.5 * (pauli.pauli_string(n_spins, {j: "x", l: "x"})
                      - pauli.pauli_string(n_spins, {j: "y", l: "y"}))
    if kind == "yL":
        return 0.5 * (pauli.pauli_string(n_spins, {j: "y", l: "x"})
                      + pauli.pauli_string(n_spins, {j: "x", l: "y"}))
    if kind == "zL":
        return 0.5 * (pauli.pauli_string(n_spins, {j: "z"})
                      + pauli.pauli_string(n_spins, {l: "z"}))
    raise ValueError(f"unknown logical operator {kind!r}")


def initial_state(name: str, spec: ChainSpec) -> DeviationOperator:
    """Named initial deviation operators.

    thermal:  Sum_j sz_j
    end:      sz_1 + sz_N                    (N >= 2)
    xL/yL/zL: logical operator on spins (1,2) plus (N-1,N)   (N >= 4)
    """
    n = spec.n_spins
    if name == "thermal":
        m = np.diag(pauli.collective_z_diagonal(n)).astype(np.complex128)
    elif name == "end":
        if n < 2:
            raise ValueError("end-polarized state needs at least 2 spins")
        m = pauli.pauli_string(n, {1: "z"}) + pauli.pauli_string(n, {n: "z"})
    elif name in ("xL", "yL", "zL"):
        if n < 4:
            raise ValueError("logical states need at least 4 spins so the "
                             "encoded pairs (1,2) and (N-1,N) are disjoint")
        m = logical_pair_operator(n, name, 1) + logical_pair_operator(n, name, n - 1)
    else:
        raise ValueError(f"unknown initial state {name!r}; choose from {INITIAL_STATES}")
    return DeviationOperator(m, name=name)


@dataclass(frozen=True)
class Observable:
    """Readout operator; `matrix` is Hermitian except for the transverse kind."""

    kind: str
    matrix: np.ndarray
    meta: dict = field(default_factory=dict)


def collective_z(n_spins: int) -> Observable:
    m = np.diag(pauli.collective_z_diagonal(n_spins)).astype(np.complex128)
    return Observable("collective_z", m)


def end_z(n_spins: int) -> Observable:
    """Ideal end-spin magnetization sz_1 + sz_N."""
    m = pauli.pauli_string(n_spins, {1: "z"}) + pauli.pauli_string(n_spins, {n_spins: "z"})
    return Observable("end_z", m)


def collective_transverse(n_spins: int) -> Observable:
    """Sum_j (sx_j + i sy_j); measured expectation is complex."""
    m = pauli.collective(n_spins, "x") + 1j * pauli.collective(n_spins, "y")
    return Observable("transverse", m)


def custom_observable(matrix: np.ndarray) -> Observable:
    m = np.asarray(matrix, dtype=np.complex128)
    if not pauli.is_hermitian(m, HERMITIAN_TOL):
        raise ValueError("custom observable must be Hermitian")
    return Observable("custom", m)


def measure(state: DeviationOperator, obs: Observable) -> float | complex:
    """Raw expectation Tr[delta_rho O].

    Real for Hermitian observables, complex for the transverse kind.
    Signal-producing routines divide by the t = 0 value of the declared
    init/readout pair so that reported traces start at 1.
    """
    if state.matrix.shape != obs.matrix.shape:
        raise ValueError(
            f"dimension mismatch: state {state.matrix.shape} vs observable {obs.matrix.shape}")
    if obs.kind == "transverse":
        # Tr[rho O] for non-Hermitian O, without forming the product matrix
        return complex(np.sum(state.matrix * obs.matrix.T))
    return float(np.vdot(obs.matrix, state.matrix).real)
