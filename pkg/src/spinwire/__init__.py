"""Spin-chain transport simulation and analysis toolkit.

Dense mixed-state propagation under dipolar / double-quantum Hamiltonians,
pulse-protocol simulation (end selection, DQ filter, MQC phase cycling,
FID/lineshape), exact nearest-neighbor free-fermion solutions, and the
curve/lineshape fitting pipeline for extracting couplings and control times.
"""

from .chain import (
    CapacityError,
    ChainSpec,
    chain_from_config,
    chain_from_json,
    coupling_from_geometry,
    geometric_chain,
    nn_chain,
)
from .operators import (
    DeviationOperator,
    Hamiltonian,
    Observable,
    Propagator,
    build_hamiltonian,
    collective_transverse,
    collective_z,
    custom_observable,
    end_z,
    initial_state,
    measure,
)

__all__ = [
    "CapacityError",
    "ChainSpec",
    "DeviationOperator",
    "Hamiltonian",
    "Observable",
    "Propagator",
    "build_hamiltonian",
    "chain_from_config",
    "chain_from_json",
    "collective_transverse",
    "collective_z",
    "coupling_from_geometry",
    "custom_observable",
    "end_z",
    "geometric_chain",
    "initial_state",
    "measure",
    "nn_chain",
]

__version__ = "0.1.0"
