"""Chain geometry and dipolar coupling tables.

A ChainSpec holds the pairwise couplings b_jl (rad/s) of an N-spin chain,
either as a uniform nearest-neighbor idealization or computed from the
crystal geometry (collinear chain at angle theta to the field).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .constants import GAMMA_F19, HBAR, MU_0

DENSE_SPIN_LIMIT = 14


class CapacityError(ValueError):
    """Requested dense operation exceeds the configured qubit-count limit."""


def coupling_from_geometry(r: float, theta: float, gamma: float = GAMMA_F19) -> float:
    """Secular dipolar coupling (rad/s) of two like spins.

    b = (mu0 / 16 pi) * (gamma^2 hbar / r^3) * (1 - 3 cos^2 theta)

    r in meters, theta the angle between the internuclear vector and the
    field axis. Negative for theta below the magic angle.
    """
    if r <= 0:
        raise ValueError(f"internuclear distance must be positive, got {r}")
    return (MU_0 / (16 * np.pi)) * (gamma**2 * HBAR / r**3) * (1 - 3 * np.cos(theta) ** 2)


@dataclass(frozen=True)
class ChainSpec:
    """N spins with a symmetric, zero-diagonal coupling table in rad/s."""

    n_spins: int
    couplings: np.ndarray
    model: str = "custom"
    geometry: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValueError("chain needs at least one spin")
        b = np.asarray(self.couplings, dtype=np.float64)
        if b.shape != (self.n_spins, self.n_spins):
            raise ValueError(f"coupling table must be {self.n_spins}x{self.n_spins}")
        if not np.allclose(b, b.T):
            raise ValueError("coupling table must be symmetric")
        if np.any(np.diag(b) != 0):
            raise ValueError("coupling table must have zero diagonal")
        b = b.copy()
        b.flags.writeable = False
        object.__setattr__(self, "couplings", b)

    def coupling(self, j: int, l: int) -> float:
        """b_jl for 1-based sites."""
        return float(self.couplings[j - 1, l - 1])

    @property
    def nn_coupling(self) -> float:
        """Nearest-neighbor coupling b_12 (uniform for nn/geometric models)."""
        if self.n_spins < 2:
            return 0.0
        return self.coupling(1, 2)

    def is_nearest_neighbor(self, rtol: float = 1e-12) -> bool:
        """True when only |j-l| = 1 couplings are present and all equal."""
        b = self.couplings
        if self.n_spins < 2:
            return True
        nn = np.diag(b, 1)
        if not np.allclose(nn, nn[0], rtol=rtol, atol=0.0):
            return False
        mask = np.abs(np.subtract.outer(range(self.n_spins), range(self.n_spins))) == 1
        return bool(np.all(b[~mask] == 0.0))

    def to_json(self) -> str:
        return json.dumps(self.to_config(), indent=2, sort_keys=True)

    def to_config(self) -> dict:
        cfg = {"n_spins": self.n_spins, "model": self.model}
        if self.model == "nn":
            cfg["b_rad_per_s"] = self.nn_coupling
        elif self.model == "geometric":
            cfg.update(self.geometry)
        else:
            cfg["couplings_rad_per_s"] = self.couplings.tolist()
        return cfg


def nn_chain(n_spins: int, b: float) -> ChainSpec:
    """Uniform nearest-neighbor chain with coupling b (rad/s)."""
    table = np.zeros((n_spins, n_spins))
    for j in range(n_spins - 1):
        table[j, j + 1] = table[j + 1, j] = b
    return ChainSpec(n_spins, table, model="nn")


def geometric_chain(
    n_spins: int,
    spacing: float,
    theta: float = 0.0,
    gamma: float = GAMMA_F19,
    nn_only: bool = False,
) -> ChainSpec:
    """Collinear chain with 1/r^3 dipolar couplings from equal spacing (m).

    All internuclear vectors of a straight chain share the angle theta, so
    b_jl = b_nn / |j-l|^3 exactly. `nn_only` truncates to nearest neighbors,
    which makes the truncation error against the full table measurable.
    """
    b_nn = coupling_from_geometry(spacing, theta, gamma)
    table = np.zeros((n_spins, n_spins))
    for j in range(n_spins):
        for l in range(j + 1, n_spins):
            if nn_only and l - j > 1:
                continue
            table[j, l] = table[l, j] = b_nn / (l - j) ** 3
    geometry = {
        "d_nm": spacing * 1e9,
        "theta_deg": float(np.degrees(theta)),
        "gamma": gamma,
        "nn_only": nn_only,
    }
    return ChainSpec(n_spins, table, model="geometric", geometry=geometry)


def chain_from_config(cfg: dict) -> ChainSpec:
    """Inverse of ChainSpec.to_config / to_json."""
    try:
        n = int(cfg["n_spins"])
        model = cfg["model"]
    except KeyError as exc:
        raise ValueError(f"chain config missing key {exc}") from None
    if model == "nn":
        return nn_chain(n, float(cfg["b_rad_per_s"]))
    if model == "geometric":
        return geometric_chain(
            n,
            float(cfg["d_nm"]) * 1e-9,
            np.radians(float(cfg.get("theta_deg", 0.0))),
            float(cfg.get("gamma", GAMMA_F19)),
            bool(cfg.get("nn_only", False)),
        )
    if model == "custom":
        return ChainSpec(n, np.asarray(cfg["couplings_rad_per_s"], dtype=float))
    raise ValueError(f"unknown chain model {model!r}")


def chain_from_json(text: str) -> ChainSpec:
    return chain_from_config(json.loads(text))


def check_dense_size(n_spins: int, limit: int = DENSE_SPIN_LIMIT) -> None:
    if n_spins > limit:
        raise CapacityError(
            f"n_spins={n_spins} exceeds the dense limit of {limit}; "
            "for nearest-neighbor chains use the free-fermion engine "
            "(spinwire.analytic.freefermion_transport)"
        )
