"""Physical constants used by the coupling calculations (SI units, CODATA)."""

# Planck constant over 2*pi, J s
HBAR = 1.054571817e-34

# vacuum magnetic permeability, T m / A
MU_0 = 1.25663706212e-6

# gyromagnetic ratio of 19F, rad / (s T)
GAMMA_F19 = 2.51815e8

# fluorapatite chain geometry: in-chain spacing and chain separation, m
FAP_SPACING = 0.3442e-9
FAP_CHAIN_SEPARATION = 0.9367e-9

# reference nearest-neighbor coupling for fluorapatite, rad/s (magnitude)
FAP_COUPLING = 8.17e3
