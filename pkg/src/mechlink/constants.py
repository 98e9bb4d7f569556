"""Physical constants (SI, CODATA 2018 exact values)."""

HBAR = 1.054571817e-34  # J s
KB = 1.380649e-23       # J / K
C_LIGHT = 2.99792458e8  # m / s
