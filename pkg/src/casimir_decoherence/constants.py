"""Frozen CODATA-2018 physical constants (SI). Used only for SI conversions."""

HBAR_SI = 1.054571817e-34        # J s
KB_SI = 1.380649e-23             # J / K
C_SI = 2.99792458e8              # m / s
