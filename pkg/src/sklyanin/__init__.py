"""Exact-arithmetic workbench for the 3-dimensional Sklyanin algebra.

Instantiates the algebra S over a prime field together with its
geometric data: the Hesse cubic E, the translation automorphism, the
twisted homogeneous coordinate ring B = S/gS, divisor calculus on E,
and the blowup / virtual-blowup subalgebras, all with exact
finite-degree verification of their Hilbert series and structural
identities.
"""

__version__ = "0.1.0"
