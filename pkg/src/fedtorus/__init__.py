"""Exact Fedosov quantization on the standard symplectic torus.

All arithmetic is over Gaussian rationals with polynomial dependence on two
formal deformation parameters; every identity checked by the test suite and
the CLI holds exactly (residuals are exact zeros, not small numbers).
"""

__version__ = "0.1.0"
