"""Covariant quantization on exponential Lie groups.

Numerical realization of wavelet-type Wigner transforms and orbit-space
Fourier transforms for the affine and shearlet groups, with the Heisenberg
group along as a non-quantizable control, plus the verification suites
exercising the operator identities that tie them together.
"""

from orbitquant.groups import AffineGroup, HeisenbergGroup, ShearletGroup

__version__ = "0.1.0"

__all__ = ["AffineGroup", "ShearletGroup", "HeisenbergGroup", "__version__"]
