"""
Quantization layer.

An operator S on the carrier space has a scalar symbol living on the
coadjoint orbit: dequantize sends S through the operator-side transform to
a function on the group lattice and then through the scalar-side transform
to orbit bins.  quantize is the exact reverse composition.  Both directions
are unitary up to the lattice band truncation, so the twisted product of
symbols (sharp) inherits associativity from operator composition up to the
same truncation.

The parity map conjugates a symbol through the group inversion, read in
the point-value coordinates of the symbol: the orbit chart kappa turns
g -> g^{-1} into an involution of the orbit itself, so the parity symbol
is the old symbol pulled back along that warp.
"""

from __future__ import annotations

import numpy as np

from .hilbert import KernelOperator
from .transforms import (
    fourier_kirillov,
    fourier_kirillov_direct,
    fourier_kirillov_inv,
    fourier_wigner,
    fourier_wigner_adjoint,
)


def dequantize(rep, orbit, A):
    """Orbit-bin symbol of the operator A."""
    ggrid = orbit.group_grid
    coeff = _drop_unpaired_planes(ggrid, fourier_wigner(rep, ggrid, A))
    return fourier_kirillov(ggrid, coeff, orbit)


def _drop_unpaired_planes(ggrid, f):
    """Zero lattice planes that group inversion cannot pair up.

    On an even centered axis the index map i -> -i mod N fixes the plane
    i = 0 (the bare -edge, which has no +edge partner).  Synthesis mass
    there has no mirror image, so it breaks the adjoint covariance of the
    symbol calculus; dropping it restores the covariance exactly while
    touching only grid-edge content.
    """
    out = np.array(f)
    for axis, (c, s0, st) in enumerate(zip(ggrid.counts, ggrid.starts, ggrid.steps)):
        if c % 2 == 0 and abs(s0 + (c // 2) * st) < 1e-9 * st:
            idx = [slice(None)] * out.ndim
            idx[axis] = 0
            out[tuple(idx)] = 0.0
    return out


def quantize(rep, orbit, h):
    """Operator with orbit-bin symbol h."""
    ggrid = orbit.group_grid
    coeff = _drop_unpaired_planes(ggrid, fourier_kirillov_inv(orbit, h))
    return fourier_wigner_adjoint(rep, ggrid, coeff)


def band_project(rep, orbit, A):
    """quantize(dequantize(A)): the part of A visible to the symbol calculus."""
    return quantize(rep, orbit, dequantize(rep, orbit, A))


def sharp(rep, orbit, h, k):
    """Twisted product of symbols: the symbol of quantize(h) quantize(k)."""
    return dequantize(rep, orbit, quantize(rep, orbit, h) @ quantize(rep, orbit, k))


def involuted_symbol(rep, orbit, A):
    """Symbol of A read at inverted group points, on the orbit bins.

    In point-value coordinates the inversion g -> g^{-1} warps the orbit;
    the warped targets fall between dual lattice nodes, so the symbol is
    evaluated there by the direct transform (trigonometric interpolation
    of the lattice field, exact for band content) rather than by local
    polynomial sampling, whose error is pinned to the dual cell size.
    """
    ggrid = orbit.group_grid
    group = orbit.group
    coeff = _drop_unpaired_planes(ggrid, fourier_wigner(rep, ggrid, A))
    Y = orbit.dual_points.reshape(-1, group.dim)
    Yi = group.kappa(group.inv(group.kappa_inv(Y, orbit.orbit_sign)), orbit.orbit_sign)
    vals = fourier_kirillov_direct(ggrid, coeff, dual_points=Yi,
                                   orbit_sign=orbit.orbit_sign)
    return vals.reshape(orbit.shape)


def parity(rep, orbit, A):
    """Operator whose symbol is the symbol of A at inverted group points."""
    return quantize(rep, orbit, involuted_symbol(rep, orbit, A))


def translated_symbol(orbit, h, x):
    """Right translation of a symbol: the result reads h at g x^{-1}.

    Written in the point-value coordinates of the symbol the translation
    moves each orbit bin to kappa(kappa^{-1}(Y) x^{-1}), which lands off
    the bin lattice; as with the inversion warp the values there come
    from the direct transform, so the only error is band truncation.
    """
    ggrid = orbit.group_grid
    group = orbit.group
    coeff = fourier_kirillov_inv(orbit, h)
    Y = orbit.dual_points.reshape(-1, group.dim)
    xinv = group.inv(np.asarray(x, dtype=float))
    g2 = group.mul(group.kappa_inv(Y, orbit.orbit_sign), xinv)
    Y2 = group.kappa(g2, orbit.orbit_sign)
    vals = fourier_kirillov_direct(ggrid, coeff, dual_points=Y2,
                                   orbit_sign=orbit.orbit_sign)
    return vals.reshape(orbit.shape)


def wigner_distribution(rep, ggrid, psi, phi=None):
    """Lattice-home matrix coefficient of the rank-one operator psi x phi.

    With phi omitted this is the distribution of the state psi itself.  Its
    squared modulus is the scalogram of psi against the window phi.
    """
    if phi is None:
        phi = psi
    A = KernelOperator.rank_one(rep.carrier, np.asarray(psi), np.asarray(phi))
    return fourier_wigner(rep, ggrid, A)
