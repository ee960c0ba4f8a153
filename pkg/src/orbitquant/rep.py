"""
rep.py
---------------------------------------------------------------------------
Irreducible unitary representations attached to the open coadjoint orbits.

Both quantizable groups act on their carrier space by a multiplier phase
times a point transformation:

  affine   on L^2(R_+, dr/r):
      (pi_{+/-}(a, x) psi)(r) = e^{ -/+ 2 pi i x r } psi(a r)

  shearlet on L^2(R_+ x R, db dt / b):
      (pi_{+/-}(a, s, x1, x2) phi)(b, t)
          = e^{ -/+ 2 pi i (b x1 + sqrt(b) t x2) } phi(b a, t + s sqrt(b))

The orbit sign picks the representation (sign of the frequency half-line).
On the lattice the point transformation becomes a (possibly fractional)
shift along the log axes plus a row-dependent shift along linear axes,
realized with the Catmull-Rom sampler; when the shifts land on lattice
nodes the matrices are exact truncated shifts and pi(g^{-1}) = pi(g)* holds
to roundoff including the truncation.

The Duflo-Moore operator D making the matrix coefficients square-integrable
is diagonal: multiplication by sqrt(r) for the affine group and by b for
the shearlet group.
"""

from __future__ import annotations

import numpy as np

from orbitquant import interp
from orbitquant.hilbert import KernelOperator

__all__ = ["Representation"]


class Representation:
    """Integrated lattice picture of the orbit representation pi_{+/-}."""

    def __init__(self, group, carrier, orbit_sign=+1):
        if not getattr(group, "quantizable", False):
            raise ValueError(
                f"group {group.name!r} admits no open coadjoint orbit; "
                "there is no square-integrable orbit representation to build"
            )
        if orbit_sign not in (+1, -1):
            raise ValueError("orbit_sign must be +1 or -1")
        self.group = group
        self.carrier = carrier
        self.orbit_sign = int(orbit_sign)

        kinds = tuple(ax.kind for ax in carrier.axes)
        if group.name == "affine":
            if kinds != ("log",):
                raise ValueError("affine carrier needs a single log axis")
            self.r = carrier.coords()[0]
        elif group.name == "shearlet":
            if kinds != ("log", "linear"):
                raise ValueError("shearlet carrier needs axes (log b, linear t)")
            self.b = carrier.coords()[0]
            self.t = carrier.coords()[1]
        else:
            raise ValueError(f"no representation coded for group {group.name!r}")

    # -- pointwise action ------------------------------------------------------

    def action(self, g):
        """Sample positions (index units) and multiplier phase of pi(g).

        Returns (pos, phase): pos has shape carrier.shape + (rank,), phase
        has shape carrier.shape; (pi(g) psi)(p) = phase(p) psi(pos(p)).
        """
        g = np.asarray(g, dtype=float)
        s = self.orbit_sign
        axes = self.carrier.axes
        if self.group.name == "affine":
            a, x = g[0], g[1]
            ax = axes[0]
            idx = np.arange(ax.count) + np.log(a) / ax.step
            pos = idx[:, None]
            phase = np.exp(-2j * np.pi * s * x * self.r)
            return pos, phase
        # shearlet
        a, sh, x1, x2 = g
        axb, axt = axes
        jb = np.arange(axb.count) + np.log(a) / axb.step
        rb = np.sqrt(self.b)
        tt = (self.t[None, :] + sh * rb[:, None] - axt.start) / axt.step
        pos = np.stack([np.broadcast_to(jb[:, None], tt.shape), tt], axis=-1)
        phase = np.exp(
            -2j * np.pi * s * (self.b[:, None] * x1 + rb[:, None] * self.t[None, :] * x2)
        )
        return pos, phase

    def apply(self, g, psi):
        pos, phase = self.action(g)
        return phase * interp.sample(np.asarray(psi), pos)

    # -- dense matrices ----------------------------------------------------------

    def matrix(self, g):
        """pi(g) as a KernelOperator (exact shift matrix at aligned g)."""
        pos, phase = self.action(g)
        grid = self.carrier
        rank = grid.rank
        flat_pos = pos.reshape(-1, rank)
        phase_flat = phase.ravel()
        n = grid.size

        floor = np.floor(flat_pos)
        frac = flat_pos - floor
        base = floor.astype(np.int64) - 1
        weights = [interp.cr_weights(frac[:, a]) for a in range(rank)]

        M = np.zeros((n, n), dtype=complex)
        rows = np.arange(n)
        from itertools import product as _prod

        for taps in _prod(range(4), repeat=rank):
            w = weights[0][taps[0]]
            idx = []
            valid = np.ones(n, dtype=bool)
            for a in range(rank):
                ia = base[:, a] + taps[a]
                valid &= (ia >= 0) & (ia < grid.shape[a])
                idx.append(np.clip(ia, 0, grid.shape[a] - 1))
            for a in range(1, rank):
                w = w * weights[a][taps[a]]
            cols = np.ravel_multi_index(idx, grid.shape)
            vals = (w * phase_flat)[valid]
            np.add.at(M, (rows[valid], cols[valid]), vals)
        return KernelOperator(grid, M / grid.weight)

    def matrix_inv(self, g):
        return self.matrix(self.group.inv(np.asarray(g, dtype=float)))

    # -- Duflo-Moore -------------------------------------------------------------

    def dm_values(self):
        """Diagonal of the Duflo-Moore operator on the lattice."""
        if self.group.name == "affine":
            return np.sqrt(self.r)
        bb, _ = np.meshgrid(self.b, self.t, indexing="ij")
        return bb

    def duflo_moore(self):
        return KernelOperator.diagonal(self.carrier, self.dm_values())

    def duflo_moore_inv(self):
        return KernelOperator.diagonal(self.carrier, 1.0 / self.dm_values())

    def __repr__(self):
        return (
            f"Representation({self.group.name}, sign={self.orbit_sign:+d}, "
            f"carrier={self.carrier!r})"
        )
