"""
interp.py
---------------------------------------------------------------------------
Separable Catmull-Rom sampling on uniform lattices with zero extension.

The transforms repeatedly pull lattice functions back under group maps
whose images fall between lattice nodes.  Catmull-Rom weights reproduce
node values exactly (the weight vector at zero fraction is (0, 1, 0, 0)),
are C^1 in the sample position, and are cheap: 4 taps per axis, separable.
Samples outside the lattice read as zero, matching the tail-dead functions
the package works with.
"""

from __future__ import annotations

from itertools import product as _iterproduct

import numpy as np

__all__ = ["cr_weights", "sample"]


def cr_weights(t):
    """Catmull-Rom tap weights at fraction t in [0, 1); shape (4,) + t.shape.

    Taps cover nodes floor(x)-1 .. floor(x)+2 of the sample position x.
    """
    t = np.asarray(t, dtype=float)
    t2 = t * t
    t3 = t2 * t
    w0 = 0.5 * (-t + 2.0 * t2 - t3)
    w1 = 0.5 * (2.0 - 5.0 * t2 + 3.0 * t3)
    w2 = 0.5 * (t + 4.0 * t2 - 3.0 * t3)
    w3 = 0.5 * (-t2 + t3)
    return np.stack([w0, w1, w2, w3])


def sample(values, pos):
    """Interpolate `values` at fractional index positions `pos`.

    values -- lattice array of any rank (real or complex)
    pos    -- array (..., rank) of positions in index units

    Returns an array of shape pos.shape[:-1].  Positions whose 4-tap
    neighborhood sticks out of the lattice use zero for the missing nodes.
    """
    values = np.asarray(values)
    pos = np.asarray(pos, dtype=float)
    rank = values.ndim
    if pos.shape[-1] != rank:
        raise ValueError(f"positions have {pos.shape[-1]} components, lattice rank {rank}")
    out_shape = pos.shape[:-1]
    flat = pos.reshape(-1, rank)

    floor = np.floor(flat)
    frac = flat - floor
    base = floor.astype(np.int64) - 1  # index of tap 0 per axis
    weights = [cr_weights(frac[:, a]) for a in range(rank)]  # each (4, P)

    acc = np.zeros(flat.shape[0], dtype=np.promote_types(values.dtype, float))
    for taps in _iterproduct(range(4), repeat=rank):
        idx = []
        valid = np.ones(flat.shape[0], dtype=bool)
        for a in range(rank):
            ia = base[:, a] + taps[a]
            valid &= (ia >= 0) & (ia < values.shape[a])
            idx.append(np.clip(ia, 0, values.shape[a] - 1))
        w = weights[0][taps[0]]
        for a in range(1, rank):
            w = w * weights[a][taps[a]]
        acc += np.where(valid, w * values[tuple(idx)], 0.0)
    return acc.reshape(out_shape)
