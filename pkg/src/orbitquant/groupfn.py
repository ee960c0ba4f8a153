"""
groupfn.py
---------------------------------------------------------------------------
Functions on the group and on the open coadjoint orbit.

A GroupGrid is a uniform lattice in exponential (algebra) coordinates.
Because the groups here are exponential, exp is a global chart and the
right Haar integral becomes a plain weighted sum over the lattice:

    int f dmu_r  =  sum_i f(exp X_i) theta(X_i) * cell.

The dual object is an OrbitGrid: the DFT-dual lattice of a GroupGrid,
restricted to the bins lying on one open coadjoint orbit (positive or
negative frequency side of the orbit axis, zero and Nyquist bins dropped).
Orbit functions carry the Haar-type weights |Pf| * Delta(kappa^{ -1} Y)
times the dual cell, which is exactly what makes the orbital Fourier
transform in transforms.py unitary onto its range.

The lattice DFT used throughout is the plain Riemann-sum Fourier transform

    H(Y_k) = sum_i h(X_i) e^{+2 pi i X_i . Y_k} * cell,

evaluated exactly via FFTs with boundary phases; `lattice_dft_inv` is its
exact algebraic inverse.
"""

from __future__ import annotations

import numpy as np

from orbitquant import interp

__all__ = [
    "GroupGrid",
    "OrbitGrid",
    "dual_axis",
    "lattice_dft",
    "lattice_dft_inv",
    "involution",
    "convolve",
    "conjugate_by",
    "make_group_function",
]


# ---------------------------------------------------------------------------
# exact lattice Fourier transform
# ---------------------------------------------------------------------------


def dual_axis(count, step):
    """Ascending DFT-dual frequencies of a uniform axis."""
    return np.fft.fftshift(np.fft.fftfreq(count, step))


def _bcast(v, ndim, axis):
    shape = [1] * ndim
    shape[axis] = len(v)
    return v.reshape(shape)


def lattice_dft(h, starts, steps):
    """H(Y_k) = sum_i h(X_i) e^{+2 pi i X_i . Y_k} * prod(steps).

    h is a shaped lattice array; starts/steps give the X lattice per axis.
    Returns the shaped array on the full dual lattice (axes from dual_axis,
    ascending).  Exact up to roundoff: this is an FFT with boundary phases.
    """
    out = np.asarray(h, dtype=complex)
    for axis, (x0, dx) in enumerate(zip(starts, steps)):
        n = out.shape[axis]
        freqs = dual_axis(n, dx)
        y0 = freqs[0]
        i = np.arange(n)
        out = out * _bcast(np.exp(2j * np.pi * i * dx * y0), out.ndim, axis)
        out = np.fft.ifft(out, axis=axis) * (n * dx)
        out = out * _bcast(np.exp(2j * np.pi * x0 * freqs), out.ndim, axis)
    return out


def lattice_dft_inv(H, starts, steps):
    """Exact inverse of lattice_dft (kernel e^{-2 pi i X . Y}, dual cell)."""
    out = np.asarray(H, dtype=complex)
    for axis, (x0, dx) in enumerate(zip(starts, steps)):
        n = out.shape[axis]
        freqs = dual_axis(n, dx)
        y0 = freqs[0]
        dy = 1.0 / (n * dx)
        k = np.arange(n)
        out = out * _bcast(np.exp(-2j * np.pi * x0 * k * dy), out.ndim, axis)
        out = np.fft.fft(out, axis=axis) * dy
        xs = x0 + dx * np.arange(n)
        out = out * _bcast(np.exp(-2j * np.pi * xs * y0), out.ndim, axis)
    return out


# ---------------------------------------------------------------------------
# the group lattice
# ---------------------------------------------------------------------------


class GroupGrid:
    """Uniform lattice in exponential coordinates of an exponential group."""

    def __init__(self, group, counts, steps, starts=None):
        self.group = group
        self.counts = tuple(int(c) for c in counts)
        self.steps = tuple(float(s) for s in steps)
        if len(self.counts) != group.dim or len(self.steps) != group.dim:
            raise ValueError("need one (count, step) pair per algebra dimension")
        if starts is None:
            starts = [-(c // 2) * s for c, s in zip(self.counts, self.steps)]
        self.starts = tuple(float(s) for s in starts)
        self.shape = self.counts
        self.size = int(np.prod(self.counts))
        self.cell = float(np.prod(self.steps))

        axes = [s0 + st * np.arange(c) for s0, st, c in zip(self.starts, self.steps, self.counts)]
        self.axis_vars = axes
        mesh = np.meshgrid(*axes, indexing="ij")
        self.alg = np.stack(mesh, axis=-1)          # (shape..., dim)
        self.points = group.exp(self.alg)           # (shape..., dim)
        self.theta_plus = group.theta(self.alg)
        self.theta_minus = group.theta(-self.alg)
        self.delta = group.modular(self.points)
        self.weight_right = self.theta_plus * self.cell
        self.weight_left = self.theta_minus * self.cell

    @classmethod
    def centered(cls, group, counts, halfwidths):
        """Lattice on prod_i [-h_i, h_i) with the given point counts."""
        steps = [2.0 * h / c for h, c in zip(halfwidths, counts)]
        return cls(group, counts, steps)

    # -- flat views -----------------------------------------------------------

    @property
    def alg_flat(self):
        return self.alg.reshape(-1, self.group.dim)

    @property
    def points_flat(self):
        return self.points.reshape(-1, self.group.dim)

    # -- integration ------------------------------------------------------------

    def integrate_r(self, f):
        return np.sum(np.asarray(f) * self.weight_right)

    def inner_r(self, f, g):
        """Right-Haar inner product, linear in the first slot."""
        return np.sum(np.asarray(f) * np.conj(g) * self.weight_right)

    def norm_r(self, f):
        return float(np.sqrt(np.sum(np.abs(np.asarray(f)) ** 2 * self.weight_right)))

    def inner_l(self, f, g):
        return np.sum(np.asarray(f) * np.conj(g) * self.weight_left)

    def norm_l(self, f):
        return float(np.sqrt(np.sum(np.abs(np.asarray(f)) ** 2 * self.weight_left)))

    def lp_norm_r(self, f, p):
        if np.isinf(p):
            return float(np.max(np.abs(f)))
        return float(np.sum(np.abs(np.asarray(f)) ** p * self.weight_right) ** (1.0 / p))

    # -- geometry helpers ---------------------------------------------------------

    def index_positions(self, X):
        """Algebra points -> fractional lattice indices (for interpolation)."""
        X = np.asarray(X, dtype=float)
        return (X - np.array(self.starts)) / np.array(self.steps)

    def sample(self, f, X):
        """Interpolate a lattice function at arbitrary algebra points."""
        return interp.sample(np.asarray(f), self.index_positions(X))

    def __repr__(self):
        return f"GroupGrid({self.group.name}, counts={self.counts}, steps={self.steps})"


# ---------------------------------------------------------------------------
# lattice operations on group functions
# ---------------------------------------------------------------------------


def involution(grid, f):
    """f -> f(g^{-1}) via exp(-X); the lattice negation is index reversal.

    On a centered even lattice -X_i sits at index (-i) mod N, so this is an
    exact bijection (the leftmost plane maps to itself; harmless for the
    tail-dead functions used here).
    """
    out = np.asarray(f)
    for axis in range(out.ndim):
        out = np.roll(np.flip(out, axis=axis), 1, axis=axis)
    return out


def convolve(grid, f, g, chunk=256):
    """Right-Haar convolution (f * g)(x) = int f(y) g(x y^{-1}) dmu_r(y).

    Evaluated on the lattice by direct summation with Catmull-Rom
    interpolation of g at the off-lattice products x_j y_i^{-1}; zero
    extension outside the lattice.  On the affine lattice the first
    exponential coordinate of x y^{-1} is u_x - u_y, which lands exactly
    on a lattice row, so the sampling collapses to integer row lookups
    with one-axis interpolation; the generic path covers everything else.
    """
    group = grid.group
    f = np.asarray(f)
    g = np.asarray(g)
    dtype = complex if np.iscomplexobj(f) or np.iscomplexobj(g) else float
    if group.name == "affine" and len(grid.counts) == 2:
        off = -grid.starts[0] / grid.steps[0]
        if abs(off - round(off)) < 1e-9:
            out = _convolve_affine_rows(grid, f, g, int(round(off)))
            return out if dtype is complex else out.real
    pts = grid.points_flat
    inv_pts = group.inv(pts)
    fw = (f * grid.weight_right).ravel()
    out = np.zeros(grid.size, dtype=complex)
    for j0 in range(0, grid.size, chunk):
        j1 = min(j0 + chunk, grid.size)
        prod = group.mul(pts[j0:j1][:, None, :], inv_pts[None, :, :])
        X = group.log(prod)
        vals = grid.sample(g, X)  # (j1-j0, M)
        out[j0:j1] = vals @ fw
    out = out.reshape(grid.shape)
    return out if dtype is complex else out.real


def _convolve_affine_rows(grid, f, g, off):
    """Affine lattice convolution with exact row transport.

    For source row i_y and target row i_x the product x y^{-1} lives on
    row i_x - i_y + off; only the second coordinate needs interpolation.
    """
    from orbitquant import interp

    group = grid.group
    nu, nv = grid.counts
    pts = grid.points_flat.reshape(nu, nv, 2)
    fw = np.asarray(f) * grid.weight_right
    gz = np.asarray(g)
    out = np.zeros((nu, nv), dtype=complex)
    ix = np.arange(nu)
    for iy in range(nu):
        yinv = group.inv(pts[iy])
        prod = group.mul(pts[:, :, None, :], yinv[None, None, :, :])
        pv = (group.log(prod)[..., 1] - grid.starts[1]) / grid.steps[1]
        ir = ix - iy + off  # exact product row per target row
        ok_r = (ir >= 0) & (ir < nu)
        rows = np.clip(ir, 0, nu - 1)
        floor = np.floor(pv)
        frac = pv - floor
        base = floor.astype(np.int64) - 1
        w = interp.cr_weights(frac)
        vals = np.zeros(pv.shape, dtype=gz.dtype if gz.dtype.kind == "c" else float)
        for tap in range(4):
            col = base + tap
            ok = ok_r[:, None, None] & (col >= 0) & (col < nv)
            vals += np.where(ok, w[tap] * gz[rows[:, None, None], np.clip(col, 0, nv - 1)], 0.0)
        out += vals @ fw[iy]
    return out


def conjugate_by(grid, f, x):
    """f -> f(x^{-1} y x): pull back along Ad_{x^{-1}} on the algebra lattice."""
    group = grid.group
    xinv = group.inv(np.asarray(x, dtype=float))
    Y = group.adjoint(xinv, grid.alg)
    return grid.sample(np.asarray(f), Y)


def make_group_function(grid, spec, normalize=False):
    """Named test functions in exponential coordinates (product profiles)."""
    from orbitquant.hilbert import profile

    kind = spec["kind"]
    if kind == "zero":
        return np.zeros(grid.shape)
    out = np.ones(grid.shape)
    for i, t in enumerate(grid.axis_vars):
        axspec = {"kind": "gaussian" if kind in ("gaussian", "gaussian_uv") else kind}
        for key in ("center", "width", "order", "radius"):
            if key in spec:
                val = spec[key]
                axspec[key] = val[i] if isinstance(val, (list, tuple)) else val
        shape = [1] * len(grid.shape)
        shape[i] = grid.shape[i]
        out = out * profile(t, axspec).reshape(shape)
    if normalize:
        n = grid.norm_r(out)
        if n > 0:
            out = out / n
    return out


# ---------------------------------------------------------------------------
# the orbit lattice
# ---------------------------------------------------------------------------


class OrbitGrid:
    """DFT-dual lattice of a GroupGrid, restricted to one open orbit.

    The orbit axis keeps only the bins with sign * frequency > 0; the zero
    bin is off the orbit and the (unpaired) Nyquist bin is dropped so both
    signs keep the same count.  Points are labeled three ways: by dual
    coordinates Y, by the group points kappa^{-1}(Y), and by flat indices
    into the full dual lattice (for exact embed/restrict).
    """

    def __init__(self, group_grid, orbit_sign=+1):
        gg = group_grid
        group = gg.group
        if not group.quantizable:
            raise ValueError(
                f"group {group.name!r} has no open coadjoint orbit to restrict to"
            )
        self.group_grid = gg
        self.group = group
        self.orbit_sign = int(orbit_sign)
        axis = group.orbit_axis

        freq_axes = [dual_axis(c, s) for c, s in zip(gg.counts, gg.steps)]
        nyq = 0.5 / gg.steps[axis]
        fa = freq_axes[axis]
        keep = np.nonzero((self.orbit_sign * fa > 0) & (np.abs(fa) < nyq * (1 - 1e-12)))[0]
        self.orbit_axis = axis
        self.keep = keep
        freq_axes = list(freq_axes)
        freq_axes[axis] = fa[keep]
        self.freq_axes = freq_axes
        self.shape = tuple(len(a) for a in freq_axes)
        self.size = int(np.prod(self.shape))

        mesh = np.meshgrid(*freq_axes, indexing="ij")
        self.dual_points = np.stack(mesh, axis=-1)
        self.group_points = group.kappa_inv(self.dual_points, self.orbit_sign)
        self.dual_cell = float(np.prod([1.0 / (c * s) for c, s in zip(gg.counts, gg.steps)]))
        pf = np.abs(group.pfaffian(self.dual_points))
        self.pf_delta = pf * group.modular(self.group_points)
        self.weights = self.pf_delta * self.dual_cell

    def embed(self, h):
        """Orbit-shaped array -> full dual-lattice array (zeros off orbit)."""
        full_shape = self.group_grid.counts
        out = np.zeros(full_shape, dtype=complex)
        idx = [slice(None)] * len(full_shape)
        idx[self.orbit_axis] = self.keep
        out[tuple(idx)] = h
        return out

    def restrict(self, H):
        """Full dual-lattice array -> orbit bins (drops everything else)."""
        idx = [slice(None)] * H.ndim
        idx[self.orbit_axis] = self.keep
        return np.asarray(H)[tuple(idx)]

    def inner(self, h1, h2):
        return np.sum(np.asarray(h1) * np.conj(h2) * self.weights)

    def norm(self, h):
        return float(np.sqrt(np.sum(np.abs(np.asarray(h)) ** 2 * self.weights)))

    def __repr__(self):
        return (
            f"OrbitGrid({self.group.name}, sign={self.orbit_sign:+d}, "
            f"shape={self.shape})"
        )
