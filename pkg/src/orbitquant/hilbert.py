"""
hilbert.py
---------------------------------------------------------------------------
Discrete carrier Hilbert spaces and dense kernel operators.

The representation spaces in this package are L^2 spaces over products of
half-lines and lines with a homogeneous measure, e.g. L^2(R_+, dr/r) for
the affine group and L^2(R_+ x R, db dt/b) for the shearlet group.  Each
axis is sampled in the variable that makes the measure translation
invariant ("log" axes sample t = ln r uniformly, "linear" axes sample the
coordinate itself), so every lattice point carries the same quadrature
weight and the weight of the whole grid is a single scalar.

Operators are kept as dense kernels: (A psi)(r_j) = sum_k M[j,k] psi_k w,
which matches the continuous convention (A psi)(r) = int K(r, r') psi(r')
dmu(r').  Composition, adjoints, traces and Hilbert-Schmidt inner products
then reduce to matrix algebra with powers of the scalar weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Axis", "CarrierGrid", "KernelOperator", "make_signal"]


@dataclass(frozen=True)
class Axis:
    """One sampled axis.

    kind   -- "log" (samples t = ln r, measure dr/r) or "linear"
    count  -- number of samples
    start  -- first sample, in the axis variable
    step   -- spacing, in the axis variable
    """

    kind: str
    count: int
    start: float
    step: float

    def __post_init__(self):
        if self.kind not in ("log", "linear"):
            raise ValueError(f"unknown axis kind {self.kind!r}")
        if self.count < 2 or self.step <= 0:
            raise ValueError("axis needs count >= 2 and positive step")

    @classmethod
    def centered(cls, kind, count, halfwidth):
        """Symmetric axis on [-halfwidth, halfwidth) in the axis variable."""
        step = 2.0 * halfwidth / count
        return cls(kind, count, -(count // 2) * step, step)

    def var(self):
        """Axis variable samples (the log variable on log axes)."""
        return self.start + self.step * np.arange(self.count)

    def coord(self):
        """Physical coordinate samples: e^t on log axes, t otherwise."""
        t = self.var()
        return np.exp(t) if self.kind == "log" else t


class CarrierGrid:
    """Product grid carrying an L^2 space with a homogeneous measure."""

    def __init__(self, axes):
        self.axes = tuple(axes)
        self.shape = tuple(ax.count for ax in self.axes)
        self.size = int(np.prod(self.shape))
        # dmu = prod(dt_i) in the axis variables, constant across the lattice
        self.weight = float(np.prod([ax.step for ax in self.axes]))

    @property
    def rank(self):
        return len(self.axes)

    def vars(self):
        return [ax.var() for ax in self.axes]

    def coords(self):
        return [ax.coord() for ax in self.axes]

    def mesh_vars(self):
        return np.meshgrid(*self.vars(), indexing="ij")

    def mesh_coords(self):
        return np.meshgrid(*self.coords(), indexing="ij")

    def inner(self, f, g):
        """<f, g> = sum f conj(g) * weight (linear in the first slot)."""
        f = np.asarray(f)
        g = np.asarray(g)
        return self.weight * np.vdot(g.ravel(), f.ravel())

    def norm(self, f):
        f = np.asarray(f)
        return float(np.sqrt(self.weight) * np.linalg.norm(f.ravel()))

    def normalize(self, f):
        return np.asarray(f) / self.norm(f)

    def __eq__(self, other):
        return isinstance(other, CarrierGrid) and self.axes == other.axes

    def __hash__(self):
        return hash(self.axes)

    def __repr__(self):
        core = ", ".join(
            f"{ax.kind}[{ax.count} @ {ax.start:g}:{ax.step:g}]" for ax in self.axes
        )
        return f"CarrierGrid({core})"


class KernelOperator:
    """Dense integral operator on a CarrierGrid.

    The kernel matrix is indexed by flattened (row-major) lattice indices:
    (A psi)_j = sum_k M[j, k] psi_k w with w the scalar lattice weight.
    """

    def __init__(self, grid, matrix):
        matrix = np.asarray(matrix)
        if matrix.shape != (grid.size, grid.size):
            raise ValueError(
                f"kernel shape {matrix.shape} does not match grid size {grid.size}"
            )
        self.grid = grid
        self.matrix = matrix

    # -- constructors --------------------------------------------------------

    @classmethod
    def rank_one(cls, grid, psi, phi):
        """psi (x) phi: xi -> <xi, phi> psi, kernel M[j,k] = psi_j conj(phi_k)."""
        psi = np.asarray(psi).ravel()
        phi = np.asarray(phi).ravel()
        return cls(grid, np.outer(psi, np.conj(phi)))

    @classmethod
    def identity(cls, grid):
        return cls(grid, np.eye(grid.size) / grid.weight)

    @classmethod
    def diagonal(cls, grid, values):
        """Multiplication operator by the lattice function `values`."""
        v = np.asarray(values).ravel()
        return cls(grid, np.diag(v / grid.weight))

    # -- actions ---------------------------------------------------------------

    def apply(self, psi):
        psi = np.asarray(psi)
        out = self.grid.weight * (self.matrix @ psi.ravel())
        return out.reshape(self.grid.shape)

    def compose(self, other):
        self._check(other)
        return KernelOperator(
            self.grid, self.grid.weight * (self.matrix @ other.matrix)
        )

    def __matmul__(self, other):
        return self.compose(other)

    def adjoint(self):
        return KernelOperator(self.grid, np.conj(self.matrix.T))

    def __add__(self, other):
        self._check(other)
        return KernelOperator(self.grid, self.matrix + other.matrix)

    def __sub__(self, other):
        self._check(other)
        return KernelOperator(self.grid, self.matrix - other.matrix)

    def __mul__(self, scalar):
        return KernelOperator(self.grid, self.matrix * scalar)

    __rmul__ = __mul__

    # -- scalars ----------------------------------------------------------------

    def trace(self):
        return self.grid.weight * np.trace(self.matrix)

    def hs_inner(self, other):
        """<A, B>_HS = tr(B* A) = w^2 sum M_A conj(M_B)."""
        self._check(other)
        return self.grid.weight ** 2 * np.vdot(other.matrix, self.matrix)

    def hs_norm(self):
        return float(self.grid.weight * np.linalg.norm(self.matrix))

    def op_norm(self):
        """Operator norm on the weighted L^2 space."""
        return float(
            self.grid.weight * np.linalg.norm(self.matrix, ord=2)
        )

    def eigh(self):
        """Spectral data for a self-adjoint operator.

        Returns (eigenvalues ascending, eigenvectors) with eigenvectors
        normalized in the grid inner product, as shaped arrays stacked
        along the last axis.
        """
        vals, vecs = np.linalg.eigh(self.matrix)
        vals = vals * self.grid.weight
        vecs = vecs / np.sqrt(self.grid.weight)
        return vals, vecs.reshape(self.grid.shape + (self.grid.size,))

    def _check(self, other):
        if self.grid != other.grid:
            raise ValueError("operators live on different grids")

    def __repr__(self):
        return f"KernelOperator(size={self.grid.size})"


# ---------------------------------------------------------------------------
# named signals
# ---------------------------------------------------------------------------


def _hermite_poly(n, t):
    """Physicists' Hermite polynomial H_n by recurrence."""
    h0 = np.ones_like(t)
    if n == 0:
        return h0
    h1 = 2.0 * t
    for k in range(1, n):
        h0, h1 = h1, 2.0 * t * h1 - 2.0 * k * h0
    return h1


def profile(t, spec):
    """Evaluate a named 1-d profile in the axis variable t."""
    kind = spec["kind"]
    if kind in ("gaussian_log", "gaussian"):
        c = spec.get("center", 0.0)
        w = spec.get("width", 1.0)
        return np.exp(-((t - c) ** 2) / (2.0 * w * w))
    if kind in ("hermite_log", "hermite"):
        n = int(spec.get("order", 0))
        c = spec.get("center", 0.0)
        w = spec.get("width", 1.0)
        s = (t - c) / w
        return _hermite_poly(n, s) * np.exp(-0.5 * s * s)
    if kind == "bump":
        c = spec.get("center", 0.0)
        r = spec.get("radius", 1.0)
        s = (t - c) / r
        out = np.zeros_like(t)
        inside = np.abs(s) < 1.0
        si = np.where(inside, s, 0.0)
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - si[inside] ** 2))
        return out
    if kind == "zero":
        return np.zeros_like(t)
    raise ValueError(f"unknown signal kind {kind!r}")


def make_signal(grid, spec, normalize=True):
    """Build a named signal on a CarrierGrid.

    The profile parameters may be scalars (broadcast to all axes) or lists
    with one entry per axis; the signal is the product of per-axis profiles
    evaluated in the axis variables.
    """
    out = np.ones(grid.shape)
    for i, t in enumerate(grid.vars()):
        axspec = {"kind": spec["kind"]}
        for key in ("center", "width", "order", "radius"):
            if key in spec:
                val = spec[key]
                axspec[key] = val[i] if isinstance(val, (list, tuple)) else val
        shape = [1] * grid.rank
        shape[i] = grid.shape[i]
        out = out * profile(t, axspec).reshape(shape)
    if normalize:
        n = grid.norm(out)
        if n > 0:
            out = out / n
    return out
