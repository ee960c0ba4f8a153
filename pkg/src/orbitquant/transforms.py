"""
transforms.py
---------------------------------------------------------------------------
The two Fourier transforms that tie operators, group functions and orbit
functions together.

Operator side (Fourier-Wigner):

    FW(A)(g)   = tr(A D pi(g)),
    FW*(f)     = int f(g) pi(g^{-1}) D dmu_r(g),

with D the Duflo-Moore operator.  FW is an isometry from Hilbert-Schmidt
operators into L^2(G, dmu_r) whose image consists of functions with
frequency content on one orbit half-line; FW* is its adjoint and inverts
it there.  Two independent evaluation routes are provided: the "kernel"
route (explicit sampled formula, the production path) and the "trace"
route (dense matrix composition, the cross-check path).

Scalar side (orbital Fourier transform):

    FKO(f)(x)    = (|Pf| Delta(x))^{-1/2} * [F(f sqrt(theta))](kappa(x)),
    FKO^{-1}(h)  = theta^{-1/2} * F^{-1}[ sqrt(|Pf| Delta) h  on the orbit ],

where F is the plain Fourier transform in exponential coordinates.  On the
lattice FKO factors exactly through lattice_dft plus the orbit-bin
restriction, so FKO . FKO^{-1} = id and unitarity onto the range hold to
roundoff by construction.

Lattice alignment: the affine fast paths are exact truncated-shift sums
when the dilation steps are multiples of the carrier log step; fractional
shifts fall back to Catmull-Rom row sampling (approximate but available).
"""

from __future__ import annotations

import numpy as np

from orbitquant import interp
from orbitquant.groupfn import lattice_dft, lattice_dft_inv
from orbitquant.hilbert import KernelOperator

__all__ = [
    "fourier_wigner",
    "fourier_wigner_trace",
    "fourier_wigner_adjoint",
    "integrated_rep",
    "fourier_kirillov",
    "fourier_kirillov_inv",
    "fourier_kirillov_direct",
    "fourier_kirillov_inv_group_home",
    "fourier_kirillov_inv_at",
]


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _pf_delta(group, group_points):
    Y = group.kappa(group_points)
    return np.abs(group.pfaffian(Y)) * group.modular(group_points)


def _row_taps(shift):
    """Integer tap bases and Catmull-Rom weights for one fractional shift."""
    fl = np.floor(shift)
    frac = float(shift - fl)
    base = int(fl) - 1
    w = interp.cr_weights(frac)
    return base, w


def _source_band_mask(rep, ggrid, g):
    """Carrier slots whose modulation frequency the parameter lattice resolves.

    Summing pi(g) (or pi(g^{-1}) D) over a lattice of group points turns each
    modulation phase into a Dirichlet comb in the carrier radius, with period
    set by the lattice step of the modulation parameter.  Slots beyond one
    period alias onto in-band slots, so synthesis must not write there: the
    comb condition, expressed in the source-slot radius, is the same formula
    for both directions.
    """
    name = rep.group.name
    if name == "affine":
        from orbitquant.groups import lam

        u = np.log(g[0])
        dv = ggrid.steps[1]
        return rep.r * lam(u) < 1.0 / dv
    if name == "shearlet":
        from orbitquant.groups import lam

        alpha = np.log(g[0])
        b, t = np.meshgrid(rep.b, rep.t, indexing="ij")
        d1, d2 = ggrid.steps[2], ggrid.steps[3]
        ok1 = b * lam(alpha) < 1.0 / d1
        ok2 = lam(alpha / 2.0) * np.abs(np.sqrt(b) * t + 0.5 * g[1] * b) < 0.5 / d2
        return (ok1 & ok2).ravel()
    return np.ones(rep.carrier.size, dtype=bool)


# ---------------------------------------------------------------------------
# Fourier-Wigner: kernel route
# ---------------------------------------------------------------------------


def fourier_wigner(rep, ggrid, A):
    """FW(A) on the group lattice via the explicit kernel formula."""
    if rep.group.name != ggrid.group.name:
        raise ValueError("representation and lattice belong to different groups")
    if rep.group.name == "affine":
        return _fw_affine(rep, ggrid, A)
    if rep.group.name == "shearlet":
        return _fw_shearlet(rep, ggrid, A)
    raise ValueError(f"no kernel route for group {rep.group.name!r}")


def _fw_affine(rep, ggrid, A):
    """FW(A)(a, x) = int K_A(a r, r) e^{-s 2 pi i x r} sqrt(r) dr / r."""
    ax = rep.carrier.axes[0]
    r = rep.r
    n = ax.count
    M = A.matrix
    s = rep.orbit_sign
    u = ggrid.axis_vars[0]
    v = ggrid.axis_vars[1]
    from orbitquant.groups import lam

    out = np.zeros(ggrid.shape, dtype=complex)
    base_d = np.sqrt(r) * ax.step
    for i, ui in enumerate(u):
        shift = ui / ax.step
        tb, w = _row_taps(shift)
        # d(m) = K_A(e^{u} r_m, r_m) sqrt(r_m) dt, rows sampled at m + shift
        d = np.zeros(n, dtype=complex)
        m = np.arange(n)
        for tap in range(4):
            rows = m + tb + tap
            ok = (rows >= 0) & (rows < n)
            if w[tap] != 0.0 and np.any(ok):
                d[ok] += w[tap] * M[rows[ok], m[ok]]
        d *= base_d
        x = v * lam(ui)
        phases = np.exp(-2j * np.pi * s * np.outer(x, r))
        out[i, :] = phases @ d
    return out


def _fw_shearlet(rep, ggrid, A):
    """Slice-wise sampled kernel sum over the flat measure db dt."""
    from orbitquant.groups import lam

    grid = rep.carrier
    nb, nt = grid.shape
    axb, axt = grid.axes
    b = rep.b
    t = rep.t
    rb = np.sqrt(b)
    s = rep.orbit_sign
    K4 = A.matrix.reshape(nb, nt, nb, nt)

    al = ggrid.axis_vars[0]
    si = ggrid.axis_vars[1]
    xi1 = ggrid.axis_vars[2]
    xi2 = ggrid.axis_vars[3]
    out = np.zeros(ggrid.shape, dtype=complex)
    jj, ll = np.meshgrid(np.arange(nb), np.arange(nt), indexing="ij")
    flat_cell = axb.step * axt.step  # db dt = b dlogb dt handled via b factor

    for ia, alpha in enumerate(al):
        lam_h = lam(alpha / 2.0)
        tbb, wb = _row_taps(alpha / axb.step)  # log-b rows shift uniformly
        for isg, sigma in enumerate(si):
            sh = sigma * lam_h
            row_t = (t[None, :] + sh * rb[:, None] - axt.start) / axt.step
            flo = np.floor(row_t)
            frt = row_t - flo
            baset = flo.astype(np.int64) - 1
            wt = interp.cr_weights(frt)  # (4, nb, nt)
            G = np.zeros((nb, nt), dtype=complex)
            for tapb in range(4):
                ib = jj + tbb + tapb
                okb = (ib >= 0) & (ib < nb)
                if wb[tapb] == 0.0:
                    continue
                for tapt in range(4):
                    it = baset + tapt
                    ok = okb & (it >= 0) & (it < nt)
                    if not np.any(ok):
                        continue
                    w = wb[tapb] * wt[tapt]
                    G[ok] += w[ok] * K4[
                        np.clip(ib, 0, nb - 1)[ok],
                        np.clip(it, 0, nt - 1)[ok],
                        jj[ok],
                        ll[ok],
                    ]
            Gw = G * b[:, None] * flat_cell
            x2 = xi2 * lam_h
            x1 = np.add.outer(xi1 * lam(alpha), 0.5 * sigma * lam_h * lam_h * xi2)
            # T[j, q2] = sum_l Gw[j, l] e^{-s 2 pi i sqrt(b_j) t_l x2_q2}
            ph2 = np.exp(
                -2j * np.pi * s * np.einsum("j,l,q->jlq", rb, t, x2)
            )
            T = np.einsum("jl,jlq->jq", Gw, ph2)
            # V[q1, q2] = sum_j T[j, q2] e^{-s 2 pi i b_j x1_{q1 q2}}
            ph1 = np.exp(-2j * np.pi * s * np.einsum("j,pq->jpq", b, x1))
            out[ia, isg] = np.einsum("jq,jpq->pq", T, ph1)
    return out


def fourier_wigner_trace(rep, A, group_points):
    """FW(A) = tr(A D pi(g)) at arbitrary group points (cross-check route)."""
    pts = np.asarray(group_points, dtype=float)
    flat = pts.reshape(-1, pts.shape[-1])
    d = rep.dm_values().ravel()
    MA = A.matrix
    w2 = rep.carrier.weight ** 2
    out = np.empty(flat.shape[0], dtype=complex)
    for k, g in enumerate(flat):
        Mpi = rep.matrix(g).matrix
        # tr(A . D pi(g)) = w^2 sum_{p,q} A[p,q] (D pi)[q,p]
        out[k] = w2 * np.sum(MA * (d[:, None] * Mpi).T)
    return out.reshape(pts.shape[:-1])


# ---------------------------------------------------------------------------
# Fourier-Wigner: adjoint / inverse, and integrated representations
# ---------------------------------------------------------------------------


def fourier_wigner_adjoint(rep, ggrid, f, band_limit=True):
    """FW*(f) = int f(g) pi(g^{-1}) D dmu_r(g) as a KernelOperator.

    Inverts FW on its range; used as the quantization step.  With
    band_limit each lattice row only writes to carrier slots inside its
    resolvable modulation band, which suppresses the Dirichlet-comb
    phantoms the raw adjoint would spray into dead carrier regions.  Pass
    band_limit=False for the exact matrix adjoint of the kernel route.
    """
    if rep.group.name == "affine":
        return _fw_adjoint_affine(rep, ggrid, f, band_limit)
    return _integrate_generic(
        rep, ggrid, np.asarray(f) * ggrid.weight_right, inv_dm=True, band_limit=band_limit
    )


def _fw_adjoint_affine(rep, ggrid, f, band_limit=True):
    ax = rep.carrier.axes[0]
    r = rep.r
    n = ax.count
    s = rep.orbit_sign
    u = ggrid.axis_vars[0]
    v = ggrid.axis_vars[1]
    dv = ggrid.steps[1]
    from orbitquant.groups import lam

    f = np.asarray(f)
    M = np.zeros((n, n), dtype=complex)
    m = np.arange(n)
    sq = np.sqrt(r)
    for i, ui in enumerate(u):
        # pi(g^{-1}) D with g = (e^u, v lam(u)): phase -x e^{-u} r, shift -u
        x_over_a = v * lam(ui) * np.exp(-ui)
        coeff = f[i, :] * ggrid.weight_right[i, :]
        c = np.exp(2j * np.pi * s * np.outer(x_over_a, r)).T @ coeff  # (n,)
        tb, w = _row_taps(-ui / ax.step)
        band = r * lam(ui) < 1.0 / dv if band_limit else np.ones(n, dtype=bool)
        for tap in range(4):
            cols = m + tb + tap
            ok = (cols >= 0) & (cols < n)
            ok[ok] &= band[cols[ok]]
            if w[tap] != 0.0 and np.any(ok):
                np.add.at(M, (m[ok], cols[ok]), w[tap] * c[ok] * sq[cols[ok]])
    return KernelOperator(rep.carrier, M / rep.carrier.weight)


def integrated_rep(rep, ggrid, f, weight="left", band_limit=True):
    """Operator int f(g) pi(g) w(g) dg with left or right Haar weights.

    weight="left" uses theta(-X) dX (left Haar), "right" uses theta(X) dX.
    band_limit applies the same comb mask as the adjoint (on output slots).
    """
    wgt = ggrid.weight_left if weight == "left" else ggrid.weight_right
    coeffs = np.asarray(f) * wgt
    if rep.group.name == "affine":
        return _integrate_affine(rep, ggrid, coeffs, band_limit)
    return _integrate_generic(rep, ggrid, coeffs, inv_dm=False, band_limit=band_limit)


def _integrate_affine(rep, ggrid, coeffs, band_limit=True):
    ax = rep.carrier.axes[0]
    r = rep.r
    n = ax.count
    s = rep.orbit_sign
    u = ggrid.axis_vars[0]
    v = ggrid.axis_vars[1]
    dv = ggrid.steps[1]
    from orbitquant.groups import lam

    M = np.zeros((n, n), dtype=complex)
    m = np.arange(n)
    for i, ui in enumerate(u):
        x = v * lam(ui)
        c = np.exp(-2j * np.pi * s * np.outer(x, r)).T @ coeffs[i, :]  # (n,)
        tb, w = _row_taps(ui / ax.step)
        band = r * lam(ui) < 1.0 / dv if band_limit else np.ones(n, dtype=bool)
        for tap in range(4):
            cols = m + tb + tap
            ok = (cols >= 0) & (cols < n) & band
            if w[tap] != 0.0 and np.any(ok):
                np.add.at(M, (m[ok], cols[ok]), w[tap] * c[ok])
    return KernelOperator(rep.carrier, M / rep.carrier.weight)


def _integrate_generic(rep, ggrid, coeffs, inv_dm, band_limit=True):
    """Dense fallback: sum coeff_i pi(g_i) (or pi(g_i^{-1}) D).  O(M N^2)."""
    size = rep.carrier.size
    if ggrid.size * size * size > 4e9:
        raise ValueError(
            "dense integrated representation would need "
            f"{ggrid.size} matrix accumulations of size {size}^2; "
            "use an aligned affine lattice or a smaller problem"
        )
    coeffs = np.asarray(coeffs).ravel()
    pts = ggrid.points_flat
    d = rep.dm_values().ravel()
    M = np.zeros((size, size), dtype=complex)
    for c, g in zip(coeffs, pts):
        if c == 0.0:
            continue
        mask = _source_band_mask(rep, ggrid, g) if band_limit else None
        if inv_dm:
            Mpi = rep.matrix(rep.group.inv(g)).matrix
            term = Mpi * d[None, :]
            if mask is not None:
                term = term * mask[None, :]  # comb lives in the source slot
        else:
            term = rep.matrix(g).matrix
            if mask is not None:
                term = term * mask[:, None]  # comb lives in the output slot
        M += c * term
    return KernelOperator(rep.carrier, M)


# ---------------------------------------------------------------------------
# orbital Fourier transform
# ---------------------------------------------------------------------------


def fourier_kirillov(ggrid, f, orbit):
    """FKO: group-lattice function -> orbit-lattice function (exact pipeline)."""
    if orbit.group_grid is not ggrid:
        raise ValueError("orbit grid was built from a different group lattice")
    q = np.asarray(f) * np.sqrt(ggrid.theta_plus)
    Q = lattice_dft(q, ggrid.starts, ggrid.steps)
    return orbit.restrict(Q) / np.sqrt(orbit.pf_delta)


def fourier_kirillov_inv(orbit, h):
    """FKO^{-1}: orbit-lattice function -> group-lattice function (exact)."""
    ggrid = orbit.group_grid
    H = orbit.embed(np.asarray(h) * np.sqrt(orbit.pf_delta))
    q = lattice_dft_inv(H, ggrid.starts, ggrid.steps)
    return q / np.sqrt(ggrid.theta_plus)


def fourier_kirillov_direct(ggrid, f, group_points=None, dual_points=None,
                            orbit_sign=+1, chunk=None):
    """FKO(f) evaluated pointwise at arbitrary on-orbit targets.

    Targets may be group points or dual vectors (mapped through
    kappa^{-1}, which raises OrbitMembershipError off the orbit).  This is
    the O(M P) quadrature route; it agrees with the fft pipeline on orbit
    lattice points to roundoff and works anywhere on the orbit.
    """
    group = ggrid.group
    if dual_points is not None:
        pts = group.kappa_inv(np.asarray(dual_points, dtype=float), orbit_sign)
    else:
        pts = np.asarray(group_points, dtype=float)
    flat = pts.reshape(-1, pts.shape[-1])
    q = (np.asarray(f) * np.sqrt(ggrid.theta_plus)).ravel()
    X = ggrid.alg_flat
    Y = group.kappa(flat, orbit_sign)
    pfd = np.abs(group.pfaffian(Y)) * group.modular(flat)
    if chunk is None:
        # keep each phase block near 300 MB regardless of lattice size
        chunk = max(64, int(2e7) // max(1, X.shape[0]))
    out = np.empty(flat.shape[0], dtype=complex)
    for k0 in range(0, flat.shape[0], chunk):
        k1 = min(k0 + chunk, flat.shape[0])
        phases = np.exp(2j * np.pi * (Y[k0:k1] @ X.T))
        out[k0:k1] = phases @ q
    out *= ggrid.cell / np.sqrt(pfd)
    return out.reshape(pts.shape[:-1])


def fourier_kirillov_inv_group_home(ggrid, h, orbit_sign=+1, chunk=2048):
    """FKO^{-1} of a symbol sampled on the group lattice itself.

    Here h holds the values of an orbit function at the lattice points
    exp(X_i) (the "group home" of a symbol), and the orbit integral is a
    right-Haar quadrature over that same lattice:

    FKO^{-1}(h)(x) = theta(log x)^{-1/2}
        int h(y) e^{-2 pi i <kappa(y), log x>} (|Pf| Delta(y))^{-1/2} dmu_r(y).
    """
    group = ggrid.group
    pts = ggrid.points_flat
    Y = group.kappa(pts, orbit_sign)
    pfd = np.abs(group.pfaffian(Y)) * group.modular(pts)
    hw = (np.asarray(h).ravel() / np.sqrt(pfd)) * ggrid.weight_right.ravel()
    X = ggrid.alg_flat
    out = np.empty(ggrid.size, dtype=complex)
    for k0 in range(0, ggrid.size, chunk):
        k1 = min(k0 + chunk, ggrid.size)
        phases = np.exp(-2j * np.pi * (X[k0:k1] @ Y.T))
        out[k0:k1] = phases @ hw
    out /= np.sqrt(ggrid.theta_plus.ravel())
    return out.reshape(ggrid.shape)


def fourier_kirillov_inv_at(orbit, h, alg_points, chunk=2048):
    """FKO^{-1}(h) evaluated at arbitrary algebra points (mu_r quadrature).

    Same sum as the fft pipeline, just at off-lattice targets:
    FKO^{-1}(h)(exp X) = theta(X)^{-1/2} sum_k h_k sqrt(pf delta_k)
                         e^{-2 pi i <Y_k, X>} dual_cell.
    """
    X = np.asarray(alg_points, dtype=float)
    flat = X.reshape(-1, X.shape[-1])
    hw = (np.asarray(h) * np.sqrt(orbit.pf_delta)).ravel() * orbit.dual_cell
    Y = orbit.dual_points.reshape(-1, orbit.dual_points.shape[-1])
    out = np.empty(flat.shape[0], dtype=complex)
    for k0 in range(0, flat.shape[0], chunk):
        k1 = min(k0 + chunk, flat.shape[0])
        phases = np.exp(-2j * np.pi * (flat[k0:k1] @ Y.T))
        out[k0:k1] = phases @ hw
    theta = orbit.group_grid.group.theta(flat)
    out /= np.sqrt(theta)
    return out.reshape(X.shape[:-1])
