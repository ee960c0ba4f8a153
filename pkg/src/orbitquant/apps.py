"""
apps.py
---------------------------------------------------------------------------
Three consumers of the quantization machinery.

Scalogram inversion: |<phi, pi(.)psi>|^2 determines psi up to a global
phase.  The squared coefficients are exactly the operator convolution of
psi psi* against the window distribution phi phi*, so the rank-one state
operator solves the normal equations of that linear map.  A conjugate
gradient pass with relative Tikhonov damping inverts them using only the
lattice-exact convolution routines, and the state is read off the leading
eigenvector.

Best rank-one approximation: among multiples of coefficient functions of
pure states, the closest one to a real symbol f comes from the top
eigenpair of its quantization, with squared distance ||f||^2 - lambda^2.

Intersection of coefficient spaces: transforms against non-collinear
windows share no nonzero function, checked per trial as a least-squares
residual between transforms of independent random states.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .hilbert import KernelOperator, make_signal
from .quant import dequantize, quantize, wigner_distribution
from .qha import QhaContext, conv_fn_op, conv_op_op, wavelet_coeff  # noqa: F401

__all__ = [
    "RetrievalConfig",
    "window_admissibility",
    "integrated_rep",
    "scalogram",
    "phase_retrieve",
    "wigner_approx",
    "rank_one_probe_distance",
    "intersection_test",
]


@dataclass
class RetrievalConfig:
    """Knobs for scalogram inversion.

    regularization: Tikhonov damping of the normal equations, relative to
        the top eigenvalue of the window frame operator.
    reference: vector fixing the global phase of the recovered state;
        defaults to the analysis window.
    fidelity_floor: reconstructions scoring below this against a supplied
        ground truth are flagged with a warning.
    """

    regularization: float = 1e-6
    reference: np.ndarray | None = None
    fidelity_floor: float = 0.99

    def __post_init__(self):
        if not (0.0 <= self.regularization < 1.0):
            raise ValueError("regularization cutoff must lie in [0, 1)")
        if not (0.0 < self.fidelity_floor <= 1.0):
            raise ValueError("fidelity floor must lie in (0, 1]")


def window_admissibility(rep, phi):
    """Numerical admissibility data for an analysis window."""
    phi = np.asarray(phi)
    dm_phi = phi / rep.dm_values()
    n_w = float(rep.carrier.norm(phi))
    n_dm = float(rep.carrier.norm(dm_phi))
    return {
        "norm": n_w,
        "dm_norm": n_dm,
        "admissible": bool(np.isfinite(n_dm) and n_dm > 0.0),
    }


def integrated_rep(ctx, h, measure="left"):
    """int h(x) pi(x) dmu(x) as a kernel operator.

    On the aligned affine lattice pi(x) is a phase times an exact shift,
    so each u-row contributes one modulation sum on a subdiagonal; the
    generic accumulation covers everything else at desk scale.
    """
    if measure == "left":
        hw = np.asarray(h) * ctx.ggrid.weight_left
    elif measure == "right":
        hw = np.asarray(h) * ctx.ggrid.weight_right
    else:
        raise ValueError(f"unknown measure {measure!r}")
    n = ctx.carrier.size
    M = np.zeros((n, n), dtype=complex)
    if ctx._aligned:
        r = ctx.rep.r
        sgn = ctx.rep.orbit_sign
        nu = ctx.ggrid.counts[0]
        xco = ctx.ggrid.points_flat.reshape(ctx.ggrid.shape + (2,))[..., 1]
        w = ctx.carrier.weight
        for i in range(nu):
            m = ctx._shifts[i]
            lo, hi = max(0, -m), min(n, n - m)
            if lo >= hi:
                continue
            ph = np.exp(-2j * np.pi * sgn * np.outer(r[lo:hi], xco[i]))
            idx = np.arange(lo, hi)
            M[idx, idx + m] += (ph @ hw[i]) / w
    else:
        pts = ctx.ggrid.points_flat
        hw_flat = hw.ravel()
        for k in range(pts.shape[0]):
            if hw_flat[k] == 0.0:
                continue
            M += hw_flat[k] * ctx.rep.matrix(pts[k]).matrix
    return KernelOperator(ctx.carrier, M)


def scalogram(ctx, psi, phi):
    """|<phi, pi(.)psi>|^2 on the group lattice."""
    return np.abs(wavelet_coeff(ctx, psi, phi)) ** 2


def phase_retrieve(ctx, scal, phi, cfg=None, truth=None):
    """Recover a state from the squared modulus of its coefficients.

    scal holds |<phi, pi(.)psi>|^2 on the group lattice, as produced by
    scalogram(); phi is the analysis window.  The squared coefficients are
    the operator convolution of psi psi* against phi phi*, so the state
    operator solves the damped normal equations of that map; conjugate
    gradient inverts them and the state is sqrt(lambda) times the leading
    eigenvector.  Returns (state, fidelity) with fidelity None when no
    ground truth is supplied.
    """
    cfg = cfg or RetrievalConfig()
    adm = window_admissibility(ctx.rep, phi)
    if not adm["admissible"]:
        raise ValueError("analysis window fails the admissibility check")
    scal = np.asarray(scal)
    phi = np.asarray(phi)
    win = KernelOperator.rank_one(ctx.carrier, phi, phi)

    def gram(T):
        return conv_fn_op(ctx, conv_op_op(ctx, T, win), win)

    rhs = conv_fn_op(ctx, scal, win)
    b0 = rhs.hs_norm()
    if b0 <= 0.0:
        raise ValueError("reconstruction has zero rank")
    probe = rhs * (1.0 / b0)
    top = 1.0
    for _ in range(6):
        nxt = gram(probe)
        top = nxt.hs_norm()
        probe = nxt * (1.0 / top)
    eps = cfg.regularization * top

    X = KernelOperator(ctx.carrier, np.zeros_like(rhs.matrix))
    R = rhs
    P = rhs
    rs = R.hs_inner(R).real
    for _ in range(5000):
        if np.sqrt(rs) <= 1e-11 * b0:
            break
        GP = gram(P) + P * eps
        alpha = rs / P.hs_inner(GP).real
        X = X + P * alpha
        R = R - GP * alpha
        rs_new = R.hs_inner(R).real
        P = R + P * (rs_new / rs)
        rs = rs_new
    H = (X + X.adjoint()) * 0.5
    vals, vecs = H.eigh()
    lam = vals[-1]
    scale = np.abs(vals).max()
    if scale == 0.0 or lam <= 1e-12 * scale:
        raise ValueError("reconstruction has zero rank")
    psi = np.sqrt(lam) * vecs[..., -1]
    ref = phi if cfg.reference is None else np.asarray(cfg.reference)
    align = ctx.carrier.inner(psi, ref)
    if abs(align) > 0:
        psi = psi * (np.conj(align) / abs(align))
    fidelity = None
    if truth is not None:
        truth = np.asarray(truth)
        fidelity = float(
            abs(ctx.carrier.inner(psi, truth))
            / (ctx.carrier.norm(psi) * ctx.carrier.norm(truth))
        )
        if fidelity < cfg.fidelity_floor:
            warnings.warn(
                f"reconstruction fidelity {fidelity:.6f} below the floor "
                f"{cfg.fidelity_floor}", stacklevel=2,
            )
    return psi, fidelity


def wigner_approx(rep, orbit, f):
    """Closest scaled pure-state coefficient to a real orbit symbol.

    Returns (distance, minimizer, multiplicity): the infimum distance
    sqrt(||f||^2 - lambda^2) over states, the attaining vector sqrt(lambda)
    times the top eigenvector, and how many eigenvalues tie for the top
    within 1e-8.  Without a positive eigenvalue the zero state is closest.
    """
    f = np.asarray(f)
    if np.abs(f.imag).max() > 1e-12 * max(np.abs(f.real).max(), 1e-300):
        raise ValueError("symbol must be real for a self-adjoint quantization")
    Q = quantize(rep, orbit, f.real)
    H = (Q + Q.adjoint()) * 0.5
    vals, vecs = H.eigh()
    lam = float(vals[-1])
    norm_f = float(orbit.norm(f.real))
    if lam <= 0.0:
        return norm_f, np.zeros(rep.carrier.shape, dtype=complex), 0
    distance = float(np.sqrt(max(norm_f ** 2 - lam ** 2, 0.0)))
    multiplicity = int(np.sum(vals >= lam - 1e-8 * max(1.0, abs(lam))))
    minimizer = np.sqrt(lam) * vecs[..., -1]
    return distance, minimizer, multiplicity


def rank_one_probe_distance(rep, orbit, f, phi):
    """Distance from f to the best multiple of the coefficient of phi."""
    f = np.asarray(f)
    phi = np.asarray(phi)
    n = rep.carrier.norm(phi)
    if n == 0.0:
        return float(orbit.norm(f))
    phi = phi / n
    g = dequantize(rep, orbit, KernelOperator.rank_one(rep.carrier, phi, phi))
    gg = float(orbit.inner(g, g).real)
    if gg == 0.0:
        return float(orbit.norm(f))
    lam = max(float(orbit.inner(g, f).real) / gg, 0.0)
    return float(orbit.norm(f - lam * g))


def intersection_test(ctx, phi1, phi2, trials, seed=0, residual_floor=0.05):
    """Least-squares check that coefficient spaces of two windows meet
    only at zero unless the windows are collinear.

    Per trial, one random state is transformed against both windows and
    the report records the normalized residual min over c of
    ||W_1 - c W_2|| along with the recovered c.  The orthogonality
    relation makes the residual the square root of the collinearity
    defect 1 - |<phi1, phi2>|^2 / (||phi1|| ||phi2||)^2, so PASS means a
    small residual occurred only with a correspondingly small defect.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    phi1 = np.asarray(phi1)
    phi2 = np.asarray(phi2)
    carrier = ctx.carrier
    n1 = carrier.norm(phi1)
    n2 = carrier.norm(phi2)
    overlap = abs(carrier.inner(phi1, phi2)) / (n1 * n2)
    defect = float(max(1.0 - overlap ** 2, 0.0))
    rng = np.random.default_rng(seed)
    residuals = []
    scalars = []
    for _ in range(trials):
        state = _random_state(carrier, rng)
        W1 = wigner_distribution(ctx.rep, ctx.ggrid, state, phi1)
        W2 = wigner_distribution(ctx.rep, ctx.ggrid, state, phi2)
        n22 = ctx.ggrid.inner_r(W2, W2).real
        c = ctx.ggrid.inner_r(W1, W2) / n22 if n22 > 0 else 0.0
        res = ctx.ggrid.norm_r(W1 - c * W2) / ctx.ggrid.norm_r(W1)
        residuals.append(float(res))
        scalars.append(complex(c))
    near = min(residuals) <= residual_floor
    return {
        "defect": defect,
        "residuals": residuals,
        "scalars": scalars,
        "trials": trials,
        "pass": bool((not near) or defect <= residual_floor ** 2),
    }


def _random_state(carrier, rng):
    """Smooth random state: complex mix of low hermite profiles."""
    out = np.zeros(carrier.shape, dtype=complex)
    for order in range(6):
        coef = rng.standard_normal() + 1j * rng.standard_normal()
        out += coef * make_signal(
            carrier,
            {"kind": "hermite", "order": order, "width": 0.5, "center": 0.1},
            normalize=True,
        )
    return out / carrier.norm(out)
