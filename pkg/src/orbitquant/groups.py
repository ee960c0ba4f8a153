"""
groups.py
---------------------------------------------------------------------------
Exponential Lie groups used throughout the package: the affine group of the
line, the shearlet group, and the Heisenberg group (the last one only as a
non-quantizable control case).

Every group is a small stateless object exposing vectorized maps between
three coordinate systems:

  * group coordinates   -- global charts, e.g. (a, x) with a > 0 for affine;
  * algebra coordinates -- coefficients in the fixed basis used by exp/log;
  * dual coordinates    -- coefficients in the dual basis, used by the
                           coadjoint action and the moment map kappa.

All maps take arrays of shape (..., dim) and return the same shape, so the
rest of the code can push whole lattices through them at once.

Conventions that the transforms downstream rely on:

  * exp/log are global diffeomorphisms (these groups are exponential);
  * theta(X) = |det d(exp)_X| is the density relating Lebesgue measure on
    the algebra to *right* Haar measure: dmu_r(exp X) = theta(X) dX;
  * modular(g) = Delta(g) with d mu_l = Delta * d mu_r, normalized so that
    theta(-X)/theta(X) = Delta(exp X);
  * coadjoint(g) acts on dual coordinates as K(g) = (Ad_{g^{-1}})^T;
  * kappa(g) = K(g) F for the fixed base functional F of the open orbit,
    reported in dual coordinates; kappa_inv inverts it on the orbit.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "AffineGroup",
    "ShearletGroup",
    "HeisenbergGroup",
    "lam",
    "theta_from_brackets",
    "OrbitMembershipError",
]


class OrbitMembershipError(ValueError):
    """Raised when a dual vector does not lie on the requested open orbit."""


# ---------------------------------------------------------------------------
# scalar helpers
# ---------------------------------------------------------------------------

_LAM_SWITCH = 1e-3


def lam(u):
    """lam(u) = (e^u - 1)/u, extended smoothly through u = 0.

    Near zero the quotient loses digits, so below |u| = 1e-3 we switch to
    the Taylor polynomial sum_{k=0}^{8} u^k/(k+1)!.  At the switch point the
    two branches agree to ~1e-19, far below double precision.
    """
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < _LAM_SWITCH
    # Taylor branch: 1 + u/2 + u^2/6 + ... + u^8/9!
    us = np.where(small, u, 0.0)
    acc = np.zeros_like(us)
    for k in range(8, 0, -1):
        acc = (acc + 1.0 / _factorial(k + 1)) * us
    taylor = acc + 1.0
    big = np.where(small, 1.0, u)  # avoid 0/0 in the masked-out branch
    direct = np.expm1(big) / big
    return np.where(small, taylor, direct)


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _phi_matrix(M):
    """Phi(M) = sum_{k>=0} M^k/(k+1)!  (matrix version of lam).

    Evaluated by scaling and doubling: Phi(2M) = Phi(M) (e^M + I)/2.
    Works for any square matrix, including nilpotent ones.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    norm = np.linalg.norm(M, ord=np.inf)
    squarings = 0
    while norm > 0.5:
        M = M / 2.0
        norm /= 2.0
        squarings += 1
    # Taylor series converges fast once ||M|| <= 1/2
    term = np.eye(n)
    phi = np.eye(n)
    expm = np.eye(n)
    for k in range(1, 24):
        term = term @ M / k
        expm = expm + term
        phi = phi + term / (k + 1)
    for _ in range(squarings):
        phi = phi @ (expm + np.eye(n)) / 2.0
        expm = expm @ expm
    return phi


def theta_from_brackets(group, X):
    """Independent route to theta: |det Phi(ad_X)| from structure constants.

    Used by the tests as an oracle against the closed forms below; also the
    definition used for groups where no closed form is coded.
    """
    X = np.asarray(X, dtype=float)
    d = group.dim
    ad = np.zeros((d, d))
    basis = np.eye(d)
    for j in range(d):
        ad[:, j] = sum(X[i] * group.bracket(basis[i], basis[j]) for i in range(d))
    return abs(np.linalg.det(_phi_matrix(ad)))


# ---------------------------------------------------------------------------
# affine group of the line
# ---------------------------------------------------------------------------


class AffineGroup:
    """ax+b group: elements (a, x) with a > 0, acting by t -> a t + x.

    Multiplication (a, x)(b, y) = (ab, ay + x).  The Lie algebra basis is
    U (dilation) and V (translation) with [U, V] = V.  Right Haar measure
    is da dx / a and the modular function is Delta(a, x) = 1/a.

    Dual coordinates are (Y_u, Y_v) against the basis (U*, V*).  The two
    open coadjoint orbits are the half planes {Y_v > 0} and {Y_v < 0};
    ``orbit_sign`` in the maps below selects which one.
    """

    name = "affine"
    dim = 2
    quantizable = True
    orbit_axis = 1  # dual coordinate whose sign labels the open orbits

    # -- group operations ---------------------------------------------------

    def mul(self, g, h):
        g = np.asarray(g, dtype=float)
        h = np.asarray(h, dtype=float)
        a, x = g[..., 0], g[..., 1]
        b, y = h[..., 0], h[..., 1]
        return np.stack([a * b, a * y + x], axis=-1)

    def inv(self, g):
        g = np.asarray(g, dtype=float)
        a, x = g[..., 0], g[..., 1]
        return np.stack([1.0 / a, -x / a], axis=-1)

    def identity(self):
        return np.array([1.0, 0.0])

    def exp(self, X):
        X = np.asarray(X, dtype=float)
        u, v = X[..., 0], X[..., 1]
        return np.stack([np.exp(u), v * lam(u)], axis=-1)

    def log(self, g):
        g = np.asarray(g, dtype=float)
        a, x = g[..., 0], g[..., 1]
        u = np.log(a)
        return np.stack([u, x / lam(u)], axis=-1)

    def bracket(self, X, Y):
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        # [uU + vV, u'U + v'V] = (u v' - u' v) V
        w = X[..., 0] * Y[..., 1] - Y[..., 0] * X[..., 1]
        return np.stack([np.zeros_like(w), w], axis=-1)

    # -- densities ----------------------------------------------------------

    def theta(self, X):
        """Jacobian density of exp: dmu_r(exp X) = theta(X) dX.

        For the affine algebra theta(uU + vV) = lam(u); the eigenvalues of
        ad_X are {0, u} and theta = lam(0) lam(u).
        """
        X = np.asarray(X, dtype=float)
        return lam(X[..., 0])

    def modular(self, g):
        g = np.asarray(g, dtype=float)
        return 1.0 / g[..., 0]

    def haar_right_density(self, g):
        """Density of dmu_r against Lebesgue da dx: here 1/a."""
        g = np.asarray(g, dtype=float)
        return 1.0 / g[..., 0]

    # -- adjoint / coadjoint ------------------------------------------------

    def adjoint(self, g, X):
        """Ad_g X in algebra coordinates: (u, v) -> (u, a v - x u)."""
        g = np.asarray(g, dtype=float)
        X = np.asarray(X, dtype=float)
        a, x = g[..., 0], g[..., 1]
        u, v = X[..., 0], X[..., 1]
        return np.stack([u, a * v - x * u], axis=-1)

    def coadjoint(self, g, Y):
        """K(g) Y = Y o Ad_{g^{-1}} in dual coordinates.

        (Y_u, Y_v) -> (Y_u + (x/a) Y_v, Y_v / a).
        """
        g = np.asarray(g, dtype=float)
        Y = np.asarray(Y, dtype=float)
        a, x = g[..., 0], g[..., 1]
        yu, yv = Y[..., 0], Y[..., 1]
        return np.stack([yu + (x / a) * yv, yv / a], axis=-1)

    # -- moment map for the open orbits --------------------------------------

    def base_functional(self, orbit_sign=+1):
        """The functional sign * V* whose coadjoint orbit is the open orbit."""
        return np.array([0.0, float(orbit_sign)])

    def kappa(self, g, orbit_sign=+1):
        """kappa(g) = K(g^{-1})(sign V*) = sign (a V* - x U*), dual coords.

        Equivalently <kappa(a, x), (u, v)> = sign (a v - x u) = <F, Ad_g X>.
        """
        g = np.asarray(g, dtype=float)
        a, x = g[..., 0], g[..., 1]
        s = float(orbit_sign)
        return np.stack([-s * x, s * a], axis=-1)

    def kappa_inv(self, Y, orbit_sign=+1):
        """Group point with kappa(g) = Y; defined for sign * Y_v > 0."""
        Y = np.asarray(Y, dtype=float)
        s = float(orbit_sign)
        yv = s * Y[..., 1]
        if np.any(yv <= 0):
            raise OrbitMembershipError(
                "dual vector lies off the open orbit (V* coefficient sign)"
            )
        return np.stack([yv, -s * Y[..., 0]], axis=-1)

    def on_orbit(self, Y, orbit_sign=+1):
        Y = np.asarray(Y, dtype=float)
        return float(orbit_sign) * Y[..., 1] > 0

    def pfaffian(self, Y):
        """Pfaffian of the orbit symplectic form at the base point through Y.

        On a 2-d orbit the matrix B_F = [<F, [Xi, Xj]>] for the jump basis
        is 2x2 antisymmetric; Pf = B_F[0, 1].  For F = s V* this is s.
        """
        Y = np.asarray(Y, dtype=float)
        return np.where(Y[..., 1] >= 0, 1.0, -1.0)


# ---------------------------------------------------------------------------
# shearlet group
# ---------------------------------------------------------------------------


class ShearletGroup:
    """Shearlet group in dimension 2: (a, s, x1, x2) with a > 0.

    Realized as upper triangular matrices

        [ a   sqrt(a) s   x1 ]
        [ 0   sqrt(a)     x2 ]
        [ 0   0           1  ]

    so multiplication reads

        (a,s,x1,x2)(b,t,y1,y2) = (ab, s + sqrt(a) t,
                                  x1 + a y1 + sqrt(a) s y2, x2 + sqrt(a) y2).

    Algebra basis (A, B, C, D) with brackets [A,B] = B/2, [A,C] = C,
    [A,D] = D/2, [B,D] = C, and [B,C] = [C,D] = 0.  Right Haar measure is
    da ds dx1 dx2 / a and Delta(g) = 1/a^2.
    """

    name = "shearlet"
    dim = 4
    quantizable = True
    orbit_axis = 2  # C* coefficient labels the open orbits

    _STRUCT = {
        (0, 1): (1, 0.5),   # [A,B] = B/2
        (0, 2): (2, 1.0),   # [A,C] = C
        (0, 3): (3, 0.5),   # [A,D] = D/2
        (1, 3): (2, 1.0),   # [B,D] = C
    }

    # -- group operations ---------------------------------------------------

    def mul(self, g, h):
        g = np.asarray(g, dtype=float)
        h = np.asarray(h, dtype=float)
        a, s, x1, x2 = (g[..., i] for i in range(4))
        b, t, y1, y2 = (h[..., i] for i in range(4))
        ra = np.sqrt(a)
        return np.stack(
            [a * b, s + ra * t, x1 + a * y1 + ra * s * y2, x2 + ra * y2], axis=-1
        )

    def inv(self, g):
        g = np.asarray(g, dtype=float)
        a, s, x1, x2 = (g[..., i] for i in range(4))
        ra = np.sqrt(a)
        return np.stack(
            [1.0 / a, -s / ra, -(x1 - s * x2) / a, -x2 / ra], axis=-1
        )

    def identity(self):
        return np.array([1.0, 0.0, 0.0, 0.0])

    def exp(self, X):
        X = np.asarray(X, dtype=float)
        al, si, x1, x2 = (X[..., i] for i in range(4))
        lh = lam(al / 2.0)
        return np.stack(
            [
                np.exp(al),
                si * lh,
                x1 * lam(al) + 0.5 * si * x2 * lh * lh,
                x2 * lh,
            ],
            axis=-1,
        )

    def log(self, g):
        g = np.asarray(g, dtype=float)
        a, s, x1, x2 = (g[..., i] for i in range(4))
        al = np.log(a)
        lh = lam(al / 2.0)
        si = s / lh
        xi2 = x2 / lh
        xi1 = (x1 - 0.5 * s * x2) / lam(al)
        return np.stack([al, si, xi1, xi2], axis=-1)

    def bracket(self, X, Y):
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        out = np.zeros(np.broadcast(X, Y).shape)
        for (i, j), (k, c) in self._STRUCT.items():
            out[..., k] += c * (X[..., i] * Y[..., j] - X[..., j] * Y[..., i])
        return out

    # -- densities ----------------------------------------------------------

    def theta(self, X):
        """theta = lam(alpha) lam(alpha/2)^2; ad_X eigenvalues 0, a/2, a, a/2."""
        X = np.asarray(X, dtype=float)
        al = X[..., 0]
        lh = lam(al / 2.0)
        return lam(al) * lh * lh

    def modular(self, g):
        g = np.asarray(g, dtype=float)
        return g[..., 0] ** -2

    def haar_right_density(self, g):
        g = np.asarray(g, dtype=float)
        return 1.0 / g[..., 0]

    # -- adjoint / coadjoint ------------------------------------------------

    def adjoint(self, g, X):
        g = np.asarray(g, dtype=float)
        X = np.asarray(X, dtype=float)
        a, s, x1, x2 = (g[..., i] for i in range(4))
        al, si, xi1, xi2 = (X[..., i] for i in range(4))
        ra = np.sqrt(a)
        return np.stack(
            [
                al,
                -0.5 * s * al + ra * si,
                (0.5 * s * x2 - x1) * al - ra * x2 * si + a * xi1 + ra * s * xi2,
                -0.5 * x2 * al + ra * xi2,
            ],
            axis=-1,
        )

    def coadjoint(self, g, Y):
        """K(g) = (Ad_{g^{-1}})^T acting on dual coordinates (A*,B*,C*,D*)."""
        g = np.asarray(g, dtype=float)
        Y = np.asarray(Y, dtype=float)
        a, s, x1, x2 = (g[..., i] for i in range(4))
        ya, yb, yc, yd = (Y[..., i] for i in range(4))
        ra = np.sqrt(a)
        return np.stack(
            [
                ya + 0.5 * (s / ra) * yb + ((x1 - 0.5 * s * x2) / a) * yc
                + 0.5 * (x2 / ra) * yd,
                (yb + (x2 / ra) * yc) / ra,
                yc / a,
                (yd - (s / ra) * yc) / ra,
            ],
            axis=-1,
        )

    # -- moment map ----------------------------------------------------------

    def base_functional(self, orbit_sign=+1):
        F = np.zeros(4)
        F[2] = float(orbit_sign)
        return F

    def kappa(self, g, orbit_sign=+1):
        """kappa(g) = K(g^{-1})(sign C*): the moment map of the open orbit.

        Closed form sign * ((s x2/2 - x1) A* - sqrt(a) x2 B* + a C*
        + sqrt(a) s D*), so that <kappa(g), X> = <F, Ad_g X>.
        """
        g = np.asarray(g, dtype=float)
        a, s, x1, x2 = (g[..., i] for i in range(4))
        ra = np.sqrt(a)
        s_ = float(orbit_sign)
        return np.stack(
            [
                s_ * (0.5 * s * x2 - x1),
                -s_ * ra * x2,
                s_ * a,
                s_ * ra * s,
            ],
            axis=-1,
        )

    def kappa_inv(self, Y, orbit_sign=+1):
        """Invert kappa on the open orbit {sign * Y_C > 0}."""
        Y = np.asarray(Y, dtype=float)
        s_ = float(orbit_sign)
        yc = s_ * Y[..., 2]
        if np.any(yc <= 0):
            raise OrbitMembershipError(
                "dual vector lies off the open orbit (C* coefficient sign)"
            )
        a = yc
        ra = np.sqrt(a)
        s = s_ * Y[..., 3] / ra
        x2 = -s_ * Y[..., 1] / ra
        x1 = 0.5 * s * x2 - s_ * Y[..., 0]
        return np.stack([a, s, x1, x2], axis=-1)

    def on_orbit(self, Y, orbit_sign=+1):
        Y = np.asarray(Y, dtype=float)
        return float(orbit_sign) * Y[..., 2] > 0

    def pfaffian(self, Y):
        """|Pf| of the orbit form; for F = +/- C* both give |Pf| = 1.

        The 4x4 antisymmetric matrix B_F with entries <F, [Xi, Xj]> at the
        base point has Pf = b01 b23 - b02 b13 + b03 b12 = -sign(Y_C); the
        transforms only consume |Pf| so we return 1 with the sign exposed
        for the record.
        """
        Y = np.asarray(Y, dtype=float)
        return np.where(Y[..., 2] >= 0, -1.0, 1.0)


# ---------------------------------------------------------------------------
# Heisenberg group (control case: nilpotent, flat densities, no open orbit)
# ---------------------------------------------------------------------------


class HeisenbergGroup:
    """Polarized Heisenberg group: (x, y, z)(x', y', z') = (x+x', y+y', z+z'+xy').

    Unimodular and nilpotent: theta = 1, Delta = 1.  Its generic coadjoint
    orbits are 2-dimensional planes, never open in the 3-dimensional dual,
    so the orbit-based quantization maps refuse this group; it exists to
    exercise exactly that refusal plus the generic group-level identities.
    """

    name = "heisenberg"
    dim = 3
    quantizable = False
    orbit_axis = None

    def mul(self, g, h):
        g = np.asarray(g, dtype=float)
        h = np.asarray(h, dtype=float)
        x, y, z = g[..., 0], g[..., 1], g[..., 2]
        xp, yp, zp = h[..., 0], h[..., 1], h[..., 2]
        return np.stack([x + xp, y + yp, z + zp + x * yp], axis=-1)

    def inv(self, g):
        g = np.asarray(g, dtype=float)
        x, y, z = g[..., 0], g[..., 1], g[..., 2]
        return np.stack([-x, -y, -z + x * y], axis=-1)

    def identity(self):
        return np.zeros(3)

    def exp(self, X):
        X = np.asarray(X, dtype=float)
        x, y, z = X[..., 0], X[..., 1], X[..., 2]
        return np.stack([x, y, z + 0.5 * x * y], axis=-1)

    def log(self, g):
        g = np.asarray(g, dtype=float)
        x, y, z = g[..., 0], g[..., 1], g[..., 2]
        return np.stack([x, y, z - 0.5 * x * y], axis=-1)

    def bracket(self, X, Y):
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        w = X[..., 0] * Y[..., 1] - Y[..., 0] * X[..., 1]
        zero = np.zeros_like(w)
        return np.stack([zero, zero, w], axis=-1)

    def theta(self, X):
        X = np.asarray(X, dtype=float)
        return np.ones(X.shape[:-1])

    def modular(self, g):
        g = np.asarray(g, dtype=float)
        return np.ones(g.shape[:-1])

    def haar_right_density(self, g):
        g = np.asarray(g, dtype=float)
        return np.ones(g.shape[:-1])

    def adjoint(self, g, X):
        g = np.asarray(g, dtype=float)
        X = np.asarray(X, dtype=float)
        x, y = g[..., 0], g[..., 1]
        p, q, r = X[..., 0], X[..., 1], X[..., 2]
        return np.stack([p, q, x * q - y * p + r], axis=-1)

    def coadjoint(self, g, Y):
        g = np.asarray(g, dtype=float)
        Y = np.asarray(Y, dtype=float)
        x, y = g[..., 0], g[..., 1]
        a, b, c = Y[..., 0], Y[..., 1], Y[..., 2]
        return np.stack([a + y * c, b - x * c, c], axis=-1)

    def base_functional(self, orbit_sign=+1):
        F = np.zeros(3)
        F[2] = float(orbit_sign)
        return F

    def kappa(self, g, orbit_sign=+1):
        """Moment map K(g^{-1})(sign Z*) = sign (-y X* + x Y* + Z*)."""
        g = np.asarray(g, dtype=float)
        s = float(orbit_sign)
        x, y = g[..., 0], g[..., 1]
        return np.stack([-s * y, s * x, s * np.ones_like(x)], axis=-1)

    def kappa_inv(self, Y, orbit_sign=+1):
        raise OrbitMembershipError(
            "Heisenberg coadjoint orbits are 2-dimensional, never open; "
            "kappa is not invertible"
        )

    def on_orbit(self, Y, orbit_sign=+1):
        Y = np.asarray(Y, dtype=float)
        return np.zeros(Y.shape[:-1], dtype=bool)

    def pfaffian(self, Y):
        raise OrbitMembershipError(
            "no open orbit: the orbit form is degenerate on the full dual"
        )
