"""
Group-lattice checks: the exact FFT-based lattice Fourier transform (against
a direct O(N^2) sum, roundtrip, Parseval), Haar quadrature invariances,
involution/convolution/conjugation laws, and orbit-grid bookkeeping.
"""

from __future__ import annotations

import numpy as np
from numpy.testing import assert_allclose

from orbitquant.groups import AffineGroup, ShearletGroup
from orbitquant.groupfn import (
    GroupGrid,
    OrbitGrid,
    conjugate_by,
    convolve,
    dual_axis,
    involution,
    lattice_dft,
    lattice_dft_inv,
    make_group_function,
)

AFF = AffineGroup()
SHE = ShearletGroup()


# ---------------------------------------------------------------------------
# lattice Fourier transform
# ---------------------------------------------------------------------------


def test_lattice_dft_matches_direct_sum():
    rng = np.random.default_rng(0)
    n0, n1 = 8, 6
    starts, steps = (-1.0, -0.75), (0.25, 0.25)
    h = rng.normal(size=(n0, n1)) + 1j * rng.normal(size=(n0, n1))
    got = lattice_dft(h, starts, steps)
    x0 = starts[0] + steps[0] * np.arange(n0)
    x1 = starts[1] + steps[1] * np.arange(n1)
    f0 = dual_axis(n0, steps[0])
    f1 = dual_axis(n1, steps[1])
    want = np.zeros((n0, n1), dtype=complex)
    for a in range(n0):
        for b in range(n1):
            phase = np.exp(2j * np.pi * (np.add.outer(x0 * f0[a], x1 * f1[b])))
            want[a, b] = np.sum(h * phase) * steps[0] * steps[1]
    assert_allclose(got, want, rtol=1e-12, atol=1e-12)


def test_lattice_dft_roundtrip_and_parseval():
    rng = np.random.default_rng(1)
    h = rng.normal(size=(32, 16)) + 1j * rng.normal(size=(32, 16))
    starts, steps = (-2.0, -1.0), (0.125, 0.125)
    H = lattice_dft(h, starts, steps)
    assert_allclose(lattice_dft_inv(H, starts, steps), h, rtol=1e-13, atol=1e-13)
    cell = steps[0] * steps[1]
    dual_cell = 1.0 / (32 * steps[0]) / (16 * steps[1])
    assert_allclose(
        np.sum(np.abs(h) ** 2) * cell,
        np.sum(np.abs(H) ** 2) * dual_cell,
        rtol=1e-13,
    )


# ---------------------------------------------------------------------------
# group lattice quadrature
# ---------------------------------------------------------------------------


def _affine_grid(n=64, half=6.0):
    return GroupGrid.centered(AFF, (n, n), (half, half))


def test_haar_weights_hand_value():
    grid = GroupGrid(AFF, (4, 4), (0.5, 0.5))
    # weight at X = (u, v) is theta(u) * cell, cell = 0.25
    from orbitquant.groups import lam

    u = grid.alg[..., 0]
    assert_allclose(grid.weight_right, lam(u) * 0.25, rtol=1e-12)
    assert_allclose(grid.weight_right[2, 0], 0.25)  # u = 0 row: lam(0) = 1


def test_right_invariance_of_haar_quadrature():
    # int f(y z) dmu_r(y) = int f dmu_r for tail-dead smooth f
    grid = _affine_grid()
    f = make_group_function(grid, {"kind": "gaussian", "width": 0.8})
    total = grid.integrate_r(f)
    for z in ([1.3, 0.4], [0.7, -0.2]):
        yz = AFF.mul(grid.points, np.asarray(z))
        shifted = grid.sample(f, AFF.log(yz))
        assert_allclose(grid.integrate_r(shifted), total, rtol=2e-4)


def test_involution_is_exact_bijection():
    rng = np.random.default_rng(2)
    grid = GroupGrid.centered(AFF, (16, 16), (3.0, 3.0))
    f = rng.normal(size=grid.shape)
    assert_allclose(involution(grid, involution(grid, f)), f)


def test_involution_swaps_left_and_right_norms():
    grid = _affine_grid()
    f = make_group_function(grid, {"kind": "gaussian", "width": 0.7})
    fv = involution(grid, f)
    assert_allclose(grid.norm_l(fv), grid.norm_r(f), rtol=1e-12)


def test_involution_matches_inverse_sampling():
    # away from the wrap plane, f-check at exp(X) equals f at exp(-X)
    grid = GroupGrid.centered(AFF, (16, 16), (3.0, 3.0))
    f = np.arange(256, dtype=float).reshape(16, 16)
    fv = involution(grid, f)
    assert_allclose(fv[3, 5], f[13, 11])
    assert_allclose(fv[0, 0], f[0, 0])  # wrap plane maps to itself


# ---------------------------------------------------------------------------
# convolution and conjugation
# ---------------------------------------------------------------------------


def test_convolution_antihomomorphism_under_involution():
    # (f * g)-check = g-check * f-check, up to interpolation error
    grid = GroupGrid.centered(AFF, (32, 32), (4.0, 4.0))
    f = make_group_function(grid, {"kind": "gaussian", "width": 0.5, "center": [0.2, 0.0]})
    g = make_group_function(grid, {"kind": "gaussian", "width": 0.6, "center": [-0.1, 0.3]})
    lhs = involution(grid, convolve(grid, f, g))
    rhs = convolve(grid, involution(grid, g), involution(grid, f))
    scale = np.max(np.abs(lhs))
    # both sides carry one interpolation pass; agreement is limited by the
    # cubic sampling error at this step (8/32 per axis)
    assert np.max(np.abs(lhs - rhs)) < 6e-3 * scale


def test_convolution_with_mollifier_converges_to_identity():
    # convolving with a normalized bump of width eps deviates by O(eps^2)
    grid = GroupGrid.centered(AFF, (64, 64), (4.0, 4.0))
    f = make_group_function(grid, {"kind": "gaussian", "width": 0.6})
    devs = []
    for width in (0.4, 0.2):
        eps = make_group_function(grid, {"kind": "gaussian", "width": width})
        eps = eps / grid.integrate_r(eps)
        out = convolve(grid, eps, f)
        devs.append(np.max(np.abs(out - f)) / np.max(np.abs(f)))
    assert devs[1] < 0.15
    assert devs[1] < devs[0] / 2.5


def test_conjugation_composes_contravariantly():
    grid = GroupGrid.centered(AFF, (64, 64), (4.0, 4.0))
    f = make_group_function(grid, {"kind": "gaussian", "width": 0.6})
    x = np.array([1.2, 0.3])
    z = np.array([0.8, -0.4])
    lhs = conjugate_by(grid, conjugate_by(grid, f, z), x)
    rhs = conjugate_by(grid, f, grid.group.mul(x, z))
    # lhs stacks two cubic resamplings, rhs one
    assert np.max(np.abs(lhs - rhs)) < 2e-3


def test_conjugation_by_identity_is_identity():
    grid = GroupGrid.centered(AFF, (16, 16), (3.0, 3.0))
    rng = np.random.default_rng(3)
    f = rng.normal(size=grid.shape)
    assert_allclose(conjugate_by(grid, f, AFF.identity()), f, atol=1e-12)


# ---------------------------------------------------------------------------
# orbit grids
# ---------------------------------------------------------------------------


def test_orbit_grid_shape_and_weights():
    grid = GroupGrid.centered(AFF, (128, 128), (8.0, 8.0))
    orb = OrbitGrid(grid, +1)
    assert orb.shape == (128, 63)
    # every kept dual point lies on the positive orbit
    assert np.all(AFF.on_orbit(orb.dual_points, +1))
    # affine weights: Delta(kappa^{-1} Y) = 1/a = 1/Y_v times the dual cell
    a = orb.group_points[..., 0]
    assert_allclose(orb.weights, orb.dual_cell / a, rtol=1e-12)
    assert np.all(orb.weights > 0)


def test_orbit_grid_negative_side_mirrors_positive():
    grid = GroupGrid.centered(AFF, (64, 64), (6.0, 6.0))
    pos = OrbitGrid(grid, +1)
    neg = OrbitGrid(grid, -1)
    assert pos.shape == neg.shape
    assert_allclose(pos.freq_axes[1], -neg.freq_axes[1][::-1])


def test_orbit_embed_restrict_roundtrip():
    grid = GroupGrid.centered(AFF, (32, 32), (4.0, 4.0))
    orb = OrbitGrid(grid, +1)
    rng = np.random.default_rng(4)
    h = rng.normal(size=orb.shape) + 1j * rng.normal(size=orb.shape)
    assert_allclose(orb.restrict(orb.embed(h)), h)
    # embed puts zeros off the orbit: total energy matches
    assert_allclose(np.sum(np.abs(orb.embed(h)) ** 2), np.sum(np.abs(h) ** 2))


def test_orbit_grid_group_points_satisfy_kappa():
    grid = GroupGrid.centered(SHE, (8, 8, 8, 8), (2.0, 2.0, 2.0, 2.0))
    orb = OrbitGrid(grid, +1)
    back = SHE.kappa(orb.group_points, +1)
    assert_allclose(back, orb.dual_points, rtol=1e-12, atol=1e-12)


def test_orbit_grid_rejects_heisenberg():
    from orbitquant.groups import HeisenbergGroup

    grid = GroupGrid.centered(HeisenbergGroup(), (8, 8, 8), (2.0, 2.0, 2.0))
    try:
        OrbitGrid(grid, +1)
    except ValueError:
        pass
    else:
        raise AssertionError("expected a refusal for a group with no open orbit")
