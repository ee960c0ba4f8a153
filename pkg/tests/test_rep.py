"""
Representation checks.  On lattice-aligned dilations the action matrices are
exact truncated shifts, so the group law, unitarity on tail-dead vectors,
and pi(g^{-1}) = pi(g)* are tested at roundoff; fractional dilations get
interpolation-tier tolerances.
"""

from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from orbitquant.groups import AffineGroup, HeisenbergGroup, ShearletGroup
from orbitquant.hilbert import Axis, CarrierGrid, make_signal
from orbitquant.rep import Representation

AFF = AffineGroup()
SHE = ShearletGroup()


def affine_setup(n=128, half=4.0, sign=+1):
    grid = CarrierGrid([Axis.centered("log", n, half)])
    return grid, Representation(AFF, grid, sign)


def shearlet_setup(nb=32, nt=32, sign=+1):
    grid = CarrierGrid([Axis.centered("log", nb, 4.0), Axis.centered("linear", nt, 4.0)])
    return grid, Representation(SHE, grid, sign)


def test_rejects_group_without_open_orbit():
    grid = CarrierGrid([Axis.centered("log", 16, 2.0)])
    with pytest.raises(ValueError):
        Representation(HeisenbergGroup(), grid)


def test_rejects_mismatched_carrier():
    grid = CarrierGrid([Axis.centered("linear", 16, 2.0)])
    with pytest.raises(ValueError):
        Representation(AFF, grid)


def test_affine_pointwise_action_hand_value():
    grid, rep = affine_setup(16, 2.0)
    psi = np.arange(16, dtype=float)
    # g = (e^{dt}, 0): pure aligned dilation, shift by one lattice slot
    dt = grid.axes[0].step
    out = rep.apply([np.exp(dt), 0.0], psi)
    assert_allclose(out[:-1], psi[1:], atol=1e-13)
    assert_allclose(out[-1], 0.0, atol=1e-13)  # truncation, not wraparound


def test_affine_phase_convention():
    grid, rep = affine_setup(16, 2.0, sign=+1)
    r = grid.coords()[0]
    psi = np.ones(16)
    out = rep.apply([1.0, 0.5], psi)
    assert_allclose(out, np.exp(-2j * np.pi * 0.5 * r), rtol=1e-13)
    _, repm = affine_setup(16, 2.0, sign=-1)
    out = repm.apply([1.0, 0.5], psi)
    assert_allclose(out, np.exp(+2j * np.pi * 0.5 * r), rtol=1e-13)


def test_affine_matrix_matches_apply():
    grid, rep = affine_setup(64, 3.0)
    rng = np.random.default_rng(0)
    psi = rng.normal(size=64) + 1j * rng.normal(size=64)
    for g in ([2.0, 0.7], [np.exp(3 * grid.axes[0].step), -1.2]):
        assert_allclose(rep.matrix(g).apply(psi), rep.apply(g, psi), atol=1e-12)


def _aligned_affine_elems(grid, rng, count):
    dt = grid.axes[0].step
    ks = rng.integers(-8, 9, size=count)
    xs = rng.uniform(-2, 2, size=count)
    return [np.array([np.exp(k * dt), x]) for k, x in zip(ks, xs)]


def test_affine_group_law_exact_when_aligned():
    # composing two truncated shifts deadens a wider edge zone than the net
    # shift, so "exact" needs the window tails dead well inside the range
    grid, rep = affine_setup(256, 6.0)
    rng = np.random.default_rng(1)
    psi = make_signal(grid, {"kind": "gaussian_log", "width": 0.6})
    for g, h in zip(
        _aligned_affine_elems(grid, rng, 6), _aligned_affine_elems(grid, rng, 6)
    ):
        lhs = rep.apply(g, rep.apply(h, psi))
        rhs = rep.apply(AFF.mul(g, h), psi)
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_affine_unitary_and_adjoint_exact_when_aligned():
    grid, rep = affine_setup(256, 6.0)
    rng = np.random.default_rng(2)
    psi = make_signal(grid, {"kind": "gaussian_log", "width": 0.6})
    phi = make_signal(grid, {"kind": "hermite_log", "order": 2, "width": 0.8})
    for g in _aligned_affine_elems(grid, rng, 8):
        assert_allclose(
            grid.inner(rep.apply(g, psi), rep.apply(g, phi)),
            grid.inner(psi, phi),
            rtol=1e-11,
            atol=1e-12,
        )
        gap = rep.matrix(AFF.inv(g)).matrix - rep.matrix(g).adjoint().matrix
        assert np.max(np.abs(gap)) * grid.weight < 1e-12


def test_affine_fractional_dilation_is_approximate_isometry():
    grid, rep = affine_setup(256, 6.0)
    psi = make_signal(grid, {"kind": "gaussian_log", "width": 0.7})
    g = [1.37, 0.4]  # log(1.37)/dt irrational, forces interpolation
    n1 = grid.norm(rep.apply(g, psi))
    assert abs(n1 - 1.0) < 1e-4


def test_duflo_moore_commutation():
    # pi(g) D = Delta(g)^{-1/2} D pi(g), exactly on aligned elements
    grid, rep = affine_setup()
    D = rep.duflo_moore()
    rng = np.random.default_rng(3)
    for g in _aligned_affine_elems(grid, rng, 6):
        P = rep.matrix(g)
        lhs = (P @ D).matrix
        rhs = (D @ P).matrix / np.sqrt(AFF.modular(g))
        assert np.max(np.abs(lhs - rhs)) < 1e-11 * np.max(np.abs(rhs))


def test_duflo_moore_inverse():
    grid, rep = affine_setup(32, 2.0)
    eye = (rep.duflo_moore() @ rep.duflo_moore_inv()).matrix
    assert_allclose(eye * grid.weight, np.eye(32), atol=1e-12)


# ---------------------------------------------------------------------------
# shearlet
# ---------------------------------------------------------------------------


def test_shearlet_action_hand_value():
    grid, rep = shearlet_setup()
    b = grid.coords()[0]
    t = grid.coords()[1]
    phi = np.ones(grid.shape)
    # pure (x1, x2) element: multiplier only
    out = rep.apply([1.0, 0.0, 0.3, -0.2], phi)
    want = np.exp(-2j * np.pi * (b[:, None] * 0.3 + np.sqrt(b)[:, None] * t[None, :] * -0.2))
    assert_allclose(out, want, rtol=1e-12)


def test_shearlet_matrix_matches_apply():
    grid, rep = shearlet_setup(16, 16)
    rng = np.random.default_rng(4)
    phi = rng.normal(size=grid.shape)
    g = [1.7, 0.4, 0.2, -0.3]
    assert_allclose(rep.matrix(g).apply(phi), rep.apply(g, phi), atol=1e-12)


def test_shearlet_group_law_approximate():
    grid, rep = shearlet_setup()
    phi = make_signal(grid, {"kind": "gaussian_log", "width": 0.8})
    g = np.array([1.5, 0.3, 0.1, 0.2])
    h = np.array([0.8, -0.2, 0.0, 0.1])
    lhs = rep.apply(g, rep.apply(h, phi))
    rhs = rep.apply(SHE.mul(g, h), phi)
    assert np.max(np.abs(lhs - rhs)) < 2e-2 * np.max(np.abs(rhs))


def test_shearlet_unitarity_on_tail_dead_window():
    grid, rep = shearlet_setup()
    phi = make_signal(grid, {"kind": "gaussian_log", "width": 0.8})
    for g in ([1.3, 0.25, 0.4, -0.1], [0.7, -0.3, 0.0, 0.5]):
        n = grid.norm(rep.apply(g, phi))
        assert abs(n - 1.0) < 1e-2


def test_shearlet_exact_on_multiplier_subgroup():
    # elements (1, 0, x1, x2) act by a pure phase: exactly unitary
    grid, rep = shearlet_setup()
    rng = np.random.default_rng(5)
    phi = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    g = [1.0, 0.0, 0.7, -0.4]
    assert_allclose(grid.norm(rep.apply(g, phi)), grid.norm(phi), rtol=1e-12)
    gap = rep.matrix(SHE.inv(g)).matrix - rep.matrix(g).adjoint().matrix
    assert np.max(np.abs(gap)) < 1e-12
