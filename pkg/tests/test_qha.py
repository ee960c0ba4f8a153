"""Mixed function/operator convolutions on the affine lattice.

The context keeps the group step in u equal to the carrier step so the
representation acts by exact shifts; everything below then has a clean
split between machine-precision identities (quadrature-exact on both
sides) and band-limited ones whose error is set by the lattice.
"""

import numpy as np
import pytest
from types import SimpleNamespace

from orbitquant import qha
from orbitquant.groups import AffineGroup
from orbitquant.groupfn import GroupGrid, OrbitGrid, convolve, involution, make_group_function
from orbitquant.hilbert import Axis, CarrierGrid, KernelOperator, make_signal
from orbitquant.rep import Representation


@pytest.fixture(scope="module")
def ctx():
    group = AffineGroup()
    carrier = CarrierGrid([Axis.centered("log", 128, 4.0)])
    rep = Representation(group, carrier)
    ggrid = GroupGrid.centered(group, (128, 128), (4.0, 4.0))
    return qha.QhaContext(rep, OrbitGrid(ggrid, +1))


@pytest.fixture(scope="module")
def window_pair(ctx):
    f = make_group_function(ctx.ggrid, {"kind": "gaussian", "width": (0.35, 0.45),
                                        "center": (0.0, 0.0)})
    g = make_group_function(ctx.ggrid, {"kind": "gaussian", "width": (0.45, 0.35),
                                        "center": (-0.1, 0.2)})
    return f, g

@pytest.fixture(scope="module")
def ops(ctx, window_pair):
    f, g = window_pair
    return qha.quantize_lattice(ctx, f), qha.quantize_lattice(ctx, g)


def test_context_detects_aligned_lattice(ctx):
    assert ctx._aligned


def test_matrix_coeff_matches_inner_products(ctx):
    v = make_signal(ctx.carrier, {"kind": "gaussian", "width": 0.5, "center": 0.0})
    w = make_signal(ctx.carrier, {"kind": "hermite", "order": 1, "width": 0.6,
                                  "center": 0.1})
    coef = qha.matrix_coeff(ctx, w, v).ravel()
    pts = ctx.ggrid.points_flat
    for k in (1000, 5201, 9800, 14003):
        direct = ctx.carrier.inner(w, ctx.rep.matrix(pts[k]).apply(v))
        assert abs(coef[k] - direct) <= 1e-10 * max(1.0, abs(direct))


def test_spectrogram_identity(ctx):
    psi = make_signal(ctx.carrier, {"kind": "gaussian", "width": 0.5, "center": 0.0})
    phi = make_signal(ctx.carrier, {"kind": "gaussian", "width": 0.6, "center": 0.2})
    spec = qha.conv_op_op(ctx, KernelOperator.rank_one(ctx.carrier, psi, psi),
                          KernelOperator.rank_one(ctx.carrier, phi, phi))
    coef = qha.wavelet_coeff(ctx, psi, phi)
    gap = np.abs(spec - np.abs(coef) ** 2).max()
    assert gap <= 1e-12 * np.abs(spec).max()


def test_spectrogram_positivity(ctx):
    psi = make_signal(ctx.carrier, {"kind": "hermite", "order": 2, "width": 0.4,
                                    "center": -0.1})
    phi = make_signal(ctx.carrier, {"kind": "gaussian", "width": 0.6, "center": 0.2})
    spec = qha.conv_op_op(ctx, KernelOperator.rank_one(ctx.carrier, psi, psi),
                          KernelOperator.rank_one(ctx.carrier, phi, phi))
    assert spec.real.min() >= -1e-15
    assert np.abs(spec.imag).max() <= 1e-12


def test_conv_fn_op_matches_pointwise_sum():
    # small aligned lattice where the definition can be summed directly
    group = AffineGroup()
    carrier = CarrierGrid([Axis.centered("log", 48, 4.0)])
    rep = Representation(group, carrier)
    ggrid = GroupGrid.centered(group, (48, 48), (4.0, 4.0))
    small = qha.QhaContext(rep, OrbitGrid(ggrid, +1))
    phi = make_signal(carrier, {"kind": "gaussian", "width": 0.6, "center": 0.2})
    xi = make_signal(carrier, {"kind": "hermite", "order": 1, "width": 0.5,
                               "center": -0.1})
    S = KernelOperator.rank_one(carrier, phi, xi)
    f = make_group_function(ggrid, {"kind": "gaussian", "width": (0.4, 0.5),
                                    "center": (0.1, -0.2)})
    fw = (f * ggrid.weight_right).ravel()
    ref = np.zeros((48, 48), dtype=complex)
    for k in range(ggrid.size):
        P = rep.matrix(ggrid.points_flat[k])
        ref += fw[k] * (P.adjoint() @ S @ P).matrix
    out = qha.conv_fn_op(small, f, S)
    assert np.abs(out.matrix - ref).max() <= 1e-12 * np.abs(ref).max()


def test_conv_op_op_matches_pointwise_trace():
    group = AffineGroup()
    carrier = CarrierGrid([Axis.centered("log", 48, 4.0)])
    rep = Representation(group, carrier)
    ggrid = GroupGrid.centered(group, (48, 48), (4.0, 4.0))
    small = qha.QhaContext(rep, OrbitGrid(ggrid, +1))
    psi = make_signal(carrier, {"kind": "gaussian", "width": 0.5, "center": 0.0})
    phi = make_signal(carrier, {"kind": "gaussian", "width": 0.6, "center": 0.2})
    xi = make_signal(carrier, {"kind": "hermite", "order": 1, "width": 0.5,
                               "center": -0.1})
    T = KernelOperator.rank_one(carrier, psi, phi)
    S = KernelOperator.rank_one(carrier, phi, xi)
    out = qha.conv_op_op(small, T, S).ravel()
    ref = np.zeros(ggrid.size, dtype=complex)
    for k in range(ggrid.size):
        P = rep.matrix(ggrid.points_flat[k])
        ref[k] = (T @ (P.adjoint() @ S @ P)).trace()
    assert np.abs(out - ref).max() <= 1e-12 * np.abs(ref).max()


def test_conv_adjoint_rule(ctx, ops):
    _, S = ops
    f = make_group_function(ctx.ggrid, {"kind": "gaussian", "width": (0.35, 0.45),
                                        "center": (0.0, 0.0)})
    fc = f * np.exp(1j * 0.4 * ctx.ggrid.points_flat[:, 0].reshape(ctx.ggrid.shape))
    A = qha.conv_fn_op(ctx, fc, S)
    B = qha.conv_fn_op(ctx, np.conj(fc), S.adjoint())
    assert np.abs(A.adjoint().matrix - B.matrix).max() <= 1e-12 * np.abs(A.matrix).max()


def test_conv_is_submultiplicative(ctx, ops):
    _, S = ops
    f = make_group_function(ctx.ggrid, {"kind": "gaussian", "width": (0.35, 0.45),
                                        "center": (0.0, 0.0)})
    lhs = qha.conv_fn_op(ctx, f, S).hs_norm()
    rhs = ctx.ggrid.lp_norm_r(f, 1) * S.hs_norm()
    assert lhs <= rhs * (1.0 + 1e-12)


def test_quantization_intertwines_convolution(ctx, window_pair, ops):
    # the operator with symbol f*g is f convolved into the operator of g
    f, g = window_pair
    _, S = ops
    A1 = qha.quantize_lattice(ctx, convolve(ctx.ggrid, f, g))
    A2 = qha.conv_fn_op(ctx, f, S)
    assert np.abs(A1.matrix - A2.matrix).max() <= 1e-2 * np.abs(A1.matrix).max()


def test_operator_convolution_dequantizes_to_group_convolution(ctx, window_pair, ops):
    # the symbol of T . S is the group convolution of f with the involuted g
    f, g = window_pair
    T, S = ops
    lhs = qha.conv_op_op(ctx, T, S)
    rhs = convolve(ctx.ggrid, f, involution(ctx.ggrid, g))
    assert np.abs(lhs - rhs).max() <= 1e-2 * np.abs(rhs).max()


def test_conv_associativity(ctx, window_pair, ops):
    f, _ = window_pair
    T, S = ops
    lhs = qha.conv_op_op(ctx, qha.conv_fn_op(ctx, f, S), T)
    rhs = convolve(ctx.ggrid, f, qha.conv_op_op(ctx, S, T))
    assert np.abs(lhs - rhs).max() <= 1e-2 * np.abs(rhs).max()


def test_narrow_bump_is_approximate_identity(ctx, ops):
    _, S = ops
    rels = []
    for width in (0.15, 0.10):
        bump = make_group_function(ctx.ggrid, {"kind": "gaussian",
                                               "width": (width, width),
                                               "center": (0.0, 0.0)})
        bump = bump / ctx.ggrid.integrate_r(bump)
        rels.append((qha.conv_fn_op(ctx, bump, S) - S).hs_norm() / S.hs_norm())
    assert rels[1] <= 8e-2
    assert rels[1] < rels[0]


def test_trace_formulas_on_seeded_windows(ctx):
    rng = np.random.default_rng(11)
    for _ in range(3):
        w = rng.uniform(0.3, 0.6, size=2)
        c = rng.uniform(-0.3, 0.3, size=2)
        f = make_group_function(ctx.ggrid, {"kind": "gaussian", "width": tuple(w),
                                            "center": tuple(c)})
        out = qha.trace_formula_check(ctx, f)
        assert out["residual_right"] <= 1e-2
        assert out["residual_left"] <= 1e-2


def test_trace_formula_rejects_uncalibrated_group():
    fake = SimpleNamespace(group=SimpleNamespace(name="shearlet"))
    with pytest.raises(ValueError):
        qha.trace_formula_check(fake, np.zeros((4, 4)))


def test_young_bound_triples(ctx, ops):
    T, S = ops
    for (p, q, r) in [(1, 1, 1), (2, 1, 2), (2, 2, np.inf)]:
        out = qha.young_bound_check(ctx, T, S, p, q, r)
        assert out["pass"], (p, q, r, out)


def test_young_bound_rejects_bad_exponents(ctx, ops):
    T, S = ops
    with pytest.raises(ValueError):
        qha.young_bound_check(ctx, T, S, 2, 2, 2)


def test_lattice_and_orbit_symbols_are_inverse_on_bands(ctx):
    h = make_group_function(ctx.ggrid, {"kind": "gaussian", "width": (0.4, 0.4),
                                        "center": (0.0, 0.3)})
    A = qha.quantize_lattice(ctx, h)
    back = qha.dequantize_lattice(ctx, A)
    mid = (slice(32, 96), slice(32, 96))
    gap = np.abs(back - h)[mid].max()
    assert gap <= 2e-2 * np.abs(h).max()
