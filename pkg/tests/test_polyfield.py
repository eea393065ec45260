import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matrixphase.clifford import GammaRep, build_gamma_set
from matrixphase.errors import TermBudgetError
from matrixphase.polyfield import (
    DEGREE_CAP,
    Field,
    NVARS,
    P_VARS,
    PhasePoint,
    X_VARS,
    constant_field,
    coordinate_field,
    plane_wave_field,
    random_field,
    zero_field,
)

GSET = build_gamma_set(GammaRep.DIRAC)


def _pt(seed: int) -> PhasePoint:
    rng = np.random.default_rng(seed)
    c = rng.uniform(-1.5, 1.5, 8)
    return PhasePoint(x=tuple(c[:4]), p=tuple(c[4:]))


fields = st.integers(min_value=0, max_value=10_000).map(
    lambda s: random_field(s, degree=2, waves=s % 3)
)
var_idx = st.integers(min_value=0, max_value=NVARS - 1)
seeds = st.integers(min_value=0, max_value=10_000)


def test_zero_and_constant():
    assert zero_field().is_zero()
    m = np.arange(16, dtype=float).reshape(4, 4)
    f = constant_field(m)
    assert np.abs(f.evaluate(_pt(0)) - m).max() == 0.0
    assert f.norm() == 15.0


def test_coordinate_field_evaluates_to_coordinate():
    pt = _pt(1)
    for v in range(NVARS):
        val = coordinate_field(v).evaluate(pt)
        assert np.abs(val - pt.coords()[v] * np.eye(4)).max() <= 1e-15


def test_field_rejects_bad_coefficient_shape():
    with pytest.raises(ValueError):
        Field({(0.0,) * 4: {(0,) * 8: np.eye(3)}})


def test_degree_cap_enforced():
    exps = (DEGREE_CAP + 1,) + (0,) * 7
    with pytest.raises(TermBudgetError):
        Field({(0.0,) * 4: {exps: np.eye(4)}})


def test_field_is_immutable():
    f = constant_field(np.eye(4))
    with pytest.raises(AttributeError):
        f.terms = {}


@given(fields, fields, seeds)
@settings(max_examples=40, deadline=None)
def test_evaluate_is_additive(f, g, seed):
    pt = _pt(seed)
    lhs = (f + g).evaluate(pt)
    rhs = f.evaluate(pt) + g.evaluate(pt)
    assert np.abs(lhs - rhs).max() <= 1e-10 * max(1.0, f.norm() + g.norm())


@given(fields, fields, seeds)
@settings(max_examples=40, deadline=None)
def test_evaluate_is_multiplicative(f, g, seed):
    pt = _pt(seed)
    lhs = (f * g).evaluate(pt)
    rhs = f.evaluate(pt) @ g.evaluate(pt)
    scale = max(1.0, abs(f.evaluate(pt)).max() * abs(g.evaluate(pt)).max())
    assert np.abs(lhs - rhs).max() <= 1e-9 * scale


@given(fields, var_idx, var_idx)
@settings(max_examples=40, deadline=None)
def test_mixed_partials_commute(f, v1, v2):
    d12 = f.diff(v1).diff(v2)
    d21 = f.diff(v2).diff(v1)
    assert (d12 - d21).norm() <= 1e-12 * max(1.0, f.norm())


@given(fields, fields, var_idx)
@settings(max_examples=40, deadline=None)
def test_product_rule(f, g, v):
    lhs = (f * g).diff(v)
    rhs = f.diff(v) * g + f * g.diff(v)
    assert (lhs - rhs).norm() <= 1e-10 * max(1.0, f.norm() * g.norm())


@given(fields, var_idx, seeds)
@settings(max_examples=40, deadline=None)
def test_derivative_matches_finite_difference(f, v, seed):
    pt = _pt(seed)
    h = 1e-6
    cp = pt.coords().copy()
    cm = pt.coords().copy()
    cp[v] += h
    cm[v] -= h
    pp = PhasePoint(x=tuple(cp[:4]), p=tuple(cp[4:]))
    pm = PhasePoint(x=tuple(cm[:4]), p=tuple(cm[4:]))
    fd = (f.evaluate(pp) - f.evaluate(pm)) / (2 * h)
    exact = f.diff(v).evaluate(pt)
    assert np.abs(fd - exact).max() <= 1e-5 * max(1.0, f.norm())


def test_plane_wave_derivative_brings_down_ik():
    k = (0.5, -1.0, 2.0, 0.25)
    m = np.eye(4)
    f = plane_wave_field(m, k)
    for nu in range(4):
        d = f.diff(X_VARS[nu])
        expect = plane_wave_field(1j * k[nu] * m, k)
        assert (d - expect).norm() <= 1e-15
    for nu in range(4):
        assert f.diff(P_VARS[nu]).is_zero()


@given(fields)
@settings(max_examples=30, deadline=None)
def test_dagger_is_involution(f):
    assert (f.dagger().dagger() - f).norm() <= 1e-13 * max(1.0, f.norm())


@given(fields, seeds)
@settings(max_examples=30, deadline=None)
def test_dagger_evaluates_to_conjugate_transpose(f, seed):
    pt = _pt(seed)
    lhs = f.dagger().evaluate(pt)
    rhs = f.evaluate(pt).conj().T
    assert np.abs(lhs - rhs).max() <= 1e-10 * max(1.0, f.norm())


@given(fields, seeds)
@settings(max_examples=30, deadline=None)
def test_dirac_adjoint_pointwise(f, seed):
    pt = _pt(seed)
    g0 = np.asarray(GSET.gamma0)
    lhs = f.dirac_adj(g0).evaluate(pt)
    rhs = g0 @ f.evaluate(pt).conj().T @ g0
    assert np.abs(lhs - rhs).max() <= 1e-10 * max(1.0, f.norm())


@given(fields)
@settings(max_examples=30, deadline=None)
def test_trace_is_normalized(f):
    tr = f.trace()
    pt = _pt(2)
    lhs = tr.evaluate(pt)
    rhs = np.trace(f.evaluate(pt)) / 4.0 * np.eye(4)
    assert np.abs(lhs - rhs).max() <= 1e-10 * max(1.0, f.norm())


def test_substitute_identity_is_noop():
    f = random_field(17, degree=2, waves=2)
    g = f.substitute_linear(np.eye(4), np.eye(4))
    pt = _pt(3)
    assert np.abs(f.evaluate(pt) - g.evaluate(pt)).max() <= 1e-12


@given(seeds, seeds)
@settings(max_examples=20, deadline=None)
def test_substitute_linear_pointwise(fseed, pseed):
    """F(mx x', mp p') evaluated at z' equals F at the mapped point."""
    f = random_field(fseed % 50, degree=2, waves=1)
    rng = np.random.default_rng(pseed)
    mx = np.eye(4) + 0.2 * rng.normal(size=(4, 4))
    mp = np.eye(4) + 0.2 * rng.normal(size=(4, 4))
    pt = _pt(pseed)
    mapped = PhasePoint(
        x=tuple(mx @ np.array(pt.x)), p=tuple(mp @ np.array(pt.p))
    )
    lhs = f.substitute_linear(mx, mp).evaluate(pt)
    rhs = f.evaluate(mapped)
    assert np.abs(lhs - rhs).max() <= 1e-8 * max(1.0, f.norm())


def test_random_field_is_deterministic():
    a = random_field(99, degree=3, waves=2)
    b = random_field(99, degree=3, waves=2)
    assert (a - b).norm() == 0.0
    assert a.n_monomials == b.n_monomials


def test_scalar_multiplication_forms():
    f = random_field(5)
    assert ((2.0 * f) - (f * 2.0)).norm() == 0.0
    assert ((2.0 * f) - (f + f)).norm() <= 1e-15


def test_matmul_left_right():
    f = random_field(6)
    m = np.diag([1.0, 2.0, 3.0, 4.0])
    pt = _pt(4)
    assert np.abs(f.matmul_left(m).evaluate(pt) - m @ f.evaluate(pt)).max() <= 1e-12
    assert np.abs(f.matmul_right(m).evaluate(pt) - f.evaluate(pt) @ m).max() <= 1e-12
