import warnings

import numpy as np
import pytest
from scipy.linalg import expm

from matrixphase.brackets import moyal_bracket
from matrixphase.clifford import GammaRep, build_gamma_set, dirac_adjoint
from matrixphase.dynamics import (
    _free_advance,
    _landau_rhs_general,
    covariance_check,
    em_transport_step,
    evolve_anticomm,
    evolve_em,
    evolve_free,
    evolve_landau_moyal,
    free_propagator,
    observables,
    residual_free,
)
from matrixphase.errors import CFLError, ConsistencyError
from matrixphase.gridfield import AxisSpec, GridField, GridSpec, sample_to_grid
from matrixphase.hamiltonians import PhysParams, landau_potential, zero_potential
from matrixphase.polyfield import (
    Field,
    P_VARS,
    X_VARS,
    constant_field,
    plane_wave_field,
    zero_field,
)

GSET = build_gamma_set(GammaRep.DIRAC)
PARAMS = PhysParams()

_FIXED_ALL = {
    X_VARS[0]: 0.0,
    X_VARS[2]: 0.0,
    X_VARS[3]: 0.0,
    P_VARS[0]: 0.0,
    P_VARS[1]: 0.0,
    P_VARS[2]: 0.0,
    P_VARS[3]: 0.0,
}


def _x1_spec(n=32):
    return GridSpec(
        axes=(AxisSpec(var=X_VARS[1], extent=2 * np.pi, n=n),),
        fixed=dict(_FIXED_ALL),
    )


def _herm_seed(seed=7):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    return m + dirac_adjoint(m, GSET.gamma0)


def _free_initial(seed=7, kx=2.0):
    """A Dirac-Hermitian single-mode initial condition on the x^1 grid."""
    m = _herm_seed(seed)
    f = plane_wave_field(m, (0.0, kx, 0.0, 0.0)) + plane_wave_field(
        dirac_adjoint(m, GSET.gamma0), (0.0, -kx, 0.0, 0.0)
    )
    return sample_to_grid(f, _x1_spec())


def test_free_propagator_unitary():
    k = np.array([0.3, -1.1, 0.7])
    u = free_propagator(k, 0.4, PARAMS, GSET)
    assert np.abs(u @ u.conj().T - np.eye(4)).max() <= 1e-13


def test_free_propagator_semigroup():
    k = np.array([0.9, 0.2, -0.5])
    u1 = free_propagator(k, 0.4, PARAMS, GSET)
    u2 = free_propagator(k, 0.9, PARAMS, GSET)
    u3 = free_propagator(k, 1.3, PARAMS, GSET)
    assert np.abs(u1 @ u2 - u3).max() <= 1e-13


def test_free_propagator_matches_expm():
    k = np.array([0.3, -1.1, 0.7])
    ak = sum(k[i] * np.asarray(GSET.alpha[i]) for i in range(3))
    u = free_propagator(k, 0.4, PARAMS, GSET)
    assert np.abs(u - expm(-1j * PARAMS.c * 0.4 * ak)).max() <= 1e-12


def test_free_propagator_zero_mode_is_identity():
    u = free_propagator([0.0, 0.0, 0.0], 5.0, PARAMS, GSET)
    assert np.array_equal(u, np.eye(4, dtype=complex))


def test_evolve_free_residual_and_trace():
    w0 = _free_initial()
    rep = evolve_free(w0, 10.0, PARAMS, GSET, n_snapshots=10)
    scale = max(1.0, w0.max_abs())
    assert max(rep.residual_series) / scale <= 1e-8
    drift = max(abs(t - rep.trace_series[0]) for t in rep.trace_series)
    assert drift <= 1e-9 * max(1.0, abs(rep.trace_series[0]))
    assert rep.final.time == pytest.approx(10.0)


def test_evolve_free_hermiticity_not_preserved_generically():
    """The one-sided free generator acts by left multiplication only, and
    alpha matrices are anti-Dirac-Hermitian, so a generic Dirac-Hermitian
    initial condition loses the property under evolution."""
    w0 = _free_initial()
    rep = evolve_free(w0, 1.0, PARAMS, GSET, n_snapshots=4)
    assert rep.herm_series[0] <= 1e-12
    assert max(rep.herm_series) > 1e-3


def test_em_step_zero_potential_matches_closed_form():
    w0 = _free_initial()
    dt = 0.02
    stepped = em_transport_step(w0, "kcal", zero_potential(), PARAMS, GSET, dt)
    exact = _free_advance(w0, dt, PARAMS, GSET)
    assert np.abs(stepped.samples - exact.samples).max() <= 1e-8


def test_em_step_rk4_order():
    """One full step versus two half steps: local error shrinks ~16x."""
    w0 = _free_initial()
    dt = 0.05
    exact = _free_advance(w0, dt, PARAMS, GSET)
    one = em_transport_step(w0, "kcal", zero_potential(), PARAMS, GSET, dt)
    half = em_transport_step(w0, "kcal", zero_potential(), PARAMS, GSET, dt / 2)
    two = em_transport_step(half, "kcal", zero_potential(), PARAMS, GSET, dt / 2)
    e1 = np.abs(one.samples - exact.samples).max()
    e2 = np.abs(two.samples - exact.samples).max()
    assert e1 / e2 >= 14.0


def test_em_step_gamma_and_kcal_agree_for_free_case():
    w0 = _free_initial()
    a = em_transport_step(w0, "gamma", zero_potential(), PARAMS, GSET, 0.02)
    b = em_transport_step(w0, "kcal", zero_potential(), PARAMS, GSET, 0.02)
    assert np.abs(a.samples - b.samples).max() <= 1e-12


def test_em_step_zero_dt_is_noop():
    w0 = _free_initial()
    s = em_transport_step(w0, "kcal", zero_potential(), PARAMS, GSET, 0.0)
    assert np.array_equal(s.samples, w0.samples)


def test_em_step_rejects_unknown_kind():
    w0 = _free_initial()
    with pytest.raises(ValueError):
        em_transport_step(w0, "nope", zero_potential(), PARAMS, GSET, 0.01)


def test_em_rhs_requires_momentum_axis_for_potential():
    w0 = _free_initial()
    with pytest.raises(Exception):
        em_transport_step(w0, "kcal", landau_potential(1.0), PARAMS, GSET, 0.01)


def test_evolve_em_report_series_consistent():
    w0 = _free_initial()
    rep = evolve_em(w0, "kcal", zero_potential(), PARAMS, GSET, 0.05, 0.25)
    assert len(rep.times) == 6
    rep.validate()
    drift = max(abs(t - rep.trace_series[0]) for t in rep.trace_series)
    assert drift <= 1e-9 * max(1.0, abs(rep.trace_series[0]))


def test_anticomm_requires_dirac_basis():
    chir = build_gamma_set(GammaRep.CHIRAL)
    w0 = _free_initial()
    with pytest.raises(ValueError):
        evolve_anticomm(w0, PARAMS, chir, 0.05, 0.1)


def test_anticomm_constant_field_is_frozen():
    wc = sample_to_grid(constant_field(_herm_seed()), _x1_spec())
    rep = evolve_anticomm(wc, PARAMS, GSET, 0.05, 0.5)
    assert np.abs(rep.final.samples - wc.samples).max() <= 1e-13
    assert max(rep.residual_series) <= 1e-13


def test_anticomm_offrange_residual_and_threshold():
    w0 = _free_initial()
    rep = evolve_anticomm(w0, PARAMS, GSET, 0.02, 0.1)
    assert max(rep.residual_series) > 1e-6  # off-range part is genuinely nonzero
    with pytest.raises(ConsistencyError):
        evolve_anticomm(w0, PARAMS, GSET, 0.02, 0.1, consistency_threshold=1e-12)


def _landau_spec(np_grid=16, nmom=24):
    return GridSpec(
        axes=(
            AxisSpec(var=X_VARS[1], extent=2 * np.pi, n=np_grid),
            AxisSpec(var=P_VARS[1], extent=4.0, n=nmom, origin=-2.0, periodic=False),
            AxisSpec(var=P_VARS[2], extent=4.0, n=nmom, origin=-2.0, periodic=False),
        ),
        fixed={
            X_VARS[0]: 0.0,
            X_VARS[2]: 0.0,
            X_VARS[3]: 0.0,
            P_VARS[0]: 0.0,
            P_VARS[3]: 0.3,
        },
    )


def _landau_symbolic_w(seed=11):
    """Plane waves in x^1, low-degree polynomials in p_1 and p_2 so that
    both spectral and finite-difference grid derivatives are exact."""
    w = zero_field()
    rng = np.random.default_rng(seed)
    terms = [
        (0.0, (0,) * 8),
        (1.0, (0,) * 8),
        (-1.0, (0, 0, 0, 0, 0, 1, 0, 0)),
        (0.0, (0, 0, 0, 0, 0, 0, 1, 0)),
        (2.0, (0, 0, 0, 0, 0, 1, 0, 0)),
        (0.0, (0, 0, 0, 0, 0, 1, 1, 0)),
    ]
    for kx, exps in terms:
        c = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        w = w + Field({(0.0, kx, 0.0, 0.0): {exps: c}})
    return w


def test_landau_rhs_matches_symbolic_moyal_bracket():
    """Grid right-hand side versus the exact symbolic Moyal bracket of the
    time-split Landau Hamiltonian, evaluated term by term on the grid."""
    from matrixphase.hamiltonians import kcal_em

    b = 0.7
    spec = _landau_spec()
    wsym = _landau_symbolic_w()
    kc = kcal_em(PARAMS, landau_potential(b), GSET)
    msym = moyal_bracket(kc, wsym, PARAMS.hbar)
    assert msym.exact
    rhs = _landau_rhs_general(spec, PARAMS, b, GSET)
    got = rhs(sample_to_grid(wsym, spec).samples)
    want = sample_to_grid(msym.field, spec).samples
    scale = max(1.0, np.abs(want).max())
    assert np.abs(got - want).max() / scale <= 1e-11


def test_landau_preserved_class_is_stationary():
    """x-independent combinations h(p_2) 1 + g(p_2) i gamma^1 gamma^3 commute
    with every matrix in the generator and are annihilated by it."""
    spec = GridSpec(
        axes=(
            AxisSpec(var=X_VARS[1], extent=2 * np.pi, n=16),
            AxisSpec(var=P_VARS[2], extent=6.0, n=32, origin=-3.0, periodic=False),
        ),
        fixed={
            X_VARS[0]: 0.0,
            X_VARS[2]: 0.0,
            X_VARS[3]: 0.0,
            P_VARS[0]: 0.0,
            P_VARS[1]: 0.0,
            P_VARS[3]: 0.0,
        },
    )
    g13 = 1j * np.asarray(GSET.gamma[1]) @ np.asarray(GSET.gamma[3])
    p2 = spec.meshes()[1]
    h = np.exp(-p2**2)
    g = p2 * np.exp(-p2**2)
    samples = h[..., None, None] * np.eye(4) + g[..., None, None] * g13
    w0 = GridField(spec=spec, samples=samples.astype(complex))
    rep = evolve_landau_moyal(w0, PARAMS, 0.5, GSET, 0.02, 0.2)
    assert np.abs(rep.final.samples - w0.samples).max() <= 1e-12
    assert max(rep.herm_series) <= 1e-12


def test_landau_trace_conserved_and_printed_diff_nonzero():
    spec = GridSpec(
        axes=(
            AxisSpec(var=X_VARS[1], extent=2 * np.pi, n=16),
            AxisSpec(var=P_VARS[2], extent=6.0, n=32, origin=-3.0, periodic=False),
        ),
        fixed={
            X_VARS[0]: 0.0,
            X_VARS[2]: 0.0,
            X_VARS[3]: 0.0,
            P_VARS[0]: 0.0,
            P_VARS[1]: 0.0,
            P_VARS[3]: 0.0,
        },
    )
    x1, p2 = spec.meshes()
    env = np.exp(-(p2**2)) * (1.0 + 0.3 * np.cos(x1))
    samples = env[..., None, None] * (_herm_seed(3))
    w0 = GridField(spec=spec, samples=samples.astype(complex))
    rep = evolve_landau_moyal(w0, PARAMS, 0.5, GSET, 0.01, 0.1)
    drift = max(abs(t - rep.trace_series[0]) for t in rep.trace_series)
    assert drift <= 1e-8 * max(1.0, abs(rep.trace_series[0]))
    assert max(rep.extras["printed_vs_general_diff"]) > 1e-6


def test_landau_strict_cfl_raises():
    spec = _landau_spec(np_grid=16, nmom=24)
    w0 = sample_to_grid(_landau_symbolic_w(), spec)
    with pytest.raises(CFLError):
        evolve_landau_moyal(w0, PARAMS, 0.7, GSET, dt=50.0, t_total=100.0, strict_cfl=True)


def test_landau_loose_cfl_warns():
    spec = _landau_spec(np_grid=16, nmom=24)
    w0 = sample_to_grid(_landau_symbolic_w(), spec)
    with pytest.warns(UserWarning):
        evolve_landau_moyal(w0, PARAMS, 0.7, GSET, dt=50.0, t_total=50.0)


def test_observables_on_hermitian_data():
    w0 = _free_initial()
    obs = observables(w0, GSET)
    assert obs["trace_density"].shape == w0.spec.shape
    assert obs["max_herm_deviation"] <= 1e-12
    assert obs["total_trace"] == pytest.approx(w0.total_trace())


def test_covariance_of_transported_solution():
    """A spinor-density plane-wave solution stays a solution after a finite
    boost plus rotation."""
    from matrixphase import dirac_oracle as do

    kvec = np.array([2.0, 1.2, -1.0, np.sqrt(4.0 - 1.44 - 1.0)])
    sol = do.make_solution(kvec, "positive", 0.0, GSET)
    w = do.wbar_field([(sol, 1.0)], GSET)
    assert residual_free(w, GSET) <= 1e-10
    omega = np.array(
        [
            [0.0, 0.3, 0.0, 0.0],
            [-0.3, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.2],
            [0.0, 0.0, -0.2, 0.0],
        ]
    )
    rep = covariance_check(omega, w, GSET)
    assert rep.verdict == "holds"
