import numpy as np
import pytest
from numpy.testing import assert_allclose

from qutritsim.lindblad import (
    IntegratorConfig,
    ModelParams,
    build_collective_jump,
    dissipator,
    integrate,
    lowering_operator,
)
from qutritsim.linalg import (
    DensityMatrix,
    InvariantViolation,
    basis_state,
    kron,
    outer,
    trace_distance,
)


def _excited_state(n):
    # site 0 in level 1, the rest in the ground level
    return DensityMatrix.from_pure(basis_state(3 ** (n - 1), 3 ** n), (3,) * n)


def test_model_params_validation():
    with pytest.raises(ValueError, match="positive integer"):
        ModelParams(0, 1.0, 1.0)
    with pytest.raises(ValueError, match="nonnegative"):
        ModelParams(2, -0.5, 1.0)
    with pytest.raises(ValueError, match="positive"):
        ModelParams(2, 0.0, 0.0)


def test_model_params_rates():
    p = ModelParams(4, 1.0, 0.5)
    assert_allclose(p.beta, 3 * 1.0 + 4 * 0.5)
    assert_allclose(p.gamma, 4 * 1.5)
    assert_allclose(p.beta, p.gamma - p.a2)
    assert p.dim == 81


def test_lowering_operator_matrix():
    l = lowering_operator(4.0, 9.0)
    expected = np.zeros((3, 3))
    expected[0, 1] = 2.0
    expected[0, 2] = 3.0
    assert_allclose(l, expected, atol=0)


def test_collective_jump_is_sum_of_sites():
    params = ModelParams(2, 1.0, 0.5)
    single = lowering_operator(1.0, 0.5)
    eye = np.eye(3)
    expected = kron(single, eye) + kron(eye, single)
    assert_allclose(build_collective_jump(params), expected, atol=0)


def test_collective_jump_size_cap():
    with pytest.raises(ValueError, match="cap"):
        build_collective_jump(ModelParams(7, 1.0, 1.0))


def test_jump_action_on_single_excitation():
    # L |1 0> = sqrt(a2) |0 0>; L+ L |1 0> = a2 |1 0> + a2 |0 1>
    #   + sqrt(a2 a3) (|0 2> + |2 0>)
    a2, a3 = 0.7, 0.4
    params = ModelParams(2, a2, a3)
    jump = build_collective_jump(params)
    ket10 = basis_state(3, 9)
    assert_allclose(jump @ ket10, np.sqrt(a2) * basis_state(0, 9), atol=1e-15)
    dressed = a2 * basis_state(1, 9) + np.sqrt(a2 * a3) * (
        basis_state(2, 9) + basis_state(6, 9))
    assert_allclose(jump.conj().T @ jump @ ket10, a2 * ket10 + dressed,
                    atol=1e-14)


def test_dissipator_form_and_structure():
    rng = np.random.default_rng(0)
    params = ModelParams(2, 1.0, 0.5)
    jump = build_collective_jump(params)
    g = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    rho = 0.5 * (g + g.conj().T)
    out = dissipator(jump, rho)
    jd = jump.conj().T
    direct = 2.0 * jump @ rho @ jd - jd @ jump @ rho - rho @ jd @ jump
    assert_allclose(out, direct, atol=0)
    assert_allclose(out, out.conj().T, atol=1e-12)
    assert abs(out.trace()) < 1e-12


def test_ground_state_is_stationary():
    params = ModelParams(3, 1.0, 0.5)
    jump = build_collective_jump(params)
    ground = outer(basis_state(0, 27))
    assert_allclose(dissipator(jump, ground), np.zeros((27, 27)), atol=0)


def test_dissipator_shape_mismatch():
    with pytest.raises(ValueError, match="shape"):
        dissipator(np.zeros((3, 3)), np.zeros((9, 9)))


def test_integrator_config_validation():
    with pytest.raises(ValueError, match="dt"):
        IntegratorConfig(t_end=1.0, dt=0.0)
    with pytest.raises(ValueError, match="t_end"):
        IntegratorConfig(t_end=-1.0)
    with pytest.raises(ValueError, match="one step"):
        IntegratorConfig(t_end=1e-5, dt=1e-3)
    with pytest.raises(ValueError, match="record_every"):
        IntegratorConfig(t_end=1.0, record_every=0)


def test_integrate_conserves_trace_and_reaches_steady_ground():
    params = ModelParams(2, 1.0, 1.0)
    cfg = IntegratorConfig(t_end=10.0, dt=1e-3, record_every=1000)
    samples = integrate(_excited_state(2), params, cfg)
    assert_allclose(samples[0][0], 0.0, atol=0)
    assert_allclose(samples[-1][0], 10.0, atol=1e-12)
    for t, state in samples:
        assert abs(state.matrix.trace().real - 1.0) < 1e-9
    # ground population settles at a2/gamma = 1/4
    assert_allclose(samples[-1][1].matrix[0, 0].real, 0.25, atol=1e-8)


def test_integrate_dark_level_is_stationary():
    # with a2 = 0 the level-1 excitation cannot decay
    params = ModelParams(2, 0.0, 1.0)
    cfg = IntegratorConfig(t_end=2.0, dt=1e-3, record_every=500)
    rho0 = _excited_state(2)
    for _, state in integrate(rho0, params, cfg):
        assert trace_distance(state, rho0) < 1e-9


def test_integrate_rejects_mismatched_state():
    params = ModelParams(3, 1.0, 1.0)
    with pytest.raises(ValueError, match="dims"):
        integrate(_excited_state(2), params, IntegratorConfig(t_end=1.0))


def test_integrate_reports_violation_time_for_unstable_step():
    # gamma = 4: a 0.5 step is far outside the stability region
    params = ModelParams(2, 1.0, 1.0)
    cfg = IntegratorConfig(t_end=5.0, dt=0.5, record_every=1)
    with pytest.raises(InvariantViolation, match="at t="):
        integrate(_excited_state(2), params, cfg)
