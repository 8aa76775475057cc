import numpy as np
import pytest
import scipy.linalg

from jlbkahler.algebra import MatrixAlgebra
from jlbkahler.dynamics import (
    check_commuting_diagram,
    expectation_trajectory,
    flow,
    flow_invariance_residuals,
    flow_matrix,
    generator,
    hilbert_trajectory,
    poisson_rate_residual,
    trajectory,
)
from jlbkahler.kahler import build_kahler
from jlbkahler.representation import cyclic_point, eval_f, random_point
from jlbkahler.states import evaluate, random_state

from conftest import M2, SX, SZ

GRID = np.linspace(0, 2 * np.pi, 201)


@pytest.fixture
def plus_kahler(plus_state):
    return build_kahler(plus_state)


def test_flow_group_law(plus_kahler, rng):
    K = plus_kahler
    h = M2.random_hermitian(rng)
    p0 = random_point(K, rng)
    assert np.allclose(flow(K, h, p0, 0.0).coords, p0.coords, atol=0)
    s, t = 0.7, -1.9
    F = flow_matrix(K, h, s) @ flow_matrix(K, h, t)
    assert np.abs(F - flow_matrix(K, h, s + t)).max() < 1e-11
    for t in np.linspace(-5, 5, 11):
        assert abs(K.g(flow(K, h, p0, t), flow(K, h, p0, t)) - K.g(p0, p0)) < 1e-10


def test_unit_generator_is_phase(rng):
    K = build_kahler(random_state(MatrixAlgebra([2, 1]), rng, rank=2))
    u = K.algebra.unit()
    b = K.algebra.random_hermitian(rng)
    vals = expectation_trajectory(K, u, b, cyclic_point(K), GRID[::10])
    assert np.ptp(vals) < 1e-12


def test_energy_conservation(plus_kahler, rng):
    h = M2.random_hermitian(rng)
    vals = expectation_trajectory(plus_kahler, h, h, cyclic_point(plus_kahler), GRID[::5])
    assert np.abs(np.subtract(vals, evaluate(plus_kahler.state, h))).max() < 1e-12


def test_plus_state_cosine(plus_kahler, plus_state):
    kahler = np.array(expectation_trajectory(plus_kahler, SZ, SX, cyclic_point(plus_kahler), GRID))
    oracle = np.array(hilbert_trajectory(plus_state, SZ, SX, GRID))
    # Heisenberg picture, written independently of hilbert_trajectory
    psi = np.array([1, 1]) / np.sqrt(2)
    heis = [np.vdot(psi, scipy.linalg.expm(1j * t * SZ.blocks[0]) @ SX.blocks[0]
                    @ scipy.linalg.expm(-1j * t * SZ.blocks[0]) @ psi).real for t in GRID]
    assert np.abs(oracle - heis).max() < 1e-13
    assert np.abs(oracle - np.cos(2 * GRID)).max() < 1e-13
    assert np.abs(kahler - oracle).max() < 1e-8


def test_diagram_unit_observable(plus_state):
    assert check_commuting_diagram(M2, plus_state, SZ, M2.unit(), GRID) < 1e-12


def test_diagram_mixed_direct_sum(rng):
    phi = random_state(MatrixAlgebra([2, 1]), rng)
    h, b = phi.algebra.random_hermitian(rng), phi.algebra.random_hermitian(rng)
    assert check_commuting_diagram(phi.algebra, phi, h, b, GRID) < 1e-8


def test_invariance_and_rate(rng):
    K = build_kahler(random_state(MatrixAlgebra([3]), rng, rank=2))
    h, b = K.algebra.random_hermitian(rng), K.algebra.random_hermitian(rng)
    rg, rw = flow_invariance_residuals(K, h, 3.0)
    assert rg < 1e-10 and rw < 1e-10
    assert poisson_rate_residual(K, h, b, random_point(K, rng), 0.4) < 1e-6
    assert generator(K, h).shape == (K.dim, K.dim)


def test_trajectory_result(plus_kahler):
    res = trajectory(plus_kahler, SZ, cyclic_point(plus_kahler), [0.0, 1.0], {"sx": SX})
    assert res.times == [0.0, 1.0] and len(res.points) == 2
    assert res.observables["sx"][1] == pytest.approx(np.cos(2.0), abs=1e-12)
    assert res.observables["sx"][0] == pytest.approx(eval_f(plus_kahler, SX, cyclic_point(plus_kahler)))
