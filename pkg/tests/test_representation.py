import numpy as np
import pytest

from jlbkahler.algebra import InputError, MatrixAlgebra, jlb_norm
from jlbkahler.kahler import PairVector, build_kahler, project
from jlbkahler.representation import (
    action_matrix,
    cyclic_point,
    eval_f,
    fn_jordan,
    fn_poisson,
    function_norm,
    hamiltonian_field,
    jacobi_residual,
    action_symmetry_residual,
    field_agreement_residual,
    representation_residuals,
    random_point,
    schrodinger_field,
    span_rank,
    verify_representation,
    xi_ab,
)
from jlbkahler.states import evaluate, random_state

from conftest import M2, SX, SY, SZ, pure


@pytest.fixture
def mixed_kahler(rng):
    return build_kahler(random_state(MatrixAlgebra([2, 1]), rng, rank=2))


class TestXi:
    def test_unit_slots(self, e1_kahler, rng):
        K, u, z = e1_kahler, M2.unit(), M2.zero()
        b = M2.random_hermitian(rng)
        want = project(K, PairVector(b, z)).coords
        assert np.allclose(xi_ab(K, u, b).coords, want, atol=1e-14)
        assert np.allclose(xi_ab(K, b, u).coords, want, atol=1e-14)

    def test_pauli(self, e1_kahler):
        K = e1_kahler
        want = project(K, PairVector(M2.zero(), SZ)).coords
        assert np.allclose(xi_ab(K, SX, SY).coords, want, atol=1e-14)


class TestActionMatrix:
    def test_unit(self, mixed_kahler):
        K = mixed_kahler
        assert np.abs(action_matrix(K, K.algebra.unit()).A - np.eye(K.dim)).max() < 1e-13

    def test_linear(self, mixed_kahler, rng):
        K, alg = mixed_kahler, mixed_kahler.algebra
        a, b = alg.random_hermitian(rng), alg.random_hermitian(rng)
        lhs = action_matrix(K, 2.5 * a - 0.75 * b).A
        rhs = 2.5 * action_matrix(K, a).A - 0.75 * action_matrix(K, b).A
        assert np.abs(lhs - rhs).max() < 1e-11

    def test_self_adjoint(self, mixed_kahler, rng):
        K = mixed_kahler
        for _ in range(100):
            ro = action_matrix(K, K.algebra.random_hermitian(rng))
            assert ro.self_adjoint_residual() < 1e-10
            assert ro.complex_linearity_residual() < 1e-10

    def test_foreign_algebra(self, e1_kahler):
        with pytest.raises(InputError):
            action_matrix(e1_kahler, MatrixAlgebra([3]).unit())


class TestFunctions:
    def test_cyclic_recovery(self, mixed_kahler):
        K = mixed_kahler
        nu = cyclic_point(K)
        for e in K.algebra.hermitian_basis:
            assert eval_f(K, e, nu) == pytest.approx(evaluate(K.state, e), abs=1e-12)
        assert eval_f(K, K.algebra.unit(), nu) == pytest.approx(1.0, abs=1e-14)

    def test_qubit_values(self, e1_kahler):
        K = e1_kahler
        nu = cyclic_point(K)
        assert K.g(nu, nu) == pytest.approx(2.0)
        assert eval_f(K, SZ, nu) == pytest.approx(1.0)
        assert eval_f(K, M2.unit(), nu) == pytest.approx(1.0)
        assert eval_f(K, SX, K.point(np.zeros(4))) == 0.0

    def test_unit_field_is_rotation(self, mixed_kahler, rng):
        K = mixed_kahler
        p = random_point(K, rng)
        X = hamiltonian_field(K, K.algebra.unit(), p).coords
        assert np.abs(X + K.Jm @ p.coords).max() < 1e-12
        nu = cyclic_point(K)
        assert np.abs(schrodinger_field(K, K.algebra.unit(), nu).coords + K.Jm @ nu.coords).max() < 1e-13

    def test_field_tangent_to_sphere(self, mixed_kahler, rng):
        K = mixed_kahler
        for _ in range(20):
            p = random_point(K, rng)
            X = hamiltonian_field(K, K.algebra.random_hermitian(rng), p)
            assert abs(K.g(p, X.coords)) < 1e-10
        assert not np.any(hamiltonian_field(K, K.algebra.unit(), np.zeros(K.dim)).coords)

    def test_omega_of_field_is_differential(self, mixed_kahler, rng):
        # Omega(X_a, Z) = df_a(Z), checked by finite differences
        K = mixed_kahler
        a = K.algebra.random_hermitian(rng)
        p, z = rng.normal(size=K.dim), rng.normal(size=K.dim)
        h = 1e-6
        fd = (eval_f(K, a, p + h * z) - eval_f(K, a, p - h * z)) / (2 * h)
        assert K.omega(hamiltonian_field(K, a, p).coords, z) == pytest.approx(fd, abs=1e-7)

    def test_field_agreement(self, mixed_kahler, rng):
        K = mixed_kahler
        for _ in range(100):
            a, p = K.algebra.random_hermitian(rng), random_point(K, rng)
            assert field_agreement_residual(K, a, p) < 1e-10
        assert field_agreement_residual(K, K.algebra.unit(), np.zeros(K.dim)) == 0

    def test_binary_operations(self, e1_kahler, rng):
        K = e1_kahler
        nu = cyclic_point(K)
        a = M2.random_hermitian(rng)
        assert fn_jordan(K, a, M2.unit(), nu) == pytest.approx(evaluate(K.state, a), abs=1e-13)
        assert fn_poisson(K, a, a, random_point(K, rng)) == pytest.approx(0.0, abs=1e-14)
        assert fn_poisson(K, SX, SY, nu) == pytest.approx(1.0, abs=1e-13)

    def test_homomorphism(self, e1_kahler, mixed_kahler):
        for K in (e1_kahler, mixed_kahler):
            rep = verify_representation(K, 200, seed=4)
            assert rep.passed, rep
        u = M2.unit()
        rep = verify_representation(e1_kahler, pairs=[(u, u)])
        assert rep.jordan_residual < 1e-12 and rep.poisson_residual < 1e-12

    def test_action_identities(self, mixed_kahler, rng):
        K = mixed_kahler
        for _ in range(50):
            a, b, c = (K.algebra.random_hermitian(rng) for _ in range(3))
            assert action_symmetry_residual(K, a, b, c) < 1e-10
            ra, rb = representation_residuals(K, a, b, c)
            assert ra < 1e-10 and rb < 1e-10
            assert jacobi_residual(K, a, b, c, random_point(K, rng)) < 1e-10


class TestNorm:
    def test_unit(self, e1_kahler):
        assert function_norm(e1_kahler, M2.unit()) == pytest.approx(1.0, abs=1e-12)

    def test_bound(self, mixed_kahler, rng):
        K = mixed_kahler
        for _ in range(50):
            a = K.algebra.random_hermitian(rng)
            assert function_norm(K, a) <= jlb_norm(a) + 1e-10

    def test_sphere_sampling_oracle(self, mixed_kahler, rng):
        # sampled sup of |f_a| on g(p, p) = 2 never exceeds the pencil value
        K = mixed_kahler
        a = K.algebra.random_hermitian(rng)
        L = np.linalg.cholesky(K.G)
        best = 0.0
        for _ in range(2000):
            y = rng.normal(size=K.dim)
            p = np.linalg.solve(L.T, y) * np.sqrt(2) / np.linalg.norm(y)
            best = max(best, abs(eval_f(K, a, p)))
        assert best <= function_norm(K, a) + 1e-12
        assert best > 0.5 * function_norm(K, a)


class TestSpanRank:
    def test_pure_qubit(self, e1_kahler):
        K = e1_kahler
        nu = cyclic_point(K)
        assert span_rank(K, nu) == 3
        assert span_rank(K, 2.0 * nu.coords) == 3

    def test_scalars(self, rng):
        K = build_kahler(pure(MatrixAlgebra([1]), [1]))
        assert span_rank(K, rng.normal(size=2)) == 1

    def test_zero_point(self, e1_kahler):
        with pytest.raises(InputError):
            span_rank(e1_kahler, np.zeros(4))
