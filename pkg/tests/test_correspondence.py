import numpy as np
import pytest

from jlbkahler.algebra import CstarElement, InputError, JlbElement, MatrixAlgebra, cstar_norm
from jlbkahler.correspondence import (
    HomomorphismTable,
    complexify,
    product_transport_check,
    sa_decompose,
    transport_hom,
    transport_residuals,
)

from conftest import M2, SX, SY, herm


def test_decompose_examples():
    a, b = sa_decompose(CstarElement(M2, [[[0, 1], [0, 0]]]))
    assert a.allclose(0.5 * SX) and b.allclose(0.5 * SY)
    a, b = sa_decompose(SX.embed())
    assert a.allclose(SX) and b.allclose(M2.zero())
    a, b = sa_decompose(CstarElement(M2, [1j * np.eye(2)]))
    assert a.allclose(M2.zero()) and b.allclose(M2.unit())


def test_complexify_examples():
    c = complexify(0.5 * SX, 0.5 * SY)
    assert np.allclose(c.blocks[0], [[0, 1], [0, 0]])
    assert np.allclose(complexify(SX, M2.zero()).blocks[0], SX.blocks[0])
    assert np.allclose(complexify(M2.zero(), M2.zero()).blocks[0], 0)


def test_round_trip(rng):
    alg = MatrixAlgebra([3, 2])
    for _ in range(50):
        c = alg.random_cstar(rng)
        assert cstar_norm(complexify(*sa_decompose(c)) - c) < 1e-14


def test_product_transport(rng):
    for _ in range(50):
        a, b = M2.random_hermitian(rng), M2.random_hermitian(rng)
        assert product_transport_check(a, b) < 1e-12
    assert product_transport_check(M2.unit(), SX) < 1e-15
    d1, d2 = herm(M2, np.diag([1.0, 3.0])), herm(M2, np.diag([-2.0, 0.5]))
    assert product_transport_check(d1, d2) == 0.0


def test_identity_hom(rng):
    F = transport_hom(HomomorphismTable.from_function(M2, M2, lambda a: a))
    c = M2.random_cstar(rng)
    assert cstar_norm(F(c) - c) < 1e-14


def test_unitary_conjugation(rng):
    u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    f = HomomorphismTable.from_function(
        M2, M2, lambda a: JlbElement(M2, [u.conj().T @ a.blocks[0] @ u]))
    F = transport_hom(f)
    c = M2.random_cstar(rng)
    assert np.allclose(F(c).blocks[0], u.conj().T @ c.blocks[0] @ u, atol=1e-13)
    res = transport_residuals(F, M2, samples=50, seed=3)
    assert res["multiplicative"] < 1e-11
    assert res["involution"] < 1e-11 and res["unit"] < 1e-12


def test_block_swap():
    alg = MatrixAlgebra([2, 2])
    f = HomomorphismTable.from_function(alg, alg, lambda a: JlbElement(alg, a.blocks[::-1]))
    F = transport_hom(f)
    c = CstarElement(alg, [[[1, 2j], [0, 3]], [[0, 0], [1j, -1]]])
    out = F(c)
    assert np.allclose(out.blocks[0], c.blocks[1]) and np.allclose(out.blocks[1], c.blocks[0])


def test_non_homomorphism_rejected():
    f = HomomorphismTable.from_function(M2, M2, lambda a: 2.0 * a)
    with pytest.raises(InputError):
        transport_hom(f)
