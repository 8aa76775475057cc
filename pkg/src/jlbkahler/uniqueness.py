"""Second triples for the same state and the Kahler isomorphism between them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.stats import ortho_group

from .algebra import InputError
from .kahler import KahlerPoint, KahlerStructure, build_kahler, change_basis
from .representation import action_matrix, cyclic_point, eval_f, hamiltonian_field
from .states import evaluate

RECIPES = ("permute", "orthogonal-mix", "reorder-eigenbasis")


class CyclicityError(RuntimeError):
    """The Hamiltonian directions at the cyclic point do not span the manifold."""


def random_orthogonal(dim: int, seed: int) -> np.ndarray:
    if dim == 1:
        return np.eye(1)
    return ortho_group.rvs(dim, random_state=seed)


def rebase(K: KahlerStructure, recipe: str = "orthogonal-mix", seed: int = 0,
           permutation=None) -> KahlerStructure:
    """Structurally different coordinates for the same quotient.

    ``permute`` reorders the basis (``permutation`` overrides the seeded
    one), ``orthogonal-mix`` applies a random orthogonal change of
    coordinates, ``reorder-eigenbasis`` rebuilds the quotient basis from the
    pair Gram eigenvectors taken in ascending order.
    """
    if recipe == "permute":
        perm = (np.random.default_rng(seed).permutation(K.dim)
                if permutation is None else np.asarray(permutation))
        return change_basis(K, np.eye(K.dim)[perm])
    if recipe == "orthogonal-mix":
        return change_basis(K, random_orthogonal(K.dim, seed))
    if recipe == "reorder-eigenbasis":
        return build_kahler(K.state, K.algebra, rank_cutoff=K.rank_cutoff, order="ascending")
    raise InputError(f"unknown rebase recipe {recipe!r}; expected one of {RECIPES}")


@dataclass(frozen=True, eq=False)
class KahlerIso:
    source: KahlerStructure
    target: KahlerStructure
    U: np.ndarray
    solve_residual: float

    def residuals(self) -> dict[str, float]:
        K, K2, U = self.source, self.target, self.U
        nu, nu2 = cyclic_point(K), cyclic_point(K2)
        return {
            "isometry": float(np.abs(U.T @ K2.G @ U - K.G).max()),
            "symplectomorphism": float(np.abs(U.T @ K2.W @ U - K.W).max()),
            "j_intertwining": float(np.abs(U @ K.Jm - K2.Jm @ U).max()),
            "nu_matching": float(np.abs(U @ nu.coords - nu2.coords).max()),
        }

    def __call__(self, p: KahlerPoint) -> KahlerPoint:
        return KahlerPoint(self.target, self.U @ p.coords)


def _spanning_set(K: KahlerStructure) -> np.ndarray:
    nu = cyclic_point(K).coords
    cols = [action_matrix(K, e).A @ nu for e in K.algebra.hermitian_basis]
    S = np.column_stack(cols)
    return np.hstack([S, K.Jm @ S])


def find_iso(K: KahlerStructure, K2: KahlerStructure, rank_cutoff: float = 1e-9) -> KahlerIso:
    """Linear intertwiner sending A_e nu to A'_e nu' and J A_e nu to J' A'_e nu'."""
    if K.algebra != K2.algebra or K.dim != K2.dim:
        raise InputError("structures come from different algebras or dimensions")
    S, S2 = _spanning_set(K), _spanning_set(K2)
    sv = np.linalg.svd(S, compute_uv=False)
    if int((sv > rank_cutoff * sv.max()).sum()) < K.dim:
        raise CyclicityError("Hamiltonian directions at nu do not span the tangent space")
    # U S = S2  <=>  S.T U.T = S2.T; gelsy is a pivoted complete orthogonal factorization
    Ut, _, _, _ = scipy.linalg.lstsq(S.T, S2.T, lapack_driver="gelsy")
    U = Ut.T
    resid = float(np.abs(U @ S - S2).max())
    return KahlerIso(K, K2, U, resid)


def verify_iso_representation(iso: KahlerIso, samples: int = 100, seed: int = 0) -> float:
    """Sup over random a and p of |f'_a(U p) - f_a(p)|."""
    rng = np.random.default_rng(seed)
    K, K2 = iso.source, iso.target
    worst = 0.0
    for _ in range(samples):
        a = K.algebra.random_hermitian(rng)
        p = rng.uniform(-1, 1, K.dim)
        worst = max(worst, abs(eval_f(K2, a, iso.U @ p) - eval_f(K, a, p)))
    return worst


def intertwining_residual(iso: KahlerIso) -> float:
    """max over basis a of |U A_a - A'_a U|."""
    K, K2, U = iso.source, iso.target, iso.U
    return max(float(np.abs(U @ action_matrix(K, e).A - action_matrix(K2, e).A @ U).max())
               for e in K.algebra.hermitian_basis)


def pushforward_residual(iso: KahlerIso, p: np.ndarray) -> float:
    """max over basis a of |U X_a(p) - X'_a(U p)|."""
    K, K2, U = iso.source, iso.target, iso.U
    return max(float(np.abs(U @ hamiltonian_field(K, e, p).coords
                            - hamiltonian_field(K2, e, U @ p).coords).max())
               for e in K.algebra.hermitian_basis)


def cyclic_recovery_residual(K: KahlerStructure) -> float:
    """max over basis a of |f_a(nu) - phi(a)|."""
    nu = cyclic_point(K)
    return max(abs(eval_f(K, e, nu) - evaluate(K.state, e)) for e in K.algebra.hermitian_basis)
