"""The map a -> f_a into functions on the Kahler manifold, and its checks.

Every algebra element acts linearly on the quotient through the class of
``(b, c) -> (a o b - {a, c}, {a, b} + a o c)``, i.e. left multiplication on
``b + ic``.  With ``A`` that action in quotient coordinates,
``f_a(p) = 1/2 p.G.A.p`` and the Hamiltonian field of ``f_a`` is ``-Jm A p``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import InputError, JlbElement, jlb_norm, jordan, lie
from .kahler import KahlerPoint, KahlerStructure, PairVector, project
from .states import DEFAULT_RANK_CUTOFF


@dataclass(frozen=True, eq=False)
class RepresentedObservable:
    element: JlbElement
    A: np.ndarray
    structure: KahlerStructure

    def complex_linearity_residual(self) -> float:
        K = self.structure
        return float(np.abs(self.A @ K.Jm - K.Jm @ self.A).max())

    def self_adjoint_residual(self) -> float:
        """Matrix form of g(xi_a, xi_bc) = g(xi_ba, xi_c)."""
        K = self.structure
        return float(np.abs(self.A.T @ K.G - K.G @ self.A).max())


@dataclass(frozen=True, eq=False)
class TangentVector:
    base: KahlerPoint
    coords: np.ndarray

    def __post_init__(self):
        if self.coords.shape != self.base.coords.shape:
            raise InputError("tangent vector and base point dimensions differ")


def _pt(K: KahlerStructure, p) -> np.ndarray:
    if isinstance(p, KahlerPoint):
        if p.structure is not K:
            raise InputError("point belongs to a different structure")
        return p.coords
    return np.asarray(p, dtype=float)


def xi_ab(K: KahlerStructure, a: JlbElement, b: JlbElement) -> KahlerPoint:
    """Class of (a o b, {a, b})."""
    return project(K, PairVector(jordan(a, b), lie(a, b)))


def pair_action_matrix(K: KahlerStructure, a: JlbElement) -> np.ndarray:
    """Action of ``a`` on pair coordinates (before passing to the quotient)."""
    Mj, Ml = K.algebra.multiplication_matrices(a)
    n = Mj.shape[0]
    out = np.empty((2 * n, 2 * n))
    out[:n, :n] = out[n:, n:] = Mj
    out[:n, n:] = -Ml
    out[n:, :n] = Ml
    return out


def action_matrix(K: KahlerStructure, a: JlbElement) -> RepresentedObservable:
    if a.algebra != K.algebra:
        raise InputError("element and structure belong to different algebras")
    A = K.projector @ pair_action_matrix(K, a) @ K.lifts_matrix
    return RepresentedObservable(a, A, K)


def _A(K: KahlerStructure, a) -> np.ndarray:
    if isinstance(a, RepresentedObservable):
        return a.A
    return action_matrix(K, a).A


def eval_f(K: KahlerStructure, a, p) -> float:
    """f_a(p) = 1/2 g(p, A p)."""
    x = _pt(K, p)
    return 0.5 * float(x @ K.G @ _A(K, a) @ x)


def eval_f_additive(K: KahlerStructure, a: JlbElement, b: JlbElement, c: JlbElement) -> float:
    """Additive reading f_a(xi_b) + f_a(J xi_c), kept only as a diagnostic.

    Each summand is 1/2 g(xi_x, xi_{ax}); it agrees with ``eval_f`` when
    ``b`` or ``c`` vanishes or when ``b == c``.
    """
    def half(x):
        return 0.5 * K.g(project(K, PairVector(x, K.algebra.zero())), xi_ab(K, a, x))
    return half(b) + half(c)


def differential(K: KahlerStructure, a, p) -> np.ndarray:
    """Coordinates of df_a at p: df_a(Z) = g(Z, A p)."""
    x = _pt(K, p)
    return K.G @ _A(K, a) @ x


def hamiltonian_field(K: KahlerStructure, a, p) -> TangentVector:
    """X with Omega(X, .) = df_a, solved through the inverse symplectic matrix."""
    base = p if isinstance(p, KahlerPoint) else K.point(p)
    df = differential(K, a, base)
    # Omega(X, Z) = X.W.Z, so W.T X = df
    return TangentVector(base, K.Winv.T @ df)


def schrodinger_field(K: KahlerStructure, a, p) -> TangentVector:
    """-J applied to the action vector A p; does not touch W."""
    base = p if isinstance(p, KahlerPoint) else K.point(p)
    return TangentVector(base, -K.Jm @ (_A(K, a) @ base.coords))


def fn_jordan(K: KahlerStructure, a, b, p) -> float:
    xa = hamiltonian_field(K, a, p).coords
    xb = hamiltonian_field(K, b, p).coords
    return 0.5 * float(xa @ K.G @ xb)


def fn_poisson(K: KahlerStructure, a, b, p) -> float:
    xa = hamiltonian_field(K, a, p).coords
    xb = hamiltonian_field(K, b, p).coords
    return 0.5 * float(xa @ K.W @ xb)


def function_norm(K: KahlerStructure, a) -> float:
    """sup |f_a| over the sphere g(p, p) = 2, from the pencil (G A, G)."""
    GA = K.G @ _A(K, a)
    GA = (GA + GA.T) / 2
    ev = scipy.linalg.eigh(GA, K.G, eigvals_only=True)
    return float(np.abs(ev).max())


def cyclic_point(K: KahlerStructure) -> KahlerPoint:
    """Class of (1, 1)."""
    u = K.algebra.unit()
    return project(K, PairVector(u, u))


def span_rank(K: KahlerStructure, p, cutoff: float = DEFAULT_RANK_CUTOFF) -> int:
    """Rank of the Hamiltonian fields of the Hermitian basis at p."""
    x = _pt(K, p)
    if not np.any(x):
        raise InputError("span rank is undefined at the zero point")
    cols = [hamiltonian_field(K, e, x).coords for e in K.algebra.hermitian_basis]
    s = np.linalg.svd(np.column_stack(cols), compute_uv=False)
    return int((s > cutoff * s.max()).sum())


def random_point(K: KahlerStructure, rng: np.random.Generator) -> KahlerPoint:
    return K.point(rng.uniform(-1, 1, K.dim))


# -- identity residuals -------------------------------------------------------

def action_symmetry_residual(K: KahlerStructure, a: JlbElement, b: JlbElement, c: JlbElement) -> float:
    """|g(xi_a, xi_bc) - g(xi_ba, xi_c)| from the defining pair classes."""
    zero = K.algebra.zero()
    xa = project(K, PairVector(a, zero))
    xc = project(K, PairVector(c, zero))
    return abs(K.g(xa, xi_ab(K, b, c)) - K.g(xi_ab(K, b, a), xc))


def field_agreement_residual(K: KahlerStructure, a, p) -> float:
    """Max coordinate gap between Hamiltonian and Schrodinger fields."""
    return float(np.abs(hamiltonian_field(K, a, p).coords
                        - schrodinger_field(K, a, p).coords).max())


def representation_residuals(K: KahlerStructure, a: JlbElement, b: JlbElement,
                             c: JlbElement) -> tuple[float, float]:
    """Gaps in g(xi_c, xi_{(a o b)c}) = g(xi_ac, xi_bc) and
    g(xi_c, xi_{{a,b}c}) = Omega(xi_ac, xi_bc)."""
    xc = project(K, PairVector(c, K.algebra.zero()))
    xac, xbc = xi_ab(K, a, c), xi_ab(K, b, c)
    ra = abs(K.g(xc, xi_ab(K, jordan(a, b), c)) - K.g(xac, xbc))
    rb = abs(K.g(xc, xi_ab(K, lie(a, b), c)) - K.omega(xac, xbc))
    return ra, rb


def jacobi_residual(K: KahlerStructure, a: JlbElement, b: JlbElement,
                    c: JlbElement, p) -> float:
    """Cyclic sum of {f_a, {f_b, f_c}} at p, using f_{b,c} for inner brackets."""
    total = (fn_poisson(K, a, lie(b, c), p) + fn_poisson(K, b, lie(c, a), p)
             + fn_poisson(K, c, lie(a, b), p))
    return abs(total)


@dataclass(frozen=True)
class RepresentationReport:
    jordan_residual: float
    poisson_residual: float
    norm_excess: float  # max of |f_a| - |a|; nonpositive when the bound holds
    sample_count: int
    tol: float

    @property
    def passed(self) -> bool:
        return (self.jordan_residual < self.tol and self.poisson_residual < self.tol
                and self.norm_excess <= self.tol)


def verify_representation(K: KahlerStructure, sample_count: int = 200, seed: int = 0,
                          tol: float = 1e-9, pairs=None) -> RepresentationReport:
    """Homomorphism residuals at random points and the norm bound |f_a| <= |a|."""
    rng = np.random.default_rng(seed)
    alg = K.algebra
    if pairs is None:
        pairs = [(alg.random_hermitian(rng), alg.random_hermitian(rng))
                 for _ in range(sample_count)]
    rj = rp = 0.0
    excess = -np.inf
    for a, b in pairs:
        p = random_point(K, rng)
        ra, rb = action_matrix(K, a), action_matrix(K, b)
        rj = max(rj, abs(fn_jordan(K, ra, rb, p) - eval_f(K, jordan(a, b), p)))
        rp = max(rp, abs(fn_poisson(K, ra, rb, p) - eval_f(K, lie(a, b), p)))
        excess = max(excess, function_norm(K, ra) - jlb_norm(a))
    return RepresentationReport(rj, rp, float(excess), len(pairs), tol)
