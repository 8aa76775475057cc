"""The linear Kahler manifold A x A / ker(phi) attached to a state.

Pair coordinates are the Hermitian-basis coordinates of ``a`` followed by
those of ``b``.  Writing ``x = a + ib``, the pair Gram matrix is
``Re phi(x^* y)`` and the pair symplectic matrix is ``Im phi(x^* y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import InputError, JlbElement, MatrixAlgebra
from .states import DEFAULT_RANK_CUTOFF, StateFunctional, jordan_gram, lie_gram


@dataclass(frozen=True)
class PairVector:
    first: JlbElement
    second: JlbElement

    def __post_init__(self):
        if self.first.algebra != self.second.algebra:
            raise InputError("pair components belong to different algebras")

    @property
    def algebra(self) -> MatrixAlgebra:
        return self.first.algebra

    def coords(self) -> np.ndarray:
        alg = self.algebra
        return np.concatenate([alg.coords(self.first), alg.coords(self.second)])

    @classmethod
    def from_coords(cls, algebra: MatrixAlgebra, v) -> "PairVector":
        n = algebra.real_dim
        v = np.asarray(v, dtype=float)
        return cls(algebra.element(v[:n]), algebra.element(v[n:]))


def pair_J(n: int) -> np.ndarray:
    """Matrix of (a, b) -> (-b, a) on pair coordinates."""
    eye, zero = np.eye(n), np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def pair_gram(phi: StateFunctional, algebra: MatrixAlgebra | None = None) -> np.ndarray:
    """g((a,b),(c,d)) = phi(a o c) - phi({a,d}) + phi({b,c}) + phi(b o d)."""
    _match(phi, algebra)
    g1, s = jordan_gram(phi), lie_gram(phi)
    out = np.block([[g1, -s], [s, g1]])
    return (out + out.T) / 2


def pair_symplectic(phi: StateFunctional, algebra: MatrixAlgebra | None = None) -> np.ndarray:
    """W((a,b),(c,d)) = phi({a,c}) + phi(a o d) - phi(b o c) + phi({b,d})."""
    _match(phi, algebra)
    g1, s = jordan_gram(phi), lie_gram(phi)
    out = np.block([[s, g1], [-g1, s]])
    return (out - out.T) / 2


def _match(phi: StateFunctional, algebra: MatrixAlgebra | None) -> None:
    if algebra is not None and algebra != phi.algebra:
        raise InputError("state and algebra do not match")


@dataclass(frozen=True, eq=False)
class KahlerStructure:
    """Quotient coordinates ``c`` stand for the pair ``lifts @ c``.

    ``G``, ``W``, ``Jm`` are metric, symplectic form and complex structure
    in these coordinates; ``Omega(X, Y) = X.T @ W @ Y``.  ``projector`` maps
    pair coordinates to quotient coordinates.  Hand-built structures may
    leave algebra/state/lifts unset.
    """

    G: np.ndarray
    W: np.ndarray
    Jm: np.ndarray
    algebra: MatrixAlgebra | None = None
    state: StateFunctional | None = None
    lifts_matrix: np.ndarray | None = None
    projector: np.ndarray | None = None
    rank_cutoff: float = DEFAULT_RANK_CUTOFF
    Winv: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "Winv", np.linalg.inv(self.W))

    @classmethod
    def from_matrices(cls, G, W, Jm) -> "KahlerStructure":
        return cls(np.asarray(G, float), np.asarray(W, float), np.asarray(Jm, float))

    @property
    def dim(self) -> int:
        """Real dimension 2m."""
        return self.G.shape[0]

    @property
    def m(self) -> int:
        return self.dim // 2

    @property
    def lifts(self) -> list[PairVector]:
        return [PairVector.from_coords(self.algebra, col) for col in self.lifts_matrix.T]

    def point(self, coords) -> "KahlerPoint":
        return KahlerPoint(self, np.asarray(coords, dtype=float))

    def g(self, x, y) -> float:
        return float(_c(x) @ self.G @ _c(y))

    def omega(self, x, y) -> float:
        return float(_c(x) @ self.W @ _c(y))


def _c(x) -> np.ndarray:
    return x.coords if isinstance(x, KahlerPoint) else np.asarray(x, dtype=float)


@dataclass(frozen=True, eq=False)
class KahlerPoint:
    structure: KahlerStructure
    coords: np.ndarray

    def __post_init__(self):
        if self.coords.shape != (self.structure.dim,):
            raise InputError(f"point needs {self.structure.dim} coordinates")
        if not np.all(np.isfinite(self.coords)):
            raise InputError("point coordinates must be finite")

    def __add__(self, other: "KahlerPoint") -> "KahlerPoint":
        return KahlerPoint(self.structure, self.coords + other.coords)

    def __sub__(self, other: "KahlerPoint") -> "KahlerPoint":
        return KahlerPoint(self.structure, self.coords - other.coords)

    def __mul__(self, s: float) -> "KahlerPoint":
        return KahlerPoint(self.structure, float(s) * self.coords)

    __rmul__ = __mul__

    def __neg__(self) -> "KahlerPoint":
        return KahlerPoint(self.structure, -self.coords)


def j_adapted_basis(vectors: np.ndarray, J: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis v_1..v_m, Jv_1..Jv_m of the span of ``vectors``.

    ``J`` must be orthogonal with J^2 = -1 and the span J-invariant.
    Candidates are taken in column order.
    """
    chosen: list[np.ndarray] = []
    for v in vectors.T:
        for _ in range(2):  # re-orthogonalize once for stability
            for u in chosen:
                v = v - (u @ v) * u
                v = v - ((J @ u) @ v) * (J @ u)
        nv = np.linalg.norm(v)
        if nv > tol:
            chosen.append(v / nv)
    if not chosen:
        return np.zeros((vectors.shape[0], 0))
    V = np.column_stack(chosen)
    return np.hstack([V, J @ V])


def build_kahler(phi: StateFunctional, algebra: MatrixAlgebra | None = None,
                 rank_cutoff: float = DEFAULT_RANK_CUTOFF,
                 order: str = "descending") -> KahlerStructure:
    """Quotient by the null space of the pair Gram matrix and express g, Omega, J.

    ``order`` selects whether eigenvectors are consumed by descending or
    ascending eigenvalue when building the J-adapted basis.
    """
    _match(phi, algebra)
    alg = phi.algebra
    n = alg.real_dim
    gp = pair_gram(phi)
    wp = pair_symplectic(phi)
    jp = pair_J(n)
    evals, evecs = np.linalg.eigh(gp)
    top = evals.max()
    keep = evals > rank_cutoff * top
    rank = int(keep.sum())
    if rank == 0:
        raise InputError("functional is not a state: pair Gram matrix vanishes")
    idx = np.flatnonzero(keep)
    idx = idx[::-1] if order == "descending" else idx
    if order not in ("descending", "ascending"):
        raise InputError(f"unknown eigenvector order {order!r}")
    L = j_adapted_basis(evecs[:, idx], jp)
    if L.shape[1] != rank:
        raise InputError(f"quotient rank {rank} is not J-invariant (got {L.shape[1]})")
    return _structure_from_lifts(phi, L, gp, wp, rank_cutoff)


def _structure_from_lifts(phi, L, gp, wp, rank_cutoff) -> KahlerStructure:
    n = phi.algebra.real_dim
    G = L.T @ gp @ L
    G = (G + G.T) / 2
    W = L.T @ wp @ L
    W = (W - W.T) / 2
    # J L = L Jm; solve in the G-metric since L spans a complement of the kernel
    proj = np.linalg.solve(G, L.T @ gp)
    Jm = proj @ pair_J(n) @ L
    return KahlerStructure(G=G, W=W, Jm=Jm, algebra=phi.algebra, state=phi,
                           lifts_matrix=L, projector=proj, rank_cutoff=rank_cutoff)


def change_basis(K: KahlerStructure, T: np.ndarray) -> KahlerStructure:
    """Same manifold in new coordinates ``c' = T c``."""
    T = np.asarray(T, dtype=float)
    Ti = np.linalg.inv(T)
    G = Ti.T @ K.G @ Ti
    W = Ti.T @ K.W @ Ti
    return KahlerStructure(
        G=(G + G.T) / 2, W=(W - W.T) / 2, Jm=T @ K.Jm @ Ti,
        algebra=K.algebra, state=K.state,
        lifts_matrix=None if K.lifts_matrix is None else K.lifts_matrix @ Ti,
        projector=None if K.projector is None else T @ K.projector,
        rank_cutoff=K.rank_cutoff)


def project(K: KahlerStructure, p: PairVector | np.ndarray) -> KahlerPoint:
    """Quotient coordinates of a pair; kernel elements go to zero."""
    if isinstance(p, PairVector):
        if p.algebra != K.algebra:
            raise InputError("pair and structure belong to different algebras")
        v = p.coords()
    else:
        v = np.asarray(p, dtype=float)
    return KahlerPoint(K, K.projector @ v)


def lift(K: KahlerStructure, x: KahlerPoint) -> PairVector:
    return PairVector.from_coords(K.algebra, K.lifts_matrix @ x.coords)


def apply_J(K: KahlerStructure, p: KahlerPoint) -> KahlerPoint:
    if p.structure is not K:
        raise InputError("point belongs to a different structure")
    return KahlerPoint(K, K.Jm @ p.coords)


@dataclass(frozen=True)
class KahlerCheck:
    name: str
    value: float
    threshold: float
    kind: str = "max"  # "max": value < threshold; "min": value > threshold

    @property
    def passed(self) -> bool:
        if self.kind == "max":
            return self.value < self.threshold
        return self.value > self.threshold


@dataclass(frozen=True)
class KahlerReport:
    checks: tuple[KahlerCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> KahlerCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _maxabs(x: np.ndarray) -> float:
    return float(np.abs(x).max(initial=0.0))


def verify_kahler(K: KahlerStructure, tol: float = 1e-10, margin: float = 1e-9) -> KahlerReport:
    """Residuals of every Kahler axiom; definiteness checks are relative margins."""
    G, W, J = K.G, K.W, K.Jm
    I = np.eye(K.dim)
    geig = np.linalg.eigvalsh((G + G.T) / 2)
    weig = np.abs(np.linalg.eigvals(W))
    checks = [
        KahlerCheck("g_symmetric", _maxabs(G - G.T), tol),
        KahlerCheck("g_positive_margin", float(geig.min() / geig.max()), margin, "min"),
        KahlerCheck("omega_antisymmetric", _maxabs(W + W.T), tol),
        KahlerCheck("omega_nondegenerate", float(weig.min() / weig.max()), margin, "min"),
        KahlerCheck("j_squared", _maxabs(J @ J + I), tol),
        KahlerCheck("compatibility_g", _maxabs(J.T @ G @ J - G), tol),
        KahlerCheck("compatibility_omega", _maxabs(J.T @ W @ J - W), tol),
        # Omega(X, Y) = g(JX, Y)
        KahlerCheck("kahler_property", _maxabs(W - J.T @ G), tol),
        # Omega(X, JY) = g(X, Y)
        KahlerCheck("omega_x_jy", _maxabs(W @ J - G), tol),
        # Omega(JX, Y) = -g(X, Y)
        KahlerCheck("omega_jx_y", _maxabs(J.T @ W + G), tol),
    ]
    return KahlerReport(tuple(checks))
