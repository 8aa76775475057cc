"""States realized as block density matrices."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import (
    CstarElement,
    InputError,
    JlbElement,
    MatrixAlgebra,
    jordan,
    lie,
)
from .correspondence import sa_decompose

PSD_TOL = 1e-12
NORM_TOL = 1e-12
DEFAULT_RANK_CUTOFF = 1e-9


class StateFunctional:
    """Positive normalized functional ``a -> sum_i tr(rho_i a_i)``."""

    def __init__(self, algebra: MatrixAlgebra, density_blocks, *,
                 psd_tol: float = PSD_TOL, norm_tol: float = NORM_TOL):
        blocks = tuple(np.array(r, dtype=complex) for r in density_blocks)
        if len(blocks) != len(algebra.block_dims):
            raise InputError(f"expected {len(algebra.block_dims)} density blocks, got {len(blocks)}")
        for r, d in zip(blocks, algebra.block_dims):
            if r.shape != (d, d):
                raise InputError(f"density block shape {r.shape} does not match dimension {d}")
            if not np.all(np.isfinite(r)):
                raise InputError("density entries must be finite")
            if np.abs(r - r.conj().T).max() > 1e-12 * (1 + np.abs(r).max()):
                raise InputError("density block is not Hermitian")
        blocks = tuple((r + r.conj().T) / 2 for r in blocks)
        for r in blocks:
            if np.linalg.eigvalsh(r).min() < -psd_tol:
                raise InputError("density block is not positive semidefinite")
        total = sum(np.trace(r).real for r in blocks)
        if abs(total - 1.0) > norm_tol:
            raise InputError(f"normalization: total trace is {total!r}, expected 1")
        self.algebra = algebra
        self.density_blocks = blocks

    def __repr__(self) -> str:
        return f"StateFunctional({self.algebra!r}, ranks={self.ranks()})"

    @classmethod
    def from_vectors(cls, algebra: MatrixAlgebra, vectors: Sequence, **kw) -> "StateFunctional":
        """Vector state; ``vectors`` holds one (possibly zero) vector per block."""
        vs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
        if len(vs) != len(algebra.block_dims):
            raise InputError(f"expected {len(algebra.block_dims)} block vectors, got {len(vs)}")
        for v, d in zip(vs, algebra.block_dims):
            if v.shape != (d,):
                raise InputError(f"vector length {v.shape[0]} does not match block dimension {d}")
        norm2 = sum(float(np.vdot(v, v).real) for v in vs)
        if abs(norm2 - 1.0) > kw.get("norm_tol", NORM_TOL):
            raise InputError(f"normalization: vector norm squared is {norm2!r}, expected 1")
        return cls(algebra, [np.outer(v, v.conj()) for v in vs], **kw)

    @classmethod
    def maximally_mixed(cls, algebra: MatrixAlgebra) -> "StateFunctional":
        n = sum(algebra.block_dims)
        return cls(algebra, [np.eye(d) / n for d in algebra.block_dims])

    def ranks(self, cutoff: float = DEFAULT_RANK_CUTOFF) -> list[int]:
        top = max(np.linalg.eigvalsh(r).max() for r in self.density_blocks)
        return [int((np.linalg.eigvalsh(r) > cutoff * top).sum()) for r in self.density_blocks]

    def __call__(self, a: JlbElement) -> float:
        return evaluate(self, a)


def random_state(algebra: MatrixAlgebra, rng: np.random.Generator,
                 rank: int | None = None) -> StateFunctional:
    """Random density matrix of the given total rank (default: random rank).

    Rank is distributed over blocks at random; weights are uniform before
    normalization.
    """
    slots = [(i, k) for i, d in enumerate(algebra.block_dims) for k in range(d)]
    if rank is None:
        rank = int(rng.integers(1, len(slots) + 1))
    if not 1 <= rank <= len(slots):
        raise InputError(f"rank must lie in [1, {len(slots)}]")
    chosen = rng.choice(len(slots), size=rank, replace=False)
    per_block = [0] * len(algebra.block_dims)
    for s in chosen:
        per_block[slots[s][0]] += 1
    blocks = []
    for d, r in zip(algebra.block_dims, per_block):
        m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        q, _ = np.linalg.qr(m)
        w = rng.uniform(0.2, 1.0, size=r)
        blocks.append((q[:, :r] * w) @ q[:, :r].conj().T)
    total = sum(np.trace(b).real for b in blocks)
    return StateFunctional(algebra, [b / total for b in blocks])


def evaluate(phi: StateFunctional, a: JlbElement) -> float:
    if a.algebra != phi.algebra:
        raise InputError("state and element belong to different algebras")
    val = sum(np.einsum("ij,ji->", r, x) for r, x in zip(phi.density_blocks, a.blocks))
    return float(np.real(val))


def evaluate_cstar(phi: StateFunctional, c: CstarElement) -> complex:
    if c.algebra != phi.algebra:
        raise InputError("state and element belong to different algebras")
    a, b = sa_decompose(c)
    return complex(evaluate(phi, a), evaluate(phi, b))


def check_cauchy_schwarz(phi: StateFunctional, a: JlbElement, b: JlbElement) -> tuple[float, float]:
    """Residuals phi(x)^2 - phi(a o a) phi(b o b) for x = a o b and x = {a, b}.

    Both are nonpositive for a state.
    """
    aa = evaluate(phi, jordan(a, a))
    bb = evaluate(phi, jordan(b, b))
    res_a = evaluate(phi, jordan(a, b)) ** 2 - aa * bb
    res_b = evaluate(phi, lie(a, b)) ** 2 - aa * bb
    return res_a, res_b


def jordan_gram(phi: StateFunctional) -> np.ndarray:
    """Real Gram matrix phi(e_i o e_j) over the Hermitian basis."""
    alg = phi.algebra
    jo, _ = alg.structure_constants
    return np.einsum("ijk,k->ij", jo, _state_coords(phi))


def lie_gram(phi: StateFunctional) -> np.ndarray:
    """Antisymmetric matrix phi({e_i, e_j}) over the Hermitian basis."""
    _, li = phi.algebra.structure_constants
    return np.einsum("ijk,k->ij", li, _state_coords(phi))


def _state_coords(phi: StateFunctional) -> np.ndarray:
    # phi(e_k) for each basis element, so phi(x) = coords(x) . w
    return np.array([evaluate(phi, e) for e in phi.algebra.hermitian_basis])


def null_set_basis(phi: StateFunctional, cutoff: float = DEFAULT_RANK_CUTOFF) -> list[JlbElement]:
    """Basis of {a : phi(a o a) = 0} from the null space of the Jordan Gram matrix."""
    g1 = jordan_gram(phi)
    u, s, _ = np.linalg.svd(g1)
    keep = s <= cutoff * s.max()
    return [phi.algebra.element(u[:, k]) for k in np.flatnonzero(keep)]


def gns_gram(phi: StateFunctional) -> np.ndarray:
    """Complex Gram matrix phi(E^* F) over matrix units E, F of every block.

    Its complex rank is the dimension of the GNS Hilbert space.
    """
    units = []
    for i, d in enumerate(phi.algebra.block_dims):
        for j in range(d):
            for k in range(d):
                units.append((i, j, k))
    g = np.zeros((len(units), len(units)), dtype=complex)
    for p, (bi, j, k) in enumerate(units):
        for q, (bq, l, m) in enumerate(units):
            # E_jk^* E_lm = delta_jl E_km, and tr(rho E_km) = rho[m, k]
            if bi == bq and j == l:
                g[p, q] = phi.density_blocks[bi][m, k]
    return g


def gns_dimension(phi: StateFunctional, cutoff: float = DEFAULT_RANK_CUTOFF) -> int:
    s = np.linalg.svd(gns_gram(phi), compute_uv=False)
    return int((s > cutoff * s.max()).sum())


def is_pure(phi: StateFunctional, cutoff: float = DEFAULT_RANK_CUTOFF) -> bool:
    return sum(phi.ranks(cutoff)) == 1


def orbit_tangent_dimension(phi: StateFunctional, cutoff: float = DEFAULT_RANK_CUTOFF) -> int:
    """Real rank of {a sqrt(rho) : a Hermitian}, computed blockwise by brute force.

    In the Hilbert-Schmidt picture the cyclic vector is sqrt(rho) and the
    Hamiltonian direction of a is -i a sqrt(rho), so this is the number of
    independent Hamiltonian directions at the cyclic point.
    """
    roots = []
    top = max(float(np.linalg.eigvalsh(r).max()) for r in phi.density_blocks)
    for rho in phi.density_blocks:
        w, q = np.linalg.eigh(rho)
        w = np.where(w > cutoff * top, w, 0.0)  # sqrt would amplify rounding noise
        roots.append((q * np.sqrt(w)) @ q.conj().T)
    cols = []
    for e in phi.algebra.hermitian_basis:
        parts = []
        for x, root in zip(e.blocks, roots):
            v = (x @ root).ravel()
            parts.append(np.concatenate([v.real, v.imag]))
        cols.append(np.concatenate(parts))
    s = np.linalg.svd(np.column_stack(cols), compute_uv=False)
    return int((s > cutoff * s.max()).sum())
