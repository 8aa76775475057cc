"""Finite-dimensional C* and JLB algebras realized as direct sums of matrix blocks.

An algebra ``M_{n_1} + ... + M_{n_k}`` is described by its block dimensions.
Elements are carried blockwise; Hermitian elements additionally have real
coordinates in a fixed generalized Gell-Mann basis (every basis element
``e`` satisfies ``tr(e e) = 2``, and distinct elements are trace-orthogonal).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-12


class InputError(ValueError):
    """Raised for malformed or mismatched inputs."""


def gell_mann_basis(n: int) -> list[np.ndarray]:
    """Scaled identity, diagonal, symmetric, then antisymmetric generators of M_n."""
    basis = [np.sqrt(2.0 / n) * np.eye(n, dtype=complex)]
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1.0
        d[l] = -l
        basis.append(np.sqrt(2.0 / (l * (l + 1))) * np.diag(d).astype(complex))
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    for j, k in pairs:
        e = np.zeros((n, n), dtype=complex)
        e[j, k] = e[k, j] = 1.0
        basis.append(e)
    for j, k in pairs:
        e = np.zeros((n, n), dtype=complex)
        e[j, k] = -1j
        e[k, j] = 1j
        basis.append(e)
    return basis


class MatrixAlgebra:
    """Direct sum of full complex matrix algebras."""

    def __init__(self, block_dims: Sequence[int]):
        dims = tuple(int(d) for d in block_dims)
        if not dims:
            raise InputError("block dimension list is empty")
        if any(d <= 0 for d in dims):
            raise InputError(f"block dimension must be positive, got {list(dims)}")
        self.block_dims = dims

    def __repr__(self) -> str:
        return "MatrixAlgebra(" + " + ".join(f"M_{d}" for d in self.block_dims) + ")"

    def __eq__(self, other) -> bool:
        return isinstance(other, MatrixAlgebra) and other.block_dims == self.block_dims

    def __hash__(self) -> int:
        return hash(self.block_dims)

    @property
    def total_dim(self) -> int:
        return sum(d * d for d in self.block_dims)

    @property
    def real_dim(self) -> int:
        """Real dimension of the self-adjoint part (equal to ``total_dim``)."""
        return self.total_dim

    @cached_property
    def _block_bases(self) -> tuple[np.ndarray, ...]:
        return tuple(np.array(gell_mann_basis(d)) for d in self.block_dims)

    @cached_property
    def _flat_bases(self) -> tuple[np.ndarray, ...]:
        # rows are conj(e).ravel(), so rows @ x.ravel() = tr(e x) for Hermitian e
        return tuple(np.ascontiguousarray(s.conj().reshape(len(s), -1)) for s in self._block_bases)

    @cached_property
    def _offsets(self) -> tuple[int, ...]:
        out, k = [], 0
        for d in self.block_dims:
            out.append(k)
            k += d * d
        return tuple(out)

    @cached_property
    def hermitian_basis(self) -> tuple["JlbElement", ...]:
        out = []
        for i, stack in enumerate(self._block_bases):
            for e in stack:
                blocks = [np.zeros((d, d), dtype=complex) for d in self.block_dims]
                blocks[i] = e.copy()
                out.append(JlbElement(self, blocks))
        return tuple(out)

    def coords(self, a: "JlbElement") -> np.ndarray:
        """Real coordinates of a Hermitian element in ``hermitian_basis``."""
        self._check(a)
        parts = [0.5 * (flat @ blk.ravel()).real
                 for flat, blk in zip(self._flat_bases, a.blocks)]
        return np.concatenate(parts)

    def element(self, coords) -> "JlbElement":
        c = np.asarray(coords, dtype=float)
        if c.shape != (self.real_dim,):
            raise InputError(f"expected {self.real_dim} coordinates, got shape {c.shape}")
        blocks = []
        for off, flat, d in zip(self._offsets, self._flat_bases, self.block_dims):
            blocks.append((c[off:off + d * d] @ flat.conj()).reshape(d, d))
        return JlbElement(self, blocks)

    def unit(self) -> "JlbElement":
        return JlbElement(self, [np.eye(d, dtype=complex) for d in self.block_dims])

    def zero(self) -> "JlbElement":
        return JlbElement(self, [np.zeros((d, d), dtype=complex) for d in self.block_dims])

    @cached_property
    def structure_constants(self) -> tuple[np.ndarray, np.ndarray]:
        """Tensors ``(jordan, lie)`` with ``coords(e_i o e_j) = jordan[i, j]``."""
        basis = self.hermitian_basis
        n = len(basis)
        jo = np.zeros((n, n, n))
        li = np.zeros((n, n, n))
        for i, ei in enumerate(basis):
            for j, ej in enumerate(basis):
                jo[i, j] = self.coords(jordan(ei, ej))
                li[i, j] = self.coords(lie(ei, ej))
        return jo, li

    def multiplication_matrices(self, a: "JlbElement") -> tuple[np.ndarray, np.ndarray]:
        """Real matrices of ``b -> a o b`` and ``b -> {a, b}`` in basis coordinates."""
        jo, li = self.structure_constants
        c = self.coords(a)
        return np.einsum("i,ijk->kj", c, jo), np.einsum("i,ijk->kj", c, li)

    def random_hermitian(self, rng: np.random.Generator) -> "JlbElement":
        blocks = []
        for d in self.block_dims:
            m = rng.uniform(-1, 1, (d, d)) + 1j * rng.uniform(-1, 1, (d, d))
            blocks.append((m + m.conj().T) / 2)
        return JlbElement._trusted(self, blocks)

    def random_cstar(self, rng: np.random.Generator) -> "CstarElement":
        blocks = [rng.uniform(-1, 1, (d, d)) + 1j * rng.uniform(-1, 1, (d, d))
                  for d in self.block_dims]
        return CstarElement(self, blocks)

    def _check(self, x: "_BlockElement") -> None:
        if x.algebra is not self and x.algebra != self:
            raise InputError(f"element of {x.algebra!r} used with {self!r}")


class _BlockElement:
    __slots__ = ("algebra", "blocks")

    def __init__(self, algebra: MatrixAlgebra, blocks):
        blocks = tuple(np.array(b, dtype=complex) for b in blocks)
        if len(blocks) != len(algebra.block_dims):
            raise InputError(
                f"expected {len(algebra.block_dims)} blocks, got {len(blocks)}")
        for b, d in zip(blocks, algebra.block_dims):
            if b.shape != (d, d):
                raise InputError(f"block shape {b.shape} does not match dimension {d}")
            if not np.all(np.isfinite(b)):
                raise InputError("element entries must be finite")
        self.algebra = algebra
        self.blocks = blocks

    @classmethod
    def _trusted(cls, algebra: MatrixAlgebra, blocks) -> "_BlockElement":
        # internal results: shapes already match, skip validation
        obj = object.__new__(cls)
        obj.algebra = algebra
        obj.blocks = tuple(blocks)
        return obj

    def _same(self, other) -> None:
        if not isinstance(other, _BlockElement) or (
                other.algebra is not self.algebra and other.algebra != self.algebra):
            raise InputError("operands belong to different algebras")

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.algebra!r}, {[b.tolist() for b in self.blocks]})"

    def to_dense(self) -> np.ndarray:
        """Block-diagonal matrix of the element."""
        from scipy.linalg import block_diag
        return block_diag(*self.blocks)

    def allclose(self, other, atol: float = 1e-12) -> bool:
        self._same(other)
        return all(np.allclose(x, y, rtol=0, atol=atol) for x, y in zip(self.blocks, other.blocks))


class CstarElement(_BlockElement):
    """Arbitrary element of the ambient C* algebra."""

    __slots__ = ()

    def __add__(self, other):
        self._same(other)
        return CstarElement._trusted(self.algebra, [x + y for x, y in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        self._same(other)
        return CstarElement._trusted(self.algebra, [x - y for x, y in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return CstarElement._trusted(self.algebra, [-x for x in self.blocks])

    def __mul__(self, s):
        if not np.isscalar(s):
            return NotImplemented
        return CstarElement._trusted(self.algebra, [s * x for x in self.blocks])

    __rmul__ = __mul__

    def __matmul__(self, other):
        return cstar_product(self, other)


class JlbElement(_BlockElement):
    """Hermitian element; blocks are Hermitized after validation."""

    __slots__ = ()

    def __init__(self, algebra: MatrixAlgebra, blocks):
        super().__init__(algebra, blocks)
        for b in self.blocks:
            scale = 1.0 + np.abs(b).max(initial=0.0)
            if np.abs(b - b.conj().T).max(initial=0.0) > HERMITIAN_TOL * scale:
                raise InputError("block is not Hermitian")
        self.blocks = tuple((b + b.conj().T) / 2 for b in self.blocks)

    def __add__(self, other):
        self._same(other)
        return JlbElement._trusted(self.algebra, [x + y for x, y in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        self._same(other)
        return JlbElement._trusted(self.algebra, [x - y for x, y in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return JlbElement._trusted(self.algebra, [-x for x in self.blocks])

    def __mul__(self, s):
        if not np.isscalar(s) or np.iscomplexobj(s):
            return NotImplemented
        return JlbElement._trusted(self.algebra, [float(s) * x for x in self.blocks])

    __rmul__ = __mul__

    def embed(self) -> CstarElement:
        return CstarElement._trusted(self.algebra, self.blocks)


def _as_cstar(x: _BlockElement) -> CstarElement:
    return x.embed() if isinstance(x, JlbElement) else x


def cstar_product(a: _BlockElement, b: _BlockElement) -> CstarElement:
    a._same(b)
    return CstarElement._trusted(a.algebra, [x @ y for x, y in zip(a.blocks, b.blocks)])


def involution(a: _BlockElement) -> CstarElement:
    return CstarElement._trusted(a.algebra, [x.conj().T for x in a.blocks])


def cstar_norm(a: _BlockElement) -> float:
    return max(float(np.linalg.norm(x, 2)) for x in a.blocks)


def jordan(a: JlbElement, b: JlbElement) -> JlbElement:
    a._same(b)
    out = []
    for x, y in zip(a.blocks, b.blocks):
        p = x @ y
        h = p + p.conj().T  # xy + yx for Hermitian x, y
        out.append(h / 2)
    return JlbElement._trusted(a.algebra, out)


def lie(a: JlbElement, b: JlbElement) -> JlbElement:
    a._same(b)
    out = []
    for x, y in zip(a.blocks, b.blocks):
        p = x @ y
        out.append((p - p.conj().T) / 2j)  # exactly Hermitian
    return JlbElement._trusted(a.algebra, out)


def jlb_norm(a: JlbElement) -> float:
    """Spectral radius over blocks."""
    return max(float(np.abs(np.linalg.eigvalsh(x)).max()) for x in a.blocks)


@dataclass(frozen=True)
class AxiomResidual:
    name: str
    residual: float  # worst residual / (1 + |a||b||c|)
    passed: bool


@dataclass(frozen=True)
class AxiomReport:
    algebra: MatrixAlgebra
    sample_count: int
    tol: float
    entries: tuple[AxiomResidual, ...]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def __getitem__(self, name: str) -> AxiomResidual:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


def axiom_residuals(a: JlbElement, b: JlbElement, c: JlbElement) -> dict[str, float]:
    """Raw residuals of each JLB axiom on one triple.

    Identities report the norm of (lhs - rhs); inequalities report the
    amount by which they are violated (zero when they hold).
    """
    j, l = jordan, lie
    out = {
        "leibniz": jlb_norm(l(j(a, b), c) - j(a, l(b, c)) - j(b, l(a, c))),
        "associator": jlb_norm(j(j(a, b), c) - j(a, j(b, c)) - l(l(a, c), b)),
        "jacobi": jlb_norm(l(l(a, b), c) + l(l(b, c), a) + l(l(c, a), b)),
        "cauchy_schwarz_norm": max(0.0, jlb_norm(j(a, b)) - jlb_norm(a) * jlb_norm(b)),
        "triangle": max(0.0, jlb_norm(a) ** 2 - jlb_norm(j(a, a) + j(b, b))),
    }
    return out


AXIOM_NAMES = ("leibniz", "associator", "jacobi", "cauchy_schwarz_norm", "triangle")


def check_jlb_axioms(algebra: MatrixAlgebra, sample_count: int = 200, seed: int = 0,
                     tol: float = 1e-10, triples=None) -> AxiomReport:
    """Evaluate the JLB axioms on random triples (or on ``triples`` if given).

    A residual passes iff it is below ``tol * (1 + |a||b||c|)``.
    """
    if triples is None:
        if sample_count < 1:
            raise InputError("sample_count must be at least 1")
        rng = np.random.default_rng(seed)
        triples = [tuple(algebra.random_hermitian(rng) for _ in range(3))
                   for _ in range(sample_count)]
    worst = dict.fromkeys(AXIOM_NAMES, 0.0)
    for a, b, c in triples:
        scale = 1.0 + jlb_norm(a) * jlb_norm(b) * jlb_norm(c)
        for k, v in axiom_residuals(a, b, c).items():
            worst[k] = max(worst[k], v / scale)
    entries = tuple(AxiomResidual(k, worst[k], worst[k] < tol) for k in AXIOM_NAMES)
    return AxiomReport(algebra, len(triples), tol, entries)


DERIVED_IDENTITIES = ("square", "jordan_sandwich", "lie_sandwich")


def check_derived_identity(which: str, a: JlbElement, b: JlbElement,
                            c: JlbElement | None = None) -> float:
    """Norm of lhs - rhs for ``square``, ``jordan_sandwich`` or ``lie_sandwich``."""
    j, l = jordan, lie
    if which == "square":
        lhs = j(j(a, b), j(a, b))
        rhs = j(l(a, b), l(a, b)) + j(a, j(j(a, b), b)) + j(a, l(l(a, b), b))
    elif which == "jordan_sandwich":
        lhs = j(c, j(j(a, b), c)) - l(c, l(j(a, b), c))
        rhs = (j(j(a, c), j(b, c)) + l(l(a, c), j(b, c))
               + j(l(a, c), l(b, c)) - l(j(a, c), l(b, c)))
    elif which == "lie_sandwich":
        lhs = j(c, j(l(a, b), c)) - l(c, l(l(a, b), c))
        rhs = (l(j(a, c), j(b, c)) - j(l(a, c), j(b, c))
               + j(j(a, c), l(b, c)) + l(l(a, c), l(b, c)))
    else:
        raise InputError(f"unknown identity {which!r}")
    return jlb_norm(lhs - rhs)
