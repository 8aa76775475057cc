"""Passage between a C* algebra and its self-adjoint JLB part."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import (
    CstarElement,
    InputError,
    JlbElement,
    MatrixAlgebra,
    cstar_norm,
    cstar_product,
    involution,
    jordan,
    lie,
)


def sa_decompose(c: CstarElement) -> tuple[JlbElement, JlbElement]:
    """Unique Hermitian pair (a, b) with c = a + i b."""
    cs = involution(c)
    a = JlbElement(c.algebra, [(x + y) / 2 for x, y in zip(c.blocks, cs.blocks)])
    b = JlbElement(c.algebra, [(x - y) / 2j for x, y in zip(c.blocks, cs.blocks)])
    return a, b


def complexify(a: JlbElement, b: JlbElement) -> CstarElement:
    a._same(b)
    return CstarElement(a.algebra, [x + 1j * y for x, y in zip(a.blocks, b.blocks)])


def product_transport_check(a: JlbElement, b: JlbElement) -> float:
    """C* norm of ab - (a o b + i{a, b})."""
    rebuilt = complexify(jordan(a, b), lie(a, b))
    return cstar_norm(cstar_product(a, b) - rebuilt)


@dataclass(frozen=True, eq=False)
class HomomorphismTable:
    """JLB homomorphism given by its action on the source Hermitian basis.

    Column ``i`` of ``matrix`` holds the target coordinates of the image of
    basis element ``i``.
    """

    source: MatrixAlgebra
    target: MatrixAlgebra
    matrix: np.ndarray

    @classmethod
    def from_function(cls, source: MatrixAlgebra, target: MatrixAlgebra,
                      f: Callable[[JlbElement], JlbElement]) -> "HomomorphismTable":
        cols = [target.coords(f(e)) for e in source.hermitian_basis]
        return cls(source, target, np.column_stack(cols))

    def __call__(self, a: JlbElement) -> JlbElement:
        return self.target.element(self.matrix @ self.source.coords(a))

    def violation(self) -> float:
        """Worst product-preservation or unit residual over basis pairs."""
        basis = self.source.hermitian_basis
        images = [self(e) for e in basis]
        worst = cstar_norm((self(self.source.unit()) - self.target.unit()).embed())
        for i, ei in enumerate(basis):
            for j, ej in enumerate(basis):
                for op in (jordan, lie):
                    r = self(op(ei, ej)) - op(images[i], images[j])
                    worst = max(worst, cstar_norm(r.embed()))
        return worst


def transport_hom(f: HomomorphismTable, tol: float = 1e-10) -> Callable[[CstarElement], CstarElement]:
    """Extend a JLB homomorphism complex-linearly: a + ib -> f(a) + i f(b)."""
    v = f.violation()
    if v > tol:
        raise InputError(f"table is not a unital JLB homomorphism (residual {v:.3e})")

    def evaluate(c: CstarElement) -> CstarElement:
        if c.algebra != f.source:
            raise InputError("element does not belong to the homomorphism source")
        a, b = sa_decompose(c)
        return complexify(f(a), f(b))

    return evaluate


def transport_residuals(F: Callable[[CstarElement], CstarElement], source: MatrixAlgebra,
                        samples: int = 100, seed: int = 0) -> dict[str, float]:
    """Worst multiplicativity, involution and unit residuals of a transported map."""
    rng = np.random.default_rng(seed)
    mult = star = 0.0
    for _ in range(samples):
        c, d = source.random_cstar(rng), source.random_cstar(rng)
        mult = max(mult, cstar_norm(F(c @ d) - F(c) @ F(d)))
        star = max(star, cstar_norm(F(involution(c)) - involution(F(c))))
    unit_img = F(source.unit().embed())
    target = unit_img.algebra
    unit = cstar_norm(unit_img - target.unit().embed())
    return {"multiplicative": mult, "involution": star, "unit": unit}
