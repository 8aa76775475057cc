"""Kahler representations of states on finite-dimensional JLB algebras."""

__version__ = "0.1.0"

from .algebra import (  # noqa: E402
    CstarElement,
    InputError,
    JlbElement,
    MatrixAlgebra,
    cstar_norm,
    cstar_product,
    involution,
    jlb_norm,
    jordan,
    lie,
)
from .kahler import KahlerPoint, KahlerStructure, PairVector, build_kahler, project  # noqa: E402
from .representation import action_matrix, cyclic_point, eval_f  # noqa: E402
from .states import StateFunctional, evaluate, random_state  # noqa: E402

__all__ = [
    "CstarElement", "InputError", "JlbElement", "MatrixAlgebra", "cstar_norm",
    "cstar_product", "involution", "jlb_norm", "jordan", "lie", "KahlerPoint",
    "KahlerStructure", "PairVector", "build_kahler", "project", "action_matrix",
    "cyclic_point", "eval_f", "StateFunctional", "evaluate", "random_state",
]
