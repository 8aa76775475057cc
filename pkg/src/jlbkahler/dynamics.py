"""Exact Hamiltonian flows and the comparison with Hilbert-space evolution."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg

from .algebra import JlbElement, MatrixAlgebra
from .kahler import KahlerPoint, KahlerStructure, build_kahler
from .representation import action_matrix, cyclic_point, eval_f, fn_poisson
from .states import StateFunctional


def generator(K: KahlerStructure, h) -> np.ndarray:
    """Matrix of the Hamiltonian field of f_h (linear in the point)."""
    A = h.A if hasattr(h, "A") else action_matrix(K, h).A
    return -K.Jm @ A


def flow_matrix(K: KahlerStructure, h, t: float) -> np.ndarray:
    return scipy.linalg.expm(t * generator(K, h))


def flow(K: KahlerStructure, h, p0: KahlerPoint, t: float) -> KahlerPoint:
    return KahlerPoint(K, flow_matrix(K, h, t) @ p0.coords)


@dataclass
class FlowResult:
    times: list[float]
    points: list[KahlerPoint]
    observables: dict[str, list[float]] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.times) != len(self.points):
            raise ValueError("times and points differ in length")
        for k, v in self.observables.items():
            if len(v) != len(self.times):
                raise ValueError(f"observable {k!r} has the wrong length")


def trajectory(K: KahlerStructure, h, p0: KahlerPoint, t_grid: Sequence[float],
               observables: Mapping[str, JlbElement] | None = None) -> FlowResult:
    gen = generator(K, h)
    ts = [float(t) for t in t_grid]
    pts = [KahlerPoint(K, scipy.linalg.expm(t * gen) @ p0.coords) for t in ts]
    obs = {}
    for label, b in (observables or {}).items():
        rb = action_matrix(K, b)
        obs[label] = [eval_f(K, rb, p) for p in pts]
    return FlowResult(ts, pts, obs)


def expectation_trajectory(K: KahlerStructure, h, b, p0: KahlerPoint,
                           t_grid: Sequence[float]) -> list[float]:
    """f_b along the flow of f_h started at p0."""
    return trajectory(K, h, p0, t_grid, {"b": b}).observables["b"]


def hilbert_trajectory(phi: StateFunctional, h: JlbElement, b: JlbElement,
                       t_grid: Sequence[float]) -> list[float]:
    """tr(rho(t) b) with rho(t) = exp(-ith) rho exp(ith), blockwise."""
    out = []
    for t in t_grid:
        val = 0.0
        for rho, hb, bb in zip(phi.density_blocks, h.blocks, b.blocks):
            u = scipy.linalg.expm(-1j * t * hb)
            val += np.trace(u @ rho @ u.conj().T @ bb).real
        out.append(float(val))
    return out


def check_commuting_diagram(algebra: MatrixAlgebra, phi: StateFunctional, h: JlbElement,
                            b: JlbElement, t_grid: Sequence[float],
                            K: KahlerStructure | None = None) -> float:
    """Sup over the grid of |f_b(flow_h(nu, t)) - tr(rho(t) b)|."""
    K = K or build_kahler(phi, algebra)
    kahler = expectation_trajectory(K, h, b, cyclic_point(K), t_grid)
    hilbert = hilbert_trajectory(phi, h, b, t_grid)
    return float(np.max(np.abs(np.subtract(kahler, hilbert))))


def flow_invariance_residuals(K: KahlerStructure, h, t: float) -> tuple[float, float]:
    """Max entries of F^T G F - G and F^T W F - W."""
    F = flow_matrix(K, h, t)
    return (float(np.abs(F.T @ K.G @ F - K.G).max()),
            float(np.abs(F.T @ K.W @ F - K.W).max()))


def poisson_rate_residual(K: KahlerStructure, h, b, p0: KahlerPoint, t: float,
                          step: float = 1e-5) -> float:
    """Centered difference of f_b along the flow against Omega(X_b, X_h) = 2{f_b, f_h}."""
    plus = eval_f(K, b, flow(K, h, p0, t + step))
    minus = eval_f(K, b, flow(K, h, p0, t - step))
    rate = (plus - minus) / (2 * step)
    return abs(rate - 2 * fn_poisson(K, b, h, flow(K, h, p0, t)))
