"""Named verification checks, grouped by the property they certify.

Each group draws randomness from its own generator seeded by
``(seed, crc32(group))`` so results do not depend on execution order.
When ``tol`` is None every check uses its acceptance threshold; otherwise
``tol`` replaces it, except that checks whose acceptance threshold is at
least 1e-8 never go below that threshold.
"""

from __future__ import annotations

import os
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import __version__
from .algebra import (
    DERIVED_IDENTITIES,
    CstarElement,
    JlbElement,
    MatrixAlgebra,
    check_derived_identity,
    check_jlb_axioms,
    cstar_norm,
    jlb_norm,
    jordan,
    lie,
)
from .correspondence import (
    HomomorphismTable,
    complexify,
    product_transport_check,
    sa_decompose,
    transport_hom,
    transport_residuals,
)
from .dynamics import (
    check_commuting_diagram,
    flow,
    flow_invariance_residuals,
    poisson_rate_residual,
)
from .kahler import (
    KahlerStructure,
    PairVector,
    build_kahler,
    pair_gram,
    pair_symplectic,
    project,
    verify_kahler,
)
from .representation import (
    action_matrix,
    cyclic_point,
    eval_f,
    function_norm,
    jacobi_residual,
    action_symmetry_residual,
    field_agreement_residual,
    representation_residuals,
    random_point,
    span_rank,
)
from .states import (
    DEFAULT_RANK_CUTOFF,
    StateFunctional,
    check_cauchy_schwarz,
    evaluate,
    gns_dimension,
    is_pure,
    null_set_basis,
    orbit_tangent_dimension,
    random_state,
)
from .uniqueness import (
    _spanning_set,
    cyclic_recovery_residual,
    find_iso,
    intertwining_residual,
    pushforward_residual,
    rebase,
    verify_iso_representation,
)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    comparison: str = "<"  # "<": value < threshold passes; ">": value > threshold passes
    detail: str = ""

    @property
    def passed(self) -> bool:
        v = self.value
        if not np.isfinite(v):
            return False
        return v < self.threshold if self.comparison == "<" else v > self.threshold

    def to_dict(self) -> dict:
        d = {"name": self.name, "residual": float(self.value), "threshold": float(self.threshold),
             "comparison": self.comparison, "pass": bool(self.passed)}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Context:
    algebra: MatrixAlgebra
    state: StateFunctional
    seed: int = 0
    tol: float | None = None
    rank_cutoff: float = DEFAULT_RANK_CUTOFF
    generator: JlbElement | None = None
    observable: JlbElement | None = None
    K: KahlerStructure = field(init=False)

    def __post_init__(self):
        self.K = build_kahler(self.state, self.algebra, rank_cutoff=self.rank_cutoff)

    def thr(self, acceptance: float) -> float:
        if self.tol is None:
            return acceptance
        return max(self.tol, acceptance) if acceptance >= 1e-8 else self.tol

    def rng(self, group: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(group.encode())])


def _random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


# -- groups ----------------------------------------------------------------

def group_jlb_axioms(ctx: Context) -> list[Check]:
    rng = ctx.rng("jlb_axioms")
    seed = int(rng.integers(2**31))
    rep = check_jlb_axioms(ctx.algebra, 200, seed, tol=ctx.thr(1e-10))
    return [Check(f"jlb_axioms.{e.name}", e.residual, rep.tol,
                  detail="max residual / (1 + |a||b||c|)") for e in rep.entries]


def group_derived_identities(ctx: Context, samples: int = 1000) -> list[Check]:
    rng = ctx.rng("derived_identities")
    worst = dict.fromkeys(DERIVED_IDENTITIES, 0.0)
    alg = ctx.algebra
    for _ in range(samples):
        a, b, c = (alg.random_hermitian(rng) for _ in range(3))
        scale = 1.0 + jlb_norm(a) * jlb_norm(b) * jlb_norm(c)
        for k in worst:
            worst[k] = max(worst[k], check_derived_identity(k, a, b, c) / scale)
    return [Check(f"derived_identities.{k}", v, ctx.thr(1e-10),
                  detail="max residual / (1 + |a||b||c|)") for k, v in worst.items()]


def group_cauchy_schwarz(ctx: Context, samples: int = 1000) -> list[Check]:
    rng = ctx.rng("cauchy_schwarz")
    alg = ctx.algebra
    wa = wb = -np.inf
    for i in range(samples):
        phi = ctx.state if i % 2 == 0 else random_state(alg, rng)
        a, b = alg.random_hermitian(rng), alg.random_hermitian(rng)
        ra, rb = check_cauchy_schwarz(phi, a, b)
        wa, wb = max(wa, ra), max(wb, rb)
    d = "max of phi(x)^2 - phi(a o a) phi(b o b); includes rank-deficient states"
    return [Check("cauchy_schwarz.jordan", wa, ctx.thr(1e-10), detail=d),
            Check("cauchy_schwarz.lie", wb, ctx.thr(1e-10), detail=d)]


def group_correspondence(ctx: Context, samples: int = 200) -> list[Check]:
    rng = ctx.rng("correspondence")
    alg = ctx.algebra
    rt = pt = 0.0
    for _ in range(samples):
        c = alg.random_cstar(rng)
        a, b = sa_decompose(c)
        rt = max(rt, cstar_norm(complexify(a, b) - c))
        x, y = alg.random_hermitian(rng), alg.random_hermitian(rng)
        a2, b2 = sa_decompose(complexify(x, y))
        rt = max(rt, jlb_norm(a2 - x), jlb_norm(b2 - y))
        pt = max(pt, product_transport_check(x, y))
    us = [_random_unitary(d, rng) for d in alg.block_dims]
    conj = HomomorphismTable.from_function(
        alg, alg, lambda h: JlbElement(alg, [u.conj().T @ x @ u for u, x in zip(us, h.blocks)]))
    F = transport_hom(conj)
    tr = transport_residuals(F, alg, samples=100, seed=int(rng.integers(2**31)))
    direct = 0.0
    for _ in range(20):
        c = alg.random_cstar(rng)
        expect = CstarElement(alg, [u.conj().T @ x @ u for u, x in zip(us, c.blocks)])
        direct = max(direct, cstar_norm(F(c) - expect))
    return [
        Check("correspondence.round_trip", rt, ctx.thr(1e-14)),
        Check("correspondence.product_transport", pt, ctx.thr(1e-12)),
        Check("correspondence.transport_multiplicative", tr["multiplicative"], ctx.thr(1e-10)),
        Check("correspondence.transport_involution", tr["involution"], ctx.thr(1e-10)),
        Check("correspondence.transport_unit", tr["unit"], ctx.thr(1e-10)),
        Check("correspondence.transport_conjugation", direct, ctx.thr(1e-10),
              detail="F(f)(c) against u* c u"),
    ]


def group_kahler_structure(ctx: Context) -> list[Check]:
    K = ctx.K
    rep = verify_kahler(K, tol=ctx.thr(1e-10), margin=ctx.rank_cutoff)
    out = [Check(f"kahler_structure.{c.name}", c.value, c.threshold,
                 "<" if c.kind == "max" else ">") for c in rep.checks]
    gns = gns_dimension(ctx.state, ctx.rank_cutoff)
    out.append(Check("kahler_structure.quotient_dimension", abs(K.dim - 2 * gns), 0.5,
                     detail=f"2m = {K.dim}, GNS oracle 2*dim = {2 * gns}"))
    # g and Omega do not see null directions
    gp, wp = pair_gram(ctx.state), pair_symplectic(ctx.state)
    n = ctx.algebra.real_dim
    wd = 0.0
    for v in null_set_basis(ctx.state, ctx.rank_cutoff):
        x = ctx.algebra.coords(v)
        for pair in (np.concatenate([x, np.zeros(n)]), np.concatenate([np.zeros(n), x])):
            wd = max(wd, float(np.abs(gp @ pair).max()), float(np.abs(wp @ pair).max()))
    out.append(Check("kahler_structure.well_defined", wd, ctx.thr(1e-9)))
    return out


def group_action_identities(ctx: Context, samples: int = 1000) -> list[Check]:
    rng = ctx.rng("action_identities")
    K, alg = ctx.K, ctx.algebra
    w = dict.fromkeys(["self_adjoint_matrix", "symmetry", "schrodinger_field", "jordan_form", "poisson_form",
                       "complex_linearity", "jacobi"], 0.0)
    for _ in range(samples):
        a, b, c = (alg.random_hermitian(rng) for _ in range(3))
        p = random_point(K, rng)
        ro = action_matrix(K, a)
        na = jlb_norm(a)
        w["self_adjoint_matrix"] = max(w["self_adjoint_matrix"], ro.self_adjoint_residual() / (1 + na))
        w["complex_linearity"] = max(w["complex_linearity"], ro.complex_linearity_residual() / (1 + na))
        w["symmetry"] = max(w["symmetry"], action_symmetry_residual(K, a, b, c))
        w["schrodinger_field"] = max(w["schrodinger_field"], field_agreement_residual(K, ro, p)
                          / ((1 + na) * np.linalg.norm(p.coords)))
        ra, rb = representation_residuals(K, a, b, c)
        w["jordan_form"], w["poisson_form"] = max(w["jordan_form"], ra), max(w["poisson_form"], rb)
        w["jacobi"] = max(w["jacobi"], jacobi_residual(K, a, b, c, p))
    return [Check(f"action_identities.{k}", v, ctx.thr(1e-9)) for k, v in w.items()]


def group_cyclic_conditions(ctx: Context) -> list[Check]:
    K = ctx.K
    nu = cyclic_point(K)
    rank = span_rank(K, nu, ctx.rank_cutoff)
    S = _spanning_set(K)
    sv = np.linalg.svd(S, compute_uv=False)
    crank = int((sv > ctx.rank_cutoff * sv.max()).sum())
    return [
        Check("cyclic_conditions.recovers_state", cyclic_recovery_residual(K), ctx.thr(1e-10),
              detail="max over basis a of |f_a(nu) - phi(a)|"),
        Check("cyclic_conditions.nu_norm", abs(K.g(nu, nu) - 2.0), ctx.thr(1e-12)),
        _span_rank_check(ctx, rank),
        Check("cyclic_conditions.complex_span", abs(crank - K.dim), 0.5,
              detail=f"rank of {{X_a, J X_a}} at nu is {crank}, 2m = {K.dim}"),
    ]


def _span_rank_check(ctx: Context, rank: int) -> Check:
    # 2m - 1 holds for vector states; mixed states have fewer independent directions
    if is_pure(ctx.state, ctx.rank_cutoff):
        expected, why = ctx.K.dim - 1, "2m - 1 (pure state)"
    else:
        expected, why = orbit_tangent_dimension(ctx.state, ctx.rank_cutoff), "rank of {a sqrt(rho)} (mixed state)"
    return Check("cyclic_conditions.span_rank", abs(rank - expected), 0.5,
                 detail=f"rank {rank}, expected {why} = {expected}")


def group_norm_bound(ctx: Context, samples: int = 200) -> list[Check]:
    rng = ctx.rng("norm_bound")
    K, alg = ctx.K, ctx.algebra
    excess = -np.inf
    for _ in range(samples):
        a = alg.random_hermitian(rng)
        excess = max(excess, function_norm(K, a) - jlb_norm(a))
    return [
        Check("norm_bound.excess", excess, ctx.thr(1e-10), detail="max of |f_a| - |a|"),
        Check("norm_bound.unit", abs(function_norm(K, alg.unit()) - 1.0), ctx.thr(1e-10)),
    ]


def group_uniqueness(ctx: Context, recipe: str = "orthogonal-mix") -> list[Check]:
    rng = ctx.rng("uniqueness")
    K = ctx.K
    K2 = rebase(K, recipe, int(rng.integers(2**31)))
    iso = find_iso(K, K2)
    t = ctx.thr(1e-8)
    out = [Check(f"uniqueness.{k}", v, t) for k, v in iso.residuals().items()]
    out += [
        Check("uniqueness.solve", iso.solve_residual, t),
        Check("uniqueness.f_transport",
              verify_iso_representation(iso, 100, int(rng.integers(2**31))), t),
        Check("uniqueness.action_intertwining", intertwining_residual(iso), t),
        Check("uniqueness.field_pushforward",
              pushforward_residual(iso, rng.uniform(-1, 1, K.dim)), t),
        Check("uniqueness.recovery_transport", cyclic_recovery_residual(K2), ctx.thr(1e-9)),
    ]
    return out


def group_commuting_diagram(ctx: Context) -> list[Check]:
    rng = ctx.rng("commuting_diagram")
    K, alg = ctx.K, ctx.algebra
    h = ctx.generator if ctx.generator is not None else alg.random_hermitian(rng)
    b = ctx.observable if ctx.observable is not None else alg.random_hermitian(rng)
    grid = np.linspace(0.0, 2 * np.pi, 201)
    diag = check_commuting_diagram(alg, ctx.state, h, b, grid, K=K)
    fg = fw = 0.0
    for t in np.linspace(-10, 10, 11):
        rg, rw = flow_invariance_residuals(K, h, t)
        fg, fw = max(fg, rg), max(fw, rw)
    nu = cyclic_point(K)
    p0 = random_point(K, rng)
    cons = 0.0
    for start in (nu, p0):
        fh0, fu0 = eval_f(K, h, start), eval_f(K, alg.unit(), start)
        for t in np.linspace(0, 10, 21):
            p = flow(K, h, start, t)
            cons = max(cons, abs(eval_f(K, h, p) - fh0), abs(eval_f(K, alg.unit(), p) - fu0))
    rate = max(poisson_rate_residual(K, h, b, p0, t) for t in (0.0, 0.37, 1.9))
    return [
        Check("commuting_diagram.trajectory", diag, ctx.thr(1e-8),
              detail="sup over 201 times in [0, 2pi] of |f_b(flow(nu)) - tr(rho(t) b)|"),
        Check("commuting_diagram.flow_preserves_g", fg, ctx.thr(1e-10)),
        Check("commuting_diagram.flow_preserves_omega", fw, ctx.thr(1e-10)),
        Check("commuting_diagram.conservation", cons, ctx.thr(1e-9),
              detail="f_h and f_1 along flows from nu and a random point"),
        Check("commuting_diagram.poisson_rate", rate, 1e-6,
              detail="centered difference, step 1e-5"),
    ]


def witness_state() -> tuple[StateFunctional, PairVector]:
    """Pure state e1 on M_2 and the pair (sigma_x / 2, sigma_y / 2)."""
    alg = MatrixAlgebra([2])
    phi = StateFunctional.from_vectors(alg, [[1, 0]])
    sx = JlbElement(alg, [[[0, 1], [1, 0]]])
    sy = JlbElement(alg, [[[0, -1j], [1j, 0]]])
    return phi, PairVector(0.5 * sx, 0.5 * sy)


def group_degeneracy(ctx: Context) -> list[Check]:
    phi, w = witness_state()
    Kw = build_kahler(phi, rank_cutoff=ctx.rank_cutoff)
    v = w.coords()
    gnull = float(v @ pair_gram(phi) @ v)
    outside = evaluate(phi, jordan(w.first, w.first)) + evaluate(phi, jordan(w.second, w.second))
    proj = float(np.abs(project(Kw, w).coords).max())
    geig = np.linalg.eigvalsh(Kw.G)
    # the same statements on the configured state
    K = ctx.K
    gp = pair_gram(ctx.state)
    ev, evec = np.linalg.eigh(gp)
    null = evec[:, ev <= ctx.rank_cutoff * ev.max()]
    nq = float(np.abs(K.projector @ null).max(initial=0.0))
    prop = 0.0
    for nvec in null_set_basis(ctx.state, ctx.rank_cutoff):
        for e in ctx.algebra.hermitian_basis:
            prop = max(prop, abs(evaluate(ctx.state, jordan(nvec, e))),
                       abs(evaluate(ctx.state, lie(nvec, e))))
    return [
        Check("degeneracy.witness_gram_null", abs(gnull), ctx.thr(1e-12),
              detail="g((sx/2, sy/2), same) for pure e1 on M_2"),
        Check("degeneracy.witness_outside_literal_kernel", outside, 0.1, ">",
              detail="phi(a o a) + phi(b o b) of the witness"),
        Check("degeneracy.witness_quotiented", proj, ctx.thr(1e-12)),
        Check("degeneracy.witness_g_positive", float(geig.min() / geig.max()), ctx.rank_cutoff, ">"),
        Check("degeneracy.null_quotiented", nq, ctx.thr(1e-10),
              detail=f"{null.shape[1]} null pair directions of the configured state"),
        Check("degeneracy.null_propagation", prop, ctx.thr(1e-9),
              detail="|phi(n o e)|, |phi({n, e})| over null set and basis"),
    ]


GROUPS: dict[str, Callable[[Context], list[Check]]] = {
    "jlb_axioms": group_jlb_axioms,
    "derived_identities": group_derived_identities,
    "cauchy_schwarz": group_cauchy_schwarz,
    "correspondence": group_correspondence,
    "kahler_structure": group_kahler_structure,
    "action_identities": group_action_identities,
    "cyclic_conditions": group_cyclic_conditions,
    "norm_bound": group_norm_bound,
    "uniqueness": group_uniqueness,
    "commuting_diagram": group_commuting_diagram,
    "degeneracy": group_degeneracy,
}


def resolve_only(only: Iterable[str] | None) -> tuple[set[str], set[str]]:
    """Split --only selections into group names and full check names."""
    groups, names = set(), set()
    for item in only or ():
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            if part in GROUPS:
                groups.add(part)
            elif part.split(".", 1)[0] in GROUPS and "." in part:
                names.add(part)
            else:
                raise KeyError(part)
    return groups, names


def thread_count() -> int | None:
    raw = os.environ.get("JLBK_THREADS", "").strip()
    if not raw:
        return None
    n = int(raw)
    return None if n <= 0 else n


@dataclass
class VerificationReport:
    checks: list[Check]
    environment: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict:
        n_pass = int(sum(bool(c.passed) for c in self.checks))
        return {"total": len(self.checks), "passed": n_pass, "failed": len(self.checks) - n_pass}

    def to_dict(self, timestamp: bool = True) -> dict:
        d = {"checks": [c.to_dict() for c in self.checks], "summary": self.summary(),
             "environment": self.environment}
        if timestamp:
            d["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        return d


def run_suite(ctx: Context, only: Iterable[str] | None = None,
              threads: int | None = None) -> VerificationReport:
    groups, names = resolve_only(only)
    wanted = groups | {n.split(".", 1)[0] for n in names}
    selected = [g for g in GROUPS if not wanted or g in wanted]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda g: GROUPS[g](ctx), selected))
    checks = [c for group, cs in zip(selected, results) for c in cs
              if not names or group in groups or c.name in names]
    if names - {c.name for c in checks}:
        raise KeyError(sorted(names - {c.name for c in checks})[0])
    checks.sort(key=lambda c: c.name)
    env = {
        "version": __version__,
        "seed": ctx.seed,
        "tolerances": {"check_tol": ctx.tol, "rank_cutoff": ctx.rank_cutoff},
        "blocks": list(ctx.algebra.block_dims),
        "real_dim_self_adjoint": ctx.algebra.real_dim,
        "m": ctx.K.m,
        "quotient_real_dim": ctx.K.dim,
    }
    return VerificationReport(checks, env)
