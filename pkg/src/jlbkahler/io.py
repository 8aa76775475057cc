"""JSON problem specs, element files, Kahler dumps and trajectory CSV.

Complex numbers are ``[re, im]`` pairs and matrices are row-major nested
lists, so binary64 values round-trip exactly through ``json``.
"""

from __future__ import annotations

import csv
import io as _io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import InputError, JlbElement, MatrixAlgebra
from .kahler import KahlerStructure
from .representation import cyclic_point
from .states import DEFAULT_RANK_CUTOFF, StateFunctional

DEFAULT_CHECK_TOL = 1e-9
SPEC_NORM_TOL = 1e-10


class SpecError(InputError):
    """Invalid input document; ``field`` names the offending entry."""

    def __init__(self, field: str, why: str):
        super().__init__(f"{field}: {why}")
        self.field = field


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    algebra: MatrixAlgebra
    state: StateFunctional
    state_kind: str
    rank_cutoff: float = DEFAULT_RANK_CUTOFF
    check_tol: float = DEFAULT_CHECK_TOL
    seed: int = 0


def decode_complex(x, where: str) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if (isinstance(x, list) and len(x) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x)):
        return complex(x[0], x[1])
    raise SpecError(where, f"expected a [re, im] pair, got {x!r}")


def decode_vector(v, where: str) -> np.ndarray:
    if not isinstance(v, list):
        raise SpecError(where, "expected a list of complex entries")
    return np.array([decode_complex(x, f"{where}[{i}]") for i, x in enumerate(v)], dtype=complex)


def decode_matrix(m, where: str) -> np.ndarray:
    if not isinstance(m, list) or not m:
        raise SpecError(where, "expected a non-empty list of rows")
    rows = [decode_vector(r, f"{where}[{i}]") for i, r in enumerate(m)]
    if any(len(r) != len(rows) for r in rows):
        raise SpecError(where, "matrix must be square")
    return np.array(rows)


def encode_complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def encode_matrix(m: np.ndarray) -> list:
    return [[encode_complex(z) for z in row] for row in np.asarray(m, dtype=complex)]


def _load(text: str | bytes) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError("document", f"malformed JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise SpecError("document", "top level must be an object")
    return doc


def parse_algebra(doc) -> MatrixAlgebra:
    if not isinstance(doc, dict) or "blocks" not in doc:
        raise SpecError("algebra", "missing 'blocks' list")
    blocks = doc["blocks"]
    if not isinstance(blocks, list) or not blocks:
        raise SpecError("algebra.blocks", "expected a non-empty list of block dimensions")
    for i, d in enumerate(blocks):
        if not isinstance(d, int) or isinstance(d, bool) or d <= 0:
            raise SpecError(f"algebra.blocks[{i}]", f"block dimension must be a positive integer, got {d!r}")
    return MatrixAlgebra(blocks)


def parse_state(doc, algebra: MatrixAlgebra) -> tuple[StateFunctional, str]:
    if not isinstance(doc, dict):
        raise SpecError("state", "expected an object")
    kind = doc.get("kind")
    k = len(algebra.block_dims)
    if kind == "pure":
        vecs = doc.get("vectors")
        if not isinstance(vecs, list) or len(vecs) != k:
            raise SpecError("state.vectors", f"expected {k} block vectors")
        vs = [decode_vector(v, f"state.vectors[{i}]") for i, v in enumerate(vecs)]
        for i, (v, d) in enumerate(zip(vs, algebra.block_dims)):
            if len(v) != d:
                raise SpecError(f"state.vectors[{i}]", f"block dimension {d} but vector has length {len(v)}")
        norm2 = sum(float(np.vdot(v, v).real) for v in vs)
        if abs(norm2 - 1) > SPEC_NORM_TOL:
            raise SpecError("state.vectors", f"normalization: squared norm {norm2!r} is not 1")
        return StateFunctional.from_vectors(algebra, vs, norm_tol=SPEC_NORM_TOL), kind
    if kind == "density":
        blocks = doc.get("blocks")
        if not isinstance(blocks, list) or len(blocks) != k:
            raise SpecError("state.blocks", f"expected {k} density blocks")
        rs = [decode_matrix(m, f"state.blocks[{i}]") for i, m in enumerate(blocks)]
        for i, (r, d) in enumerate(zip(rs, algebra.block_dims)):
            if r.shape != (d, d):
                raise SpecError(f"state.blocks[{i}]", f"block dimension {d} but matrix is {r.shape[0]}x{r.shape[0]}")
            if np.abs(r - r.conj().T).max() > 1e-10:
                raise SpecError(f"state.blocks[{i}]", "density block is not Hermitian")
            if np.linalg.eigvalsh((r + r.conj().T) / 2).min() < -1e-10:
                raise SpecError(f"state.blocks[{i}]", "density block is not positive semidefinite")
        total = sum(np.trace(r).real for r in rs)
        if abs(total - 1) > SPEC_NORM_TOL:
            raise SpecError("state.blocks", f"normalization: total trace {total!r} is not 1")
        return StateFunctional(algebra, rs, psd_tol=1e-10, norm_tol=SPEC_NORM_TOL), kind
    raise SpecError("state.kind", f"expected 'pure' or 'density', got {kind!r}")


def parse_spec(text: str | bytes) -> ProblemSpec:
    doc = _load(text)
    algebra = parse_algebra(doc.get("algebra"))
    if "state" not in doc:
        raise SpecError("state", "missing")
    state, kind = parse_state(doc["state"], algebra)
    tols = doc.get("tolerances", {})
    if not isinstance(tols, dict):
        raise SpecError("tolerances", "expected an object")
    vals = {}
    for key, default in (("rank_cutoff", DEFAULT_RANK_CUTOFF), ("check_tol", DEFAULT_CHECK_TOL)):
        v = tols.get(key, default)
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not v > 0:
            raise SpecError(f"tolerances.{key}", f"must be a positive number, got {v!r}")
        vals[key] = float(v)
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise SpecError("seed", f"must be an integer, got {seed!r}")
    return ProblemSpec(algebra, state, kind, vals["rank_cutoff"], vals["check_tol"], seed)


def load_spec(path: str | Path) -> ProblemSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError("spec", f"cannot read {path}: {exc.strerror}") from None
    return parse_spec(text)


def parse_element(text: str | bytes, algebra: MatrixAlgebra,
                  default_label: str = "x") -> tuple[str, JlbElement]:
    """Hermitian element file ``{"label": ..., "blocks": [matrix, ...]}``."""
    doc = _load(text)
    label = doc.get("label", default_label)
    if not isinstance(label, str) or not label or "," in label:
        raise SpecError("label", "must be a non-empty string without commas")
    blocks = doc.get("blocks")
    k = len(algebra.block_dims)
    if not isinstance(blocks, list) or len(blocks) != k:
        raise SpecError("blocks", f"expected {k} blocks")
    ms = [decode_matrix(m, f"blocks[{i}]") for i, m in enumerate(blocks)]
    for i, (m, d) in enumerate(zip(ms, algebra.block_dims)):
        if m.shape != (d, d):
            raise SpecError(f"blocks[{i}]", f"block dimension {d} but matrix is {m.shape[0]}x{m.shape[0]}")
        if np.abs(m - m.conj().T).max() > 1e-12 * (1 + np.abs(m).max()):
            raise SpecError(f"blocks[{i}]", "element block is not Hermitian")
    return label, JlbElement(algebra, ms)


def load_element(path: str | Path, algebra: MatrixAlgebra) -> tuple[str, JlbElement]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError("element", f"cannot read {path}: {exc.strerror}") from None
    return parse_element(text, algebra, default_label=Path(path).stem)


def element_document(label: str, a: JlbElement) -> dict:
    return {"label": label, "blocks": [encode_matrix(b) for b in a.blocks]}


def _real_matrix(m: np.ndarray) -> list:
    return [[float(x) for x in row] for row in np.asarray(m)]


def kahler_dump(K: KahlerStructure) -> dict:
    nu = cyclic_point(K)
    lifts = [{"first": [encode_matrix(b) for b in p.first.blocks],
              "second": [encode_matrix(b) for b in p.second.blocks]} for p in K.lifts]
    return {
        "blocks": list(K.algebra.block_dims),
        "m": K.m,
        "real_dim": K.dim,
        "rank_cutoff": K.rank_cutoff,
        "G": _real_matrix(K.G),
        "W": _real_matrix(K.W),
        "Jm": _real_matrix(K.Jm),
        "nu": [float(x) for x in nu.coords],
        "lifts": lifts,
    }


def trajectory_csv(times, columns: dict[str, list[float]]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    labels = list(columns)
    w.writerow(["t", *labels])
    for i, t in enumerate(times):
        w.writerow([repr(float(t)), *(repr(float(columns[k][i])) for k in labels)])
    return buf.getvalue()


def read_trajectory_csv(text: str) -> tuple[list[str], np.ndarray]:
    rows = list(csv.reader(_io.StringIO(text)))
    return rows[0], np.array([[float(x) for x in r] for r in rows[1:]])


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
