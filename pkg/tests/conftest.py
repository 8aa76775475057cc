import numpy as np
import pytest

from jlbkahler import JlbElement, MatrixAlgebra, StateFunctional, build_kahler

SPECS = __import__("pathlib").Path(__file__).resolve().parents[1] / "scripts" / "specs"

M2 = MatrixAlgebra([2])


def herm(alg, *blocks):
    return JlbElement(alg, [np.asarray(b, dtype=complex) for b in blocks])


SX = herm(M2, [[0, 1], [1, 0]])
SY = herm(M2, [[0, -1j], [1j, 0]])
SZ = herm(M2, [[1, 0], [0, -1]])


def pure(alg, *vectors):
    return StateFunctional.from_vectors(alg, [np.asarray(v, dtype=complex) for v in vectors])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def e1_state():
    return pure(M2, [1, 0])


@pytest.fixture
def plus_state():
    return pure(M2, np.array([1, 1]) / np.sqrt(2))


@pytest.fixture
def e1_kahler(e1_state):
    return build_kahler(e1_state)


@pytest.fixture
def specs_dir():
    return SPECS


ACCEPTANCE: list[str] = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2} {title}: {detail}"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
