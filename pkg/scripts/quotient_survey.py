"""Survey quotient dimensions and Hamiltonian span ranks across algebras and state ranks.

For each configuration prints 2m, the span rank of the Hamiltonian fields at
the cyclic point, the orbit oracle, and the worst Kahler residual.
"""

import argparse
import time

import numpy as np

from jlbkahler import MatrixAlgebra, build_kahler, cyclic_point, random_state
from jlbkahler.kahler import verify_kahler
from jlbkahler.representation import span_rank
from jlbkahler.states import gns_dimension, orbit_tangent_dimension

ALGEBRAS = [[1], [2], [3], [2, 1], [3, 1], [2, 2], [4, 2, 1]]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'blocks':<12}{'rank':>5}{'2m':>5}{'GNS':>5}{'span':>6}{'oracle':>8}{'residual':>11}{'ms':>8}")
    for dims in ALGEBRAS:
        alg = MatrixAlgebra(dims)
        for r in sorted({1, max(1, sum(dims) // 2), sum(dims)}):
            phi = random_state(alg, rng, rank=r)
            t0 = time.perf_counter()
            K = build_kahler(phi)
            rep = verify_kahler(K)
            ms = 1e3 * (time.perf_counter() - t0)
            worst = max(c.value for c in rep.checks if c.kind == "max")
            print(f"{str(dims):<12}{r:>5}{K.dim:>5}{gns_dimension(phi):>5}"
                  f"{span_rank(K, cyclic_point(K)):>6}{orbit_tangent_dimension(phi):>8}"
                  f"{worst:>11.1e}{ms:>8.1f}")


if __name__ == "__main__":
    main()
