"""Flow the plus state under sigma_z and compare three ways of computing <sigma_x>(t).

Prints the sup errors of the Kahler trajectory against the Hilbert-space
evolution and against cos(2t), and optionally writes the trajectory CSV.
"""

import argparse

import numpy as np

from jlbkahler import JlbElement, MatrixAlgebra, StateFunctional, build_kahler, cyclic_point
from jlbkahler.dynamics import hilbert_trajectory, trajectory
from jlbkahler.io import trajectory_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=201)
    ap.add_argument("--t1", type=float, default=2 * np.pi)
    ap.add_argument("--csv", default=None, help="write the trajectory here")
    args = ap.parse_args()

    alg = MatrixAlgebra([2])
    phi = StateFunctional.from_vectors(alg, [np.array([1, 1]) / np.sqrt(2)])
    sz = JlbElement(alg, [np.diag([1.0, -1.0])])
    sx = JlbElement(alg, [[[0, 1], [1, 0]]])
    K = build_kahler(phi)
    grid = np.linspace(0, args.t1, args.points)
    res = trajectory(K, sz, cyclic_point(K), grid, {"sx": sx})
    kahler = np.array(res.observables["sx"])
    hilbert = np.array(hilbert_trajectory(phi, sz, sx, grid))
    print(f"quotient real dimension 2m = {K.dim}")
    print(f"sup |Kahler - Hilbert| = {np.abs(kahler - hilbert).max():.3e}")
    print(f"sup |Kahler - cos 2t|  = {np.abs(kahler - np.cos(2 * grid)).max():.3e}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(trajectory_csv(res.times, res.observables))


if __name__ == "__main__":
    main()
