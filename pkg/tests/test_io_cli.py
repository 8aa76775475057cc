import json

import numpy as np
import pytest

from jlbkahler.algebra import MatrixAlgebra
from jlbkahler.checks import GROUPS, Context, resolve_only, run_suite
from jlbkahler.cli import main
from jlbkahler.io import (
    SpecError,
    decode_matrix,
    encode_matrix,
    parse_element,
    parse_spec,
    read_trajectory_csv,
)
from jlbkahler.states import evaluate

from conftest import SZ

PURE = {"algebra": {"blocks": [2]}, "state": {"kind": "pure", "vectors": [[[1, 0], [0, 0]]]}}


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


class TestParse:
    def test_valid_pure(self):
        spec = parse_spec(json.dumps(PURE))
        assert spec.algebra == MatrixAlgebra([2])
        assert evaluate(spec.state, SZ) == 1.0
        assert spec.rank_cutoff == 1e-9 and spec.check_tol == 1e-9 and spec.seed == 0

    def test_trace_normalization(self):
        doc = {"algebra": {"blocks": [2]},
               "state": {"kind": "density", "blocks": [[[[0.5, 0], [0, 0]], [[0, 0], [0.4, 0]]]]}}
        with pytest.raises(SpecError, match="normalization"):
            parse_spec(json.dumps(doc))

    def test_block_dimension(self):
        doc = dict(PURE, algebra={"blocks": [0]})
        with pytest.raises(SpecError, match="block dimension"):
            parse_spec(json.dumps(doc))

    @pytest.mark.parametrize("mutate,field", [
        (lambda d: d["state"].update(vectors=[[[1, 0], [1, 0]]]), "state.vectors"),
        (lambda d: d["state"].update(kind="mixed"), "state.kind"),
        (lambda d: d.update(seed=1.5), "seed"),
        (lambda d: d.update(tolerances={"check_tol": -1}), "tolerances.check_tol"),
        (lambda d: d["state"].update(vectors=[[[1, 0]]]), "state.vectors[0]"),
    ])
    def test_field_named(self, mutate, field):
        doc = json.loads(json.dumps(PURE))
        mutate(doc)
        with pytest.raises(SpecError) as err:
            parse_spec(json.dumps(doc))
        assert err.value.field == field

    def test_not_psd(self):
        doc = {"algebra": {"blocks": [2]},
               "state": {"kind": "density", "blocks": [[[[1.2, 0], [0, 0]], [[0, 0], [-0.2, 0]]]]}}
        with pytest.raises(SpecError, match="positive semidefinite"):
            parse_spec(json.dumps(doc))

    def test_malformed(self):
        with pytest.raises(SpecError):
            parse_spec("{not json")

    def test_matrix_round_trip(self, rng):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        back = decode_matrix(json.loads(json.dumps(encode_matrix(m))), "m")
        assert np.array_equal(back, m)

    def test_element_hermitian(self):
        with pytest.raises(SpecError, match="Hermitian"):
            parse_element(json.dumps({"blocks": [[[[0, 0], [1, 0]], [[0, 0], [0, 0]]]]}),
                          MatrixAlgebra([2]))


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCli:
    def test_verify_pure_qubit(self, specs_dir, capsys):
        code, out, _ = run(["verify", "--spec", str(specs_dir / "pure_qubit.json"),
                            "--tol", "1e-9", "--seed", "42", "--no-timestamp"], capsys)
        assert code == 0
        rep = json.loads(out)
        names = [c["name"] for c in rep["checks"]]
        assert names == sorted(names) and len(names) == len(set(names))
        assert rep["summary"]["failed"] == 0
        assert rep["environment"]["seed"] == 42 and rep["environment"]["m"] == 2
        assert "timestamp" not in rep

    def test_deterministic(self, specs_dir, capsys, monkeypatch):
        argv = ["verify", "--spec", str(specs_dir / "mixed_m2_m1.json"), "--no-timestamp",
                "--only", "action_identities,uniqueness"]
        _, first, _ = run(argv, capsys)
        monkeypatch.setenv("JLBK_THREADS", "1")
        _, second, _ = run(argv, capsys)
        assert first == second

    def test_only(self, specs_dir, capsys):
        code, out, _ = run(["verify", "--spec", str(specs_dir / "pure_qubit.json"),
                            "--only", "degeneracy.witness_g_positive", "--only", "norm_bound"], capsys)
        assert code == 0
        names = [c["name"] for c in json.loads(out)["checks"]]
        assert names == ["degeneracy.witness_g_positive", "norm_bound.excess", "norm_bound.unit"]
        code, _, err = run(["verify", "--spec", str(specs_dir / "pure_qubit.json"),
                            "--only", "action_identities.nope"], capsys)
        assert code == 2 and "action_identities.nope" in err

    def test_flow_cosine(self, specs_dir, capsys):
        code, out, _ = run(["flow", "--spec", str(specs_dir / "plus_state.json"),
                            "--hamiltonian", str(specs_dir / "sz.json"),
                            "--observable", str(specs_dir / "sx.json"),
                            "--t0", "0", "--t1", "6.2832", "--steps", "200"], capsys)
        assert code == 0
        header, data = read_trajectory_csv(out)
        assert header == ["t", "sx"] and data.shape == (201, 2)
        assert np.abs(data[:, 1] - np.cos(2 * data[:, 0])).max() < 1e-8

    def test_corrupted_density(self, tmp_path, capsys):
        doc = {"algebra": {"blocks": [2]},
               "state": {"kind": "density", "blocks": [[[[0.6, 0], [0.3, 0]], [[0.3, 0], [0.5, 0]]]]}}
        code, _, err = run(["verify", "--spec", _write(tmp_path, "bad.json", doc)], capsys)
        assert code == 2 and "normalization" in err

    def test_build(self, specs_dir, capsys, tmp_path):
        out_file = tmp_path / "k.json"
        code, _, _ = run(["build", "--spec", str(specs_dir / "pure_qubit.json"),
                          "--out", str(out_file)], capsys)
        dump = json.loads(out_file.read_text())
        assert code == 0 and dump["m"] == 2
        G, W, J = (np.array(dump[k]) for k in ("G", "W", "Jm"))
        assert np.abs(W - J.T @ G).max() < 1e-12
        nu = np.array(dump["nu"])
        assert nu @ G @ nu == pytest.approx(2.0)
        assert len(dump["lifts"]) == 4

    @pytest.mark.parametrize("recipe", ["permute", "orthogonal-mix", "reorder-eigenbasis"])
    def test_compare(self, specs_dir, capsys, recipe):
        code, out, _ = run(["compare", "--spec", str(specs_dir / "mixed_m2_m1.json"),
                            "--rebase", recipe, "--seed", "3", "--no-timestamp"], capsys)
        assert code == 0
        U = np.array(json.loads(out)["U"])
        assert U.shape == (10, 10)

    def test_usage_errors(self, capsys):
        assert main(["explode"]) == 2
        assert main(["verify", "--spec", "x.json", "--bogus"]) == 2
        assert main(["verify", "--spec", "/nonexistent/spec.json"]) == 2
        capsys.readouterr()


class TestSuite:
    def test_every_group_addressable(self):
        for g in GROUPS:
            assert resolve_only([g]) == ({g}, set())
        with pytest.raises(KeyError):
            resolve_only(["nothing"])

    def test_failure_exit(self, specs_dir, capsys):
        # an impossible tolerance turns residual checks into failures
        code, out, _ = run(["verify", "--spec", str(specs_dir / "pure_qubit.json"),
                            "--tol", "1e-30", "--only", "action_identities", "--no-timestamp"], capsys)
        rep = json.loads(out)
        assert code == 1 and rep["summary"]["failed"] > 0

    def test_mixed_span_rank(self, specs_dir):
        from jlbkahler.io import load_spec
        spec = load_spec(specs_dir / "mixed_m2_m1.json")
        rep = run_suite(Context(spec.algebra, spec.state, seed=1), ["cyclic_conditions.span_rank"])
        (check,) = rep.checks
        assert check.passed and "mixed" in check.detail
