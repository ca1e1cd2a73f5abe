import json

import numpy as np
import pytest

from stargebra.cli import _parse_times, main
from stargebra.io import (
    InputError,
    algebra_from_json,
    array_to_json,
    load_json,
    matrix_from_json,
    rational_from_json,
    to_complex,
    vector_from_json,
)
from stargebra.linalg import hausdorff


def cpx(m):
    return array_to_json(np.asarray(m, dtype=complex))


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestJson:
    def test_complex_pairs(self):
        assert to_complex([1, -2]) == 1 - 2j
        assert to_complex(3) == 3

    @pytest.mark.parametrize("bad", [[1, 2, 3], "x", None])
    def test_bad_complex(self, bad):
        with pytest.raises(InputError):
            to_complex(bad)

    def test_matrix_round_trip(self):
        m = np.array([[1 + 2j, 0], [-1j, 4]])
        assert np.array_equal(matrix_from_json(array_to_json(m)), m)

    def test_ragged_matrix(self):
        with pytest.raises(InputError):
            matrix_from_json([[[1, 0]], [[1, 0], [2, 0]]])

    def test_vector_forms(self):
        assert np.array_equal(vector_from_json({"x": [[1, 0], [0, 1]]}), [1, 1j])

    def test_group_document(self):
        A, gens = algebra_from_json({"group": {"cyclic": 3}})
        assert A.dim == 3 and len(gens) == 3

    def test_generator_document(self):
        A, _ = algebra_from_json({"ambient_dim": 2, "generators": [cpx(np.diag([1, 2]))]})
        assert A.dim == 2

    def test_ambient_mismatch(self):
        from stargebra.errors import PreconditionError
        with pytest.raises(PreconditionError):
            algebra_from_json({"ambient_dim": 3, "generators": [cpx(np.eye(2))]})

    def test_rational(self):
        r = rational_from_json({"num": [[0, 0], [1, 0]], "den": [[1, 0]]})
        assert r(2.0) == 2.0

    def test_parse_position(self, write):
        path = write("bad.json", '{"a": [1,\n  }')
        with pytest.raises(InputError) as exc:
            load_json(path)
        assert exc.value.position == (2, 3)


class TestTimes:
    def test_range(self):
        ts = _parse_times("0:10:0.1")
        assert len(ts) == 101 and ts[-1] == pytest.approx(10)

    def test_single(self):
        assert _parse_times("2.5").tolist() == [2.5]

    @pytest.mark.parametrize("bad", ["0:1", "0:1:0", "a:b:c"])
    def test_bad(self, bad):
        with pytest.raises(InputError):
            _parse_times(bad)


class TestCommands:
    def test_spectrum_identity(self, capsys, write):
        code, out, _ = run(capsys, "spectrum", write("id.json", cpx(np.eye(3))))
        assert code == 0
        assert json.loads(out)["eigenvalues"] == [[1.0, 0.0]] * 3

    def test_spectrum_k(self, capsys, write):
        path = write("a.json", {"matrix": cpx([[0, 1], [0, 0]])})
        code, out, _ = run(capsys, "spectrum", path, "--k", "1")
        d = json.loads(out)
        assert d["squarings"] == 1 and d["spectral_radius_limit"] == 0.0 and d["ptak"] == pytest.approx(1)

    def test_gelfand_cyclic4(self, capsys, write):
        code, out, _ = run(capsys, "gelfand", write("g.json", {"group": {"cyclic": 4}}), "--seed", "7")
        assert code == 0
        d = json.loads(out)
        assert len(d["characters"]) == 4
        shift = np.array([complex(*v) for v in d["transforms"][1]])
        assert hausdorff(shift, np.exp(2j * np.pi * np.arange(4) / 4)) <= 1e-10

    def test_gns_m2(self, capsys, write):
        F = np.zeros((2, 2))
        F[0, 0] = 1
        code, out, _ = run(capsys, "gns", write("f.json", {"F": cpx(F)}))
        d = json.loads(out)
        assert code == 0 and d["quotient_dim"] == 2 and d["is_pure"] and d["variation"] == pytest.approx(1)
        assert np.array(d["rep"]).shape == (4, 2, 2, 2)

    def test_gns_not_positive(self, capsys, write):
        F = np.zeros((2, 2))
        F[1, 0] = 1
        code, _, err = run(capsys, "gns", write("f.json", {"F": cpx(F)}))
        assert code == 2 and "gns: φ positive" in err

    def test_gns_with_algebra(self, capsys, write):
        alg = write("alg.json", {"ambient_dim": 2, "generators": [cpx(np.diag([1, 2]))]})
        code, out, _ = run(capsys, "gns", write("f.json", {"F": cpx(np.diag([1, 0]))}), "--algebra", alg)
        assert json.loads(out)["quotient_dim"] == 1

    def test_commutant(self, capsys, write):
        path = write("s.json", {"ambient_dim": 3, "generators": [cpx(np.diag([1, 1, 2]))]})
        code, out, _ = run(capsys, "commutant", path)
        d = json.loads(out)
        assert (d["commutant_dim"], d["bicommutant_dim"], d["wstar_dim"]) == (5, 2, 2)
        assert d["maximal_commutative"] is False

    def test_commutant_maximal(self, capsys, write):
        path = write("s.json", {"ambient_dim": 2, "generators": [cpx(np.diag([1, 2]))]})
        _, out, _ = run(capsys, "commutant", path)
        assert json.loads(out)["maximal_commutative"] is True

    def test_decompose(self, capsys, write):
        rep = [np.kron(np.eye(2), m) for m in (np.diag([1, 0]), np.diag([0, 1]), [[0, 1], [0, 0]], [[0, 0], [1, 0]])]
        code, out, _ = run(capsys, "decompose", write("r.json", {"rep": [cpx(m) for m in rep]}))
        assert json.loads(out)["dims"] == [2, 2]

    def test_resolve_with_vector(self, capsys, write):
        b = write("b.json", cpx(np.diag([1, 1, 2])))
        x = write("x.json", {"x": [[0.6, 0], [0, 0], [0, 0.8]]})
        code, out, _ = run(capsys, "resolve", b, "--vector", x)
        d = json.loads(out)
        assert d["points"] == [[1.0, 0.0], [2.0, 0.0]] and d["ranks"] == [2, 1]
        assert d["reconstruction_error"] <= 1e-12
        assert d["vector_measure"] == pytest.approx([0.36, 0.64])

    def test_resolve_non_normal(self, capsys, write):
        code, _, err = run(capsys, "resolve", write("j.json", cpx([[1, 1], [0, 1]])))
        assert code == 2 and "resolve_normal" in err and "normal" in err

    def test_calculus(self, capsys, write):
        path = write("a.json", cpx(np.diag([0, np.pi])))
        _, out, _ = run(capsys, "calculus", path, "--fn", "cos")
        assert np.allclose(np.array(json.loads(out)["result"])[..., 0], np.diag([1, -1]))

    def test_calculus_rational_pole(self, capsys, write):
        a = write("a.json", cpx(np.diag([1, 2])))
        r = write("r.json", {"num": [[1, 0]], "den": [[-2, 0], [1, 0]]})
        code, _, err = run(capsys, "calculus", a, "--rational", r)
        assert code == 2 and "pole" in err

    def test_evolve(self, capsys, write):
        a = write("a.json", cpx([[1]]))
        x = write("x.json", [[1, 0]])
        code, out, _ = run(capsys, "evolve", "--a", a, "--x", x, "--times", "0:1:0.5")
        rows = json.loads(out)["rows"]
        assert [r["t"] for r in rows] == [0.0, 0.5, 1.0]
        assert complex(*rows[2]["state"][0]) == pytest.approx(np.exp(-1j))
        assert all(r["norm_deviation"] <= 1e-14 for r in rows)
        assert rows[0]["ivp_residual"] == pytest.approx(5e-5, rel=1e-3)

    def test_check(self, capsys):
        code, out, _ = run(capsys, "check", "--seed", "42", "--cases", "5")
        d = json.loads(out)
        assert code == 0 and d["failed"] == 0 and d["passed"] == d["total"] > 0
        assert all("residuals" in v for v in d["properties"].values())

    def test_text_output(self, capsys, write):
        _, out, _ = run(capsys, "--output", "text", "spectrum", write("id.json", cpx(np.eye(2))))
        assert "eigenvalues: [[1.0, 0.0], [1.0, 0.0]]" in out

    def test_flags_before_command_survive(self, capsys):
        _, out, _ = run(capsys, "--seed", "5", "check", "--cases", "2")
        assert json.loads(out)["seed"] == 5


class TestErrors:
    def test_parse_error_position(self, capsys, write):
        code, _, err = run(capsys, "spectrum", write("bad.json", "[[[1, 0],\n"))
        assert code == 1 and "line" in err and "column" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "spectrum", str(tmp_path / "nope.json"))
        assert code == 1

    def test_missing_field(self, capsys, write):
        code, _, err = run(capsys, "gns", write("f.json", {"G": 1}))
        assert code == 1 and "F" in err

    def test_non_commutative_gelfand(self, capsys, write):
        path = write("a.json", {"ambient_dim": 2, "generators": [cpx([[0, 1], [0, 0]])]})
        code, _, err = run(capsys, "gelfand", path)
        assert code == 2 and "commutative" in err

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2


def test_deterministic(capsys, write):
    path = write("g.json", {"group": {"cyclic": 6}})
    first = run(capsys, "gelfand", path, "--seed", "11")[1]
    second = run(capsys, "gelfand", path, "--seed", "11")[1]
    assert first == second
