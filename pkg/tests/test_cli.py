"""CLI surface: schemas, exit codes, determinism, round trips."""

import json
import math

import pytest

from aatkit.algebroid import AlgebroidCurve
from aatkit.cli import parse_spec, run_command
from aatkit.errors import InvariantViolation, SchemaError
from aatkit.functions import FunctionSpec
from aatkit.poly import MultiPoly


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    U, V, W = (MultiPoly.variable(v) for v in "UVW")
    u = MultiPoly.variable("u")
    x, z = MultiPoly.variable("x"), MultiPoly.variable("z")

    def dump(name, data):
        p = root / name
        p.write_text(json.dumps(data))
        return str(p)

    cubic = [8 * u, MultiPoly.zero(("u",)), 3 * (1 - u), 1 - u]
    quartic = (W ** 2 + U ** 2 - V ** 2) ** 2 - 4 * U ** 2 * W ** 2 * (1 - V ** 2)
    return {
        "tan": dump("tan.json", {"type": "builtin", "name": "tan"}),
        "sin": dump("sin.json", {"type": "builtin", "name": "sin"}),
        "exp": dump("exp.json", {"type": "builtin", "name": "exp"}),
        "g_tan": dump("g_tan.json", (W * (1 - U * V) - (U + V)).to_json_dict()),
        "g_exp": dump("g_exp.json", (W - U * V).to_json_dict()),
        "g_bad": dump("g_bad.json", (W - U - V).to_json_dict()),
        "g_sin": dump("g_sin.json", quartic.to_json_dict()),
        "cubic": dump("cubic.json", {"type": "curve", "n": 3,
                                     "p": [p.to_json_dict() for p in cubic]}),
        "bad_curve": dump("bad_curve.json", {
            "type": "curve", "n": 1,
            "p": [MultiPoly.zero(("u",)).to_json_dict(),
                  u.to_json_dict()]}),
        "dbl": dump("dbl.json", (x - z * z).to_json_dict()),
        "root": root,
    }


def run_json(argv, capsys):
    code = run_command(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestParseSpec:
    def test_builtin(self, files):
        spec = parse_spec(files["tan"])
        assert isinstance(spec, FunctionSpec) and spec.name == "tan"

    def test_curve(self, files):
        curve = parse_spec(files["cubic"])
        assert isinstance(curve, AlgebroidCurve) and curve.n == 3

    def test_poly_by_shape(self, files):
        poly = parse_spec(files["g_tan"])
        assert isinstance(poly, MultiPoly)

    def test_zero_p0_invariant(self, files):
        with pytest.raises(InvariantViolation):
            parse_spec(files["bad_curve"])

    def test_unknown_schema(self, files, tmp_path):
        p = tmp_path / "junk.json"
        p.write_text('{"hello": 1}')
        with pytest.raises(SchemaError):
            parse_spec(str(p))


class TestExitCodes:
    def test_verified_exit_zero(self, files, capsys):
        code, rep = run_json(["aat", "verify", "--poly", files["g_tan"],
                              "--fn", files["tan"]], capsys)
        assert code == 0 and rep["status"] == "verified"

    def test_refuted_exit_one(self, files, capsys):
        code, rep = run_json(["aat", "verify", "--poly", files["g_bad"],
                              "--fn", files["exp"]], capsys)
        assert code == 1 and rep["status"] == "refuted"

    def test_schema_error_exit_two(self, files, capsys):
        code = run_command(["algebroid", "singular", "--curve",
                            files["bad_curve"]])
        capsys.readouterr()
        assert code == 2

    def test_usage_error_exit_two(self, capsys):
        code = run_command(["aat", "verify"])  # missing required args
        capsys.readouterr()
        assert code == 2


class TestReports:
    def test_expand_matches_reference(self, files, capsys):
        code, rep = run_json(["algebroid", "expand", "--curve", files["cubic"],
                              "--center", "0", "--order", "12"], capsys)
        assert code == 0
        b = rep["branches"]
        assert len(b) == 3
        polar = [x for x in b if x["low_exp"] == -1]
        assert len(polar) == 2 and all(x["ram_index"] == 2 for x in polar)
        regular = [x for x in b if x["ram_index"] == 1][0]
        assert abs(regular["coeffs"][0][0] + 1 / 3) < 1e-12
        assert all(x["residual_valuation"] is None for x in b)

    def test_singular_report(self, files, capsys):
        code, rep = run_json(["algebroid", "singular",
                              "--curve", files["cubic"]], capsys)
        assert code == 0
        locs = {tuple(p["location"]) if isinstance(p["location"], list)
                else p["location"] for p in rep["points"]}
        assert (0.0, 0.0) in locs and (1.0, 0.0) in locs and \
            (-1.0, 0.0) in locs and "infinity" in locs

    def test_monodromy_cycles(self, files, capsys):
        code, rep = run_json(["algebroid", "monodromy", "--curve",
                              files["cubic"], "--around", "1",
                              "--base", "3"], capsys)
        assert code == 0
        assert sorted(len(c) for c in rep["cycles"]) == [3]
        assert sorted(rep["perm"]) == [1, 2, 3]  # 1-based indices

    def test_period_find(self, files, capsys):
        code, rep = run_json(["period", "find", "--fn", files["tan"],
                              "--poly", files["g_tan"], "--seed", "0"], capsys)
        assert code == 0
        assert rep["classification"] == "periodic"
        assert abs(rep["fundamental"][0] - math.pi) < 1e-9

    def test_reduce_double(self, files, capsys):
        code, rep = run_json(["reduce", "double", "--poly", files["dbl"],
                              "--m", "3"], capsys)
        assert code == 0
        exps = {tuple(t["exps"]) for t in rep["gamma"]["terms"]}
        assert exps == {(1, 0), (0, 8)}  # x and x3^8

    def test_provenance_echoed(self, files, capsys):
        _, rep = run_json(["--seed", "5", "aat", "verify",
                           "--poly", files["g_tan"], "--fn", files["tan"]],
                          capsys)
        assert rep["config"]["seed"] == 5
        assert rep["command"] == "aat verify"

    def test_env_seed_override(self, files, capsys, monkeypatch):
        monkeypatch.setenv("ATL_SEED", "99")
        _, rep = run_json(["aat", "verify", "--poly", files["g_tan"],
                           "--fn", files["tan"], "--seed", "5"], capsys)
        assert rep["config"]["seed"] == 99

    def test_text_format(self, files, capsys):
        code = run_command(["--format", "text", "aat", "verify",
                            "--poly", files["g_tan"], "--fn", files["tan"]])
        out = capsys.readouterr().out
        assert code == 0
        assert "status: verified" in out


class TestReduceCommands:
    def test_koebe_from_series_files(self, files, capsys, tmp_path):
        import math
        from fractions import Fraction
        from aatkit.scalars import ExactScalar
        from aatkit.series import TruncSeries

        def elem(scale):
            coeffs = [ExactScalar(Fraction(scale, math.factorial(k)))
                      for k in range(16)]
            return TruncSeries(ExactScalar(0), coeffs, exact=True)

        p1 = tmp_path / "p1.json"
        p2 = tmp_path / "p2.json"
        p1.write_text(json.dumps(elem(1).to_json_dict()))
        p2.write_text(json.dumps(elem(2).to_json_dict()))
        code, rep = run_json(["reduce", "koebe", "--poly", files["g_exp"],
                              "--p1", str(p1), "--p2", str(p2),
                              "--p3", str(p2)], capsys)
        assert code == 0
        exps = {tuple(t["exps"]) for t in rep["gbar"]["terms"]}
        assert exps == {(1, 1, 0), (0, 0, 1)}  # UV and W

    def test_schwarz_report(self, files, capsys):
        code, rep = run_json(["reduce", "schwarz", "--poly", files["g_sin"],
                              "--fn", files["sin"], "--shifts", "0.3;0.15"],
                             capsys)
        assert code == 0
        assert rep["final_degree"] == 2
        assert rep["degrees"] == [4, 2]
        assert rep["invariance_residual"] < 1e-9
        assert rep["relation"] is not None

    def test_discover_explicit_bounds(self, files, capsys):
        code, rep = run_json(["aat", "discover", "--fn", files["sin"],
                              "--bounds", "1,1,1"], capsys)
        assert code == 1  # no multilinear relation for sin: explicit empty
        assert rep["kernel_dimension"] == 0


class TestRoundTripsAndDeterminism:
    def test_discovered_poly_feeds_verify(self, files, capsys, tmp_path):
        code, rep = run_json(["aat", "discover", "--fn", files["tan"]], capsys)
        assert code == 0 and rep["kernel_dimension"] == 1
        gpath = tmp_path / "g.json"
        gpath.write_text(json.dumps(rep["kernel"][0]))
        code2, rep2 = run_json(["aat", "verify", "--poly", str(gpath),
                                "--fn", files["tan"]], capsys)
        assert code2 == 0 and rep2["status"] == "verified"

    def test_byte_deterministic(self, files, capsys):
        argv = ["period", "find", "--fn", files["sin"],
                "--poly", files["g_sin"], "--seed", "0"]
        run_command(argv)
        out1 = capsys.readouterr().out
        run_command(argv)
        out2 = capsys.readouterr().out
        assert out1 == out2
