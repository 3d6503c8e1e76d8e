import hashlib
import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from elastica.cli import dumps, main, manifest_path, parse_eps_list, parse_init
from elastica.errors import InputError, ShapeFormatError
from elastica.geometry import ConvexShape, save_shape
from elastica.plotting import plot_shapes, plot_trace


@pytest.fixture
def disk_file(tmp_path):
    path = tmp_path / "disk.json"
    save_shape(ConvexShape.disk(1.0), path)
    return path


@pytest.fixture
def ellipse_file(tmp_path):
    path = tmp_path / "ellipse.json"
    save_shape(ConvexShape(1.0, (0.0, 0.1), (0.0, 0.0)), path)
    return path


def _run(argv, capsys):
    rc = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return rc, out, err


def _valid_svg(path):
    root = ET.parse(path).getroot()
    assert root.tag.endswith("svg")


class TestEval:
    def test_disk_stdout(self, disk_file, capsys):
        rc, out, _ = _run(["eval", disk_file], capsys)
        assert rc == 0
        d = json.loads(out)
        assert d["total"] == pytest.approx(math.pi / 3 + 2 * math.pi, abs=1e-10)
        assert d["p"] == 1.0 and d["lambda"] == 1.0

    def test_out_and_manifest(self, disk_file, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
        out = tmp_path / "e.json"
        rc, _, _ = _run(["eval", disk_file, "--p", "2", "--lambda", "0.5", "--out", out], capsys)
        assert rc == 0
        d = json.loads(out.read_text())
        assert d["manifest"] == "e.manifest.json"
        m = json.loads(manifest_path(out).read_text())
        assert m["command"] == "eval" and m["seed"] == 42
        assert m["timestamp"].startswith("1970-01-01")
        assert m["inputs"][0]["sha256"] == hashlib.sha256(disk_file.read_bytes()).hexdigest()
        assert m["config"]["lambda"] == 0.5 and m["outputs"] == [str(out)]

    def test_polar_quadrature(self, ellipse_file, capsys):
        rc, out, _ = _run(["eval", ellipse_file, "--quad-method", "polar", "--quad-n", "512"], capsys)
        assert rc == 0
        assert json.loads(out)["config"]["n_theta"] == 512

    def test_polyline_input(self, tmp_path, capsys):
        path = tmp_path / "square.json"
        path.write_text(json.dumps({"polyline": [[-1, -1], [1, -1], [1, 1], [-1, 1]]}))
        rc, out, _ = _run(["eval", path], capsys)
        assert rc == 0 and json.loads(out)["total"] > 0


class TestExitCodes:
    def test_bad_p(self, disk_file, capsys):
        rc, _, err = _run(["eval", disk_file, "--p", "0.5"], capsys)
        assert rc == 2 and "error" in err

    def test_missing_file(self, tmp_path, capsys):
        assert _run(["eval", tmp_path / "nope.json"], capsys)[0] == 2

    def test_bad_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert _run(["eval", path], capsys)[0] == 2

    def test_nonconvex(self, tmp_path, capsys):
        path = tmp_path / "dart.json"
        path.write_text(json.dumps({"polyline": [[0, 0], [2, 1], [0, 0.2], [-2, 1]]}))
        assert _run(["eval", path], capsys)[0] == 3

    def test_invalid_coefficients(self, tmp_path, capsys):
        path = tmp_path / "wavy.json"
        save_shape(ConvexShape(1.0, (0.0, 0.5), (0.0, 0.0)), path)
        assert _run(["bounds", path], capsys)[0] == 3

    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_fit_unstable(self, disk_file, capsys):
        rc, _, err = _run(["competitor", disk_file, "--eps-list", "0.02,0.01"], capsys)
        assert rc == 3 and "FitUnstable" in err

    def test_bad_eps_list(self, disk_file, capsys):
        assert _run(["competitor", disk_file, "--eps-list", "0.1,abc"], capsys)[0] == 2


class TestParsers:
    def test_init(self, disk_file):
        assert parse_init("disk(1.5)", 0).a0 == 1.5
        assert parse_init(str(disk_file), 0).a0 == 1.0
        assert parse_init("random", 7).to_json() == parse_init("random", 7).to_json()
        with pytest.raises(InputError):
            parse_init("disk(abc)", 0)
        with pytest.raises(ShapeFormatError):
            parse_init("missing.json", 0)

    def test_eps_list(self):
        assert parse_eps_list("0.02, 0.01 0.005") == [0.02, 0.01, 0.005]
        for bad in ("", "-1", "nan", "0"):
            with pytest.raises(InputError):
                parse_eps_list(bad)

    def test_dumps_non_finite(self):
        d = json.loads(dumps({"a": float("inf"), "b": np.float64(1.5), "c": (np.int64(2), np.bool_(True))}))
        assert d == {"a": "inf", "b": 1.5, "c": [2, True]}


class TestOptimize:
    def test_outputs(self, tmp_path, capsys):
        out = tmp_path / "run.json"
        rc, _, _ = _run(["optimize", "--k-max", "4", "--max-iters", "20", "--init", "disk(1)", "--out", out], capsys)
        assert rc == 0
        d = json.loads(out.read_text())
        assert d["final_energy"] <= 7.0449 + 1e-3 and d["bounds_all_satisfied"]
        trace = (tmp_path / "run.trace.csv").read_text().splitlines()
        assert trace[0] == "iter,energy,avg_term,elastica_term,grad_norm,min_curv_radius"
        shape = json.loads((tmp_path / "run.shape.json").read_text())
        assert shape["a0"] == pytest.approx(2**0.25, rel=1e-4)
        m = json.loads(manifest_path(out).read_text())
        assert len(m["outputs"]) == 3 and m["inputs"] == []

    def test_deterministic(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
        blobs = []
        for name in ("a", "b"):
            out = tmp_path / name / "run.json"
            out.parent.mkdir()
            argv = ["optimize", "--k-max", "3", "--max-iters", "5", "--init", "random", "--seed", "3", "--out", out]
            assert _run(argv, capsys)[0] == 0
            blobs.append([(out.parent / f).read_bytes() for f in ("run.json", "run.trace.csv", "run.shape.json")])
            blobs[-1].append(json.loads(manifest_path(out).read_text())["timestamp"])
        assert blobs[0] == blobs[1]

    def test_shape_file_init_recorded(self, ellipse_file, tmp_path, capsys):
        out = tmp_path / "run.json"
        argv = ["optimize", "--k-max", "2", "--max-iters", "2", "--init", ellipse_file, "--out", out]
        assert _run(argv, capsys)[0] == 0
        m = json.loads(manifest_path(out).read_text())
        assert m["inputs"][0]["path"] == str(ellipse_file)


class TestBoundsAndCompetitor:
    def test_bounds_table(self, disk_file, capsys):
        rc, out, _ = _run(["bounds", disk_file], capsys)
        assert rc == 0 and "diameter_lower" in out and "FAIL" not in out

    def test_bounds_json(self, disk_file, tmp_path, capsys):
        out = tmp_path / "b.json"
        rc, stdout, err = _run(["bounds", disk_file, "--out", out], capsys)
        assert rc == 0 and stdout == "" and "PASS" in err
        assert json.loads(out.read_text())["all_satisfied"]

    def test_competitor_with_svg(self, disk_file, tmp_path, capsys):
        out, svg = tmp_path / "c.json", tmp_path / "c.svg"
        rc, _, _ = _run(["competitor", disk_file, "--out", out, "--svg", svg, "--t1", "0"], capsys)
        assert rc == 0
        d = json.loads(out.read_text())
        assert d["all_satisfied"]
        _valid_svg(svg)
        assert str(svg) in json.loads(manifest_path(out).read_text())["outputs"]


class TestPlot:
    def test_shapes_and_csv(self, disk_file, ellipse_file, tmp_path, capsys):
        svg, pts = tmp_path / "s.svg", tmp_path / "s.csv"
        rc, _, _ = _run(["plot", disk_file, ellipse_file, "--svg", svg, "--csv", pts, "--samples", "64"], capsys)
        assert rc == 0
        _valid_svg(svg)
        lines = pts.read_text().splitlines()
        assert lines[0] == "shape,x,y" and len(lines) == 1 + 2 * 64

    def test_trace(self, tmp_path, capsys):
        trace = tmp_path / "t.csv"
        trace.write_text("iter,energy\n0,7.3\n1,7.1\n2,7.05\n")
        svg = tmp_path / "t.svg"
        assert _run(["plot", trace, "--svg", svg], capsys)[0] == 0
        _valid_svg(svg)

    def test_bad_inputs(self, disk_file, tmp_path, capsys):
        trace = tmp_path / "t.csv"
        trace.write_text("iter,cost\n0,1\n")
        svg = tmp_path / "x.svg"
        assert _run(["plot", trace, "--svg", svg], capsys)[0] == 2
        assert _run(["plot", trace, disk_file, "--svg", svg], capsys)[0] == 2
        assert _run(["plot", disk_file, "--svg", svg, "--samples", "4"], capsys)[0] == 2

    def test_svg_deterministic(self, tmp_path):
        shapes = [ConvexShape.disk(1.0), ConvexShape(1.0, (0.0, 0.1), (0.0, 0.0))]
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        plot_shapes(shapes, a, labels=["disk", "ellipse"])
        plot_shapes(shapes, b, labels=["disk", "ellipse"])
        assert a.read_bytes() == b.read_bytes()
        plot_trace([3.0, 2.0, 1.5], a)
        plot_trace([3.0, 2.0, 1.5], b)
        assert a.read_bytes() == b.read_bytes()
        assert b"Date" not in a.read_bytes()
