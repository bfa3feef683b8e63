import json

import pytest

from lipph.cli import main
from lipph.persistence import Barcode


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_target_make(tmp_path, capsys):
    out = tmp_path / "t.json"
    code, res = run(["target", "make", "flat-torus:3,3,3,3", "--out", str(out)], capsys)
    assert code == 0 and "V=9 E=27 T=18" in res.out
    assert json.loads(out.read_text())["vertices"] == 9


def test_input_errors_exit_2(capsys):
    assert run(["target", "make", "klein"], capsys)[0] == 2
    assert run(["preset", "run", "nope"], capsys)[0] == 2
    assert run(["target", "make", "figure-eight:1,1,2"], capsys)[0] == 2
    assert run(["target", "make", "cycle:6"], capsys)[0] == 2


def test_ph_loops_writes_outputs(tmp_path, capsys):
    code, res = run(
        ["ph", "loops", "--target", "octahedron", "--steps", "4", "--workers", "1", "--out-dir", str(tmp_path), "--name", "oct"],
        capsys,
    )
    assert code == 0
    report = json.loads((tmp_path / "oct.json").read_text())
    assert [Barcode.from_json(b).degree for b in report["barcodes"]] == [0, 1]
    assert (tmp_path / "oct_ph0.csv").read_text().startswith("birth,death")
    assert (tmp_path / "plot_oct.py").exists()


def test_ph_map_space_from_json_target(tmp_path, capsys):
    t = tmp_path / "tri.json"
    run(["target", "make", "triangle", "--out", str(t)], capsys)
    code, res = run(
        ["ph", "map-space", "--domain", "interval:1,1", "--target", str(t), "--cap", "1", "--workers", "1", "--out-dir", str(tmp_path)],
        capsys,
    )
    assert code == 0 and "PH0: 2 finite, 1 infinite, max finite length 1" in res.out


def test_ph_components(capsys):
    code, res = run(["ph", "components", "--target", "figure-eight:1,1,3", "--steps", "6", "--L", "1", "2", "--workers", "1", "--json"], capsys)
    assert code == 0
    assert json.loads(res.out)["counts"] == {"1": 5, "2": 17}


def test_barcode_diff_and_smooth(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps({"degree": 0, "bars": [[0, 4], [0, None]]}))
    b.write_text(json.dumps({"degree": 0, "bars": [[1, 3], ["1/2", None]]}))
    code, res = run(["barcode", "diff", str(a), str(b), "--json"], capsys)
    assert code == 0 and json.loads(res.out)["bottleneck"] == 1
    code, res = run(["barcode", "smooth", str(a), "--eps", "1/2"], capsys)
    assert json.loads(res.out) == {"degree": 0, "bars": [["1/2", "7/2"], ["1/2", None]]}
    assert run(["barcode", "smooth", str(a), "--eps", "-1"], capsys)[0] == 2


def test_dga_verify(capsys):
    code, res = run(["dga", "verify", "--model", "s3vs3", "--example", "eta_L", "--L", "3"], capsys)
    assert code == 0 and "homotopy OK" in res.out
    code, res = run(["dga", "verify", "--example", "eta_L", "--printed-sign"], capsys)
    assert code == 1 and "differential at c2" in res.out
    code, res = run(["dga", "verify", "--example", "eta_L_two"], capsys)
    assert code == 0


def test_dga_certify(tmp_path, capsys):
    beta = tmp_path / "beta.json"
    beta.write_text(json.dumps([[0, -4096], ["1/3", 100], [1, 4096]]))
    code, res = run(["dga", "certify-lower-bound", "--L", "4", "--beta", str(beta)], capsys)
    assert code == 0 and "True" in res.out
    beta.write_text(json.dumps([[0, 0], [1, 4096]]))
    assert run(["dga", "certify-lower-bound", "--L", "4", "--beta", str(beta)], capsys)[0] == 2
    code, res = run(["dga", "certify-lower-bound", "--L", "2", "--two-variable", "--trials", "20"], capsys)
    assert code == 0


@pytest.mark.parametrize("preset", ["empty", "eta-L-verify", "certify"])
def test_presets_pass_and_repeat(preset, tmp_path, capsys):
    outs = []
    for d in ("r1", "r2"):
        code, _ = run(["preset", "run", preset, "--out-dir", str(tmp_path / d)], capsys)
        assert code == 0
        outs.append(json.loads((tmp_path / d / f"{preset}.json").read_text()))
    assert outs[0] == outs[1]
    assert outs[0]["status"] == "PASS"
