import csv
import io
import json
import math
import time

import pytest

from atomcbs import bistatic
from atomcbs.cli import main, run_verify
from atomcbs.kernels import HPERP, Label
from atomcbs.transition import Transition, w_coeffs


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_coeffs(capsys):
    code, out, _ = run(capsys, "coeffs", "--j", "0", "--je", "1")
    assert code == 0
    (r,) = rows(out)
    assert (float(r["w1"]), float(r["w2"]), float(r["w3"])) == (1.0, 0.0, 0.0)
    code, out, _ = run(capsys, "coeffs", "--j", "3", "--je", "4")
    (r,) = rows(out)
    assert float(r["w1"]) == pytest.approx(0.41071, abs=1e-5)
    assert float(r["w2"]) == pytest.approx(-0.21429, abs=1e-5)
    assert float(r["w3"]) == pytest.approx(0.26786, abs=1e-5)
    assert float(r["m_j"]) == pytest.approx(3 / 7)


def test_coeffs_half_integer_rendering(capsys):
    code, out, _ = run(capsys, "coeffs", "--j", "1.5", "--je", "5/2")
    (r,) = rows(out)
    assert (r["j"], r["je"]) == ("3/2", "5/2")


def test_invalid_transition(capsys):
    code, out, err = run(capsys, "coeffs", "--j", "1", "--je", "3")
    assert code == 2
    assert "dipole selection rule" in err
    assert out == ""


def test_bad_flag_is_usage_error(capsys):
    code, _, _ = run(capsys, "coeffs", "--j", "1/3", "--je", "1")
    assert code == 2
    code, _, _ = run(capsys, "sweep", "--jmax", "26")
    assert code == 2


def test_sweep_examples(capsys):
    code, out, _ = run(capsys, "sweep", "--jmax", "4", "--type", "plus", "--channel", "hpar", "--quantity", "alpha")
    assert code == 0
    table = {r["j"]: float(r["value"]) for r in rows(out)}
    assert table["3"] == pytest.approx(1.17, abs=5e-3)
    assert list(table) == ["0", "1/2", "1", "3/2", "2", "5/2", "3", "7/2", "4"]
    _, out, _ = run(capsys, "sweep", "--jmax", "2", "--quantity", "single", "--channel", "hpar")
    assert {r["j"]: float(r["value"]) for r in rows(out)}["1/2"] == 0.0
    _, out, _ = run(capsys, "sweep", "--jmax", "1", "--quantity", "contrast", "--channel", "lperp")
    assert float(rows(out)[0]["value"]) == pytest.approx(1.0, abs=1e-14)


def test_sweep_types(capsys):
    _, out, _ = run(capsys, "sweep", "--jmax", "2", "--type", "minus", "--quantity", "single")
    assert [r["j"] for r in rows(out)] == ["1", "3/2", "2"]
    _, out, _ = run(capsys, "sweep", "--jmax", "1", "--type", "zero", "--quantity", "contrast")
    assert [(r["j"], r["je"]) for r in rows(out)] == [("1/2", "1/2"), ("1", "1")]


def test_cone(capsys):
    code, out, _ = run(capsys, "cone", "--j", "3", "--je", "4", "--channel", "hperp", "--mu-max", "2", "--points", "5")
    assert code == 0
    assert out.splitlines()[0] == "mu,gamma_c2,alpha"
    data = rows(out)
    assert len(data) == 5
    assert float(data[0]["alpha"]) == pytest.approx(1.21, abs=5e-3)


def test_cone_phi_invariance_in_helicity(capsys):
    args = ["cone", "--j", "3", "--je", "4", "--channel", "hpar", "--mu-max", "3", "--points", "7"]
    _, a, _ = run(capsys, *args, "--phi", "0")
    _, b, _ = run(capsys, *args, "--phi", "1.0")
    assert a == b


def test_cone_phi_degrees(capsys):
    args = ["cone", "--j", "1", "--je", "2", "--channel", "lpar", "--mu-max", "3", "--points", "4"]
    _, a, _ = run(capsys, *args, "--phi", repr(math.pi / 4))
    _, b, _ = run(capsys, *args, "--phi-deg", "45")
    assert a == b


@pytest.mark.parametrize("mu_max", [50.0, 500.0])
def test_cone_endpoint_follows_wings(capsys, mu_max):
    _, out, _ = run(capsys, "cone", "--j", "3", "--je", "4", "--channel", "hperp", "--mu-max", str(mu_max), "--points", "3")
    end = rows(out)[-1]
    w = w_coeffs(Transition(3, 4))
    asym = 9 * math.pi / (8 * mu_max) * bistatic.wings(w, HPERP)
    # the next term of the expansion is about 2/mu in relative size
    assert abs(float(end["gamma_c2"]) / asym - 1) <= 3.5 / mu_max


def test_cone_rejects_single_point(capsys):
    code, _, err = run(capsys, "cone", "--j", "3", "--je", "4", "--points", "1")
    assert code == 2 and "two grid points" in err


def test_medium(capsys):
    base = ["medium", "--j", "0", "--je", "1", "--wavenumber", "2.0"]
    _, out, err = run(capsys, *base, "--density", "1e-4")
    r = rows(out)[0]
    assert float(r["sigma_tot"]) == pytest.approx(6 * math.pi / 4)
    assert err == ""
    _, out_half, _ = run(capsys, *base, "--density", "1e-4", "--detuning", "0.5")
    assert float(rows(out_half)[0]["sigma_tot"]) == pytest.approx(float(r["sigma_tot"]) / 2)
    _, out2, _ = run(capsys, *base, "--density", "2e-4")
    assert float(rows(out2)[0]["mfp"]) == pytest.approx(float(r["mfp"]) / 2)


def test_medium_warning_and_errors(capsys):
    code, _, err = run(capsys, "medium", "--j", "0", "--je", "1", "--wavenumber", "1", "--density", "1")
    assert code == 0 and "warning" in err
    code, _, _ = run(capsys, "medium", "--j", "0", "--je", "1", "--wavenumber", "1", "--density", "-1")
    assert code == 2
    code, _, _ = run(capsys, "medium", "--j", "0", "--je", "1", "--wavenumber", "0", "--density", "1")
    assert code == 2


def test_json_lines(capsys):
    _, out, _ = run(capsys, "sweep", "--jmax", "1", "--quantity", "single", "--format", "json")
    records = [json.loads(line) for line in out.splitlines()]
    _, out_csv, _ = run(capsys, "sweep", "--jmax", "1", "--quantity", "single")
    assert [list(r) for r in records] == [list(r) for r in rows(out_csv)]
    assert records[1]["j"] == "1/2"


def test_output_file_is_atomic_and_deterministic(tmp_path, capsys):
    target = tmp_path / "cone.csv"
    args = ["cone", "--j", "3", "--je", "4", "--mu-max", "4", "--points", "9", "--output", str(target)]
    assert main(args) == 0
    first = target.read_bytes()
    assert main(args) == 0
    assert target.read_bytes() == first
    assert sorted(p.name for p in tmp_path.iterdir()) == ["cone.csv"]
    _, out, _ = run(capsys, *args[:-2])
    assert out.encode() == first


def test_failed_command_leaves_existing_output(tmp_path, capsys):
    target = tmp_path / "out.csv"
    target.write_text("keep\n")
    code, _, _ = run(capsys, "coeffs", "--j", "1", "--je", "3", "--output", str(target))
    assert code == 2
    assert target.read_text() == "keep\n"


def test_verify_fast(capsys):
    start = time.perf_counter()
    code, out, _ = run(capsys, "verify", "--level", "fast")
    assert time.perf_counter() - start < 10
    assert code == 0
    report = rows(out)
    assert {r["suite"] for r in report} >= {"trace", "kernels", "ladder", "crossed", "reciprocity"}
    assert all(r["status"] == "pass" for r in report)


def test_verify_detects_tampering(monkeypatch, capsys):
    table = dict(bistatic.LADDER_TABLE)
    l1, l2 = table[Label.LinPar]
    table[Label.LinPar] = (l1 * 1.001, l2)
    monkeypatch.setattr(bistatic, "LADDER_TABLE", table)
    code, out, err = run(capsys, "verify", "--level", "fast")
    assert code == 3
    assert "ladder" in err
    status = {r["suite"]: r["status"] for r in rows(out)}
    assert status["ladder"] == "FAIL"


@pytest.mark.slow
def test_verify_full():
    report = run_verify("full")
    assert all(r[3] == "pass" for r in report), report
