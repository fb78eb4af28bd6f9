import csv
import io
import json
import math

import pytest

from sppbounds.bounds import analyze
from sppbounds.cli import main
from sppbounds.families import coherent, random_truncated, thermal
from sppbounds.oracle import exact_quantities


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestAnalyze:
    def test_single_photon(self, capsys, monkeypatch):
        code, out, _ = run(capsys, monkeypatch, ["analyze"], '{"probs": [0, 1]}')
        rep = json.loads(out)
        assert code == 0
        assert rep["spp_lower"] == rep["spp_upper"] == 1.0
        assert rep["smppr_lower"] == "inf"

    def test_photon_based(self, capsys, monkeypatch):
        code, out, _ = run(capsys, monkeypatch, ["analyze"], '{"g2": 0.4, "mean_n": 0.5}')
        rep = json.loads(out)
        assert code == 0 and rep["criterion_used"] == "PhotonBased"
        assert rep["spp_lower"] == pytest.approx(0.4)
        assert rep["p0"] is None

    def test_not_applicable(self, capsys, monkeypatch):
        code, out, _ = run(capsys, monkeypatch, ["analyze"], '{"g2": 0.6}')
        assert code == 0 and json.loads(out)["criterion_used"] == "NotApplicable"

    def test_field_names(self, capsys, monkeypatch):
        _, out, _ = run(capsys, monkeypatch, ["analyze"], '{"g2": 0.3, "p0": 0.2}')
        keys = set(json.loads(out))
        assert {"g2", "mean_n", "p0", "eff_g2_vacuum", "eff_g2_photon", "spp_lower", "spp_upper",
                "smppr_lower", "q_upper", "p0_plus_p1_lower", "set_m1", "set_m2", "set_m3",
                "criterion_used"} <= keys

    @pytest.mark.parametrize("d", [coherent(0.3), thermal(0.2), random_truncated(6, 5), random_truncated(3, 8)])
    def test_round_trip(self, capsys, monkeypatch, tmp_path, d):
        path = tmp_path / "in.json"
        path.write_text(d.to_json())
        code, out, _ = run(capsys, monkeypatch, ["analyze", "--in", str(path)])
        assert code == 0
        assert json.loads(out) == json.loads(json.dumps(analyze(exact_quantities(d)).to_dict()))

    @pytest.mark.parametrize("text,code", [
        ('{"mean_n": 0.5}', 2),
        ('{"probs": [0.5, 0.6]}', 1),
        ("not json", 1),
        ('{"g2": 0.4, "bogus": 1}', 1),
        ("[1, 2]", 1),
        ('{"g2": "high"}', 1),
    ])
    def test_errors(self, capsys, monkeypatch, text, code):
        got, out, err = run(capsys, monkeypatch, ["analyze"], text)
        assert got == code and out == ""
        assert err.count("\n") == 1

    def test_missing_file(self, capsys, monkeypatch, tmp_path):
        code, _, _ = run(capsys, monkeypatch, ["analyze", "--in", str(tmp_path / "nope.json")])
        assert code == 3

    def test_out_file(self, capsys, monkeypatch, tmp_path):
        path = tmp_path / "rep.json"
        code, out, _ = run(capsys, monkeypatch, ["analyze", "--out", str(path)], '{"g2": 0.2}')
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["set_m1"] is True


class TestFigure:
    def test_fig1(self, capsys, monkeypatch):
        code, out, _ = run(capsys, monkeypatch, ["figure", "fig1"])
        head, rows = csv_rows(out)
        assert code == 0
        assert head == ["N", "exact_p1", "lower_vacuum", "upper_vacuum", "lower_photon", "upper_photon", "diff_lower"]
        assert len(rows) == 200 and rows[0][0] == "0.005" and rows[-1][0] == "1"

    def test_fig2_ratio(self, capsys, monkeypatch):
        _, out, _ = run(capsys, monkeypatch, ["figure", "fig2"])
        _, rows = csv_rows(out)
        assert all(float(r[-1]) <= 1.0 for r in rows)

    def test_fig5(self, capsys, monkeypatch, tmp_path):
        path = tmp_path / "fig5.csv"
        code, out, _ = run(capsys, monkeypatch, ["figure", "fig5", "--out", str(path)])
        head, rows = csv_rows(path.read_text())
        assert code == 0 and out == ""
        assert head == ["p1_tilde", "n_alpha", "g2", "mean_n", "exact_p1", "lower_photon", "lower_vacuum"]
        row = next(r for r in rows if r[0] == "0.5")
        assert float(row[1]) == pytest.approx(1.0, abs=1e-11)

    def test_deterministic(self, capsys, monkeypatch):
        a = run(capsys, monkeypatch, ["figure", "fig3", "--grid-step", "0.05"])[1]
        b = run(capsys, monkeypatch, ["figure", "fig3", "--grid-step", "0.05"])[1]
        assert a == b and len(a.splitlines()) == 11
        for cell in a.splitlines()[1].split(","):
            assert len(cell.lstrip("-").replace(".", "").lstrip("0").split("e")[0]) <= 12

    def test_unwritable(self, capsys, monkeypatch, tmp_path):
        code, _, _ = run(capsys, monkeypatch, ["figure", "fig1", "--out", str(tmp_path / "no" / "x.csv")])
        assert code == 3

    def test_unknown(self, capsys, monkeypatch):
        with pytest.raises(SystemExit) as exc:
            main(["figure", "fig9"])
        assert exc.value.code == 1


class TestSweep:
    def sweep(self, capsys, monkeypatch, family, *args):
        code, out, err = run(capsys, monkeypatch, ["sweep", "--family", json.dumps(family), *args])
        return code, out, err

    def test_fock(self, capsys, monkeypatch):
        code, out, _ = self.sweep(capsys, monkeypatch, {"kind": "fock", "params": {"n": 0}},
                                  "--start", "0", "--stop", "5", "--grid-step", "1", "--columns", "g2")
        head, rows = csv_rows(out)
        assert code == 0 and head == ["n", "g2"]
        assert [r[0] for r in rows] == ["0", "1", "2", "3", "4", "5"]
        assert rows[0][1] == "nan"  # the vacuum has no g2
        assert [float(r[1]) for r in rows[1:]] == pytest.approx([0, 1 / 2, 2 / 3, 3 / 4, 4 / 5])

    def test_coherent_photon_edge(self, capsys, monkeypatch):
        code, out, _ = self.sweep(capsys, monkeypatch, {"kind": "coherent", "params": {"mean_photons": 0}},
                                  "--start", "0.01", "--stop", "2", "--columns", "eff_g2_photon")
        _, rows = csv_rows(out)
        crossing = next(float(n) for n, x in rows if float(x) >= 1.0)
        assert crossing == pytest.approx(1.0, abs=0.01)

    def test_thermal_vacuum_edge(self, capsys, monkeypatch):
        code, out, _ = self.sweep(capsys, monkeypatch, {"kind": "thermal", "params": {"mean_photons": 0}},
                                  "--start", "0.01", "--stop", "1", "--columns", "eff_g2_vacuum,set_m2")
        head, rows = csv_rows(out)
        assert head == ["mean_photons", "eff_g2_vacuum", "set_m2"]
        crossing = next(float(r[0]) for r in rows if float(r[1]) >= 0.5)
        assert crossing == pytest.approx(1 / 3, abs=0.01)

    def test_qd(self, capsys, monkeypatch):
        code, out, _ = self.sweep(capsys, monkeypatch, {"kind": "qd", "params": {"p1_tilde": 0.5, "n_alpha": 0}},
                                  "--stop", "1", "--grid-step", "0.5", "--columns", "g2,spp_lower,exact_smppr")
        _, rows = csv_rows(out)
        assert code == 0 and len(rows) == 3
        assert float(rows[2][1]) == pytest.approx(0.5, abs=1e-10)

    @pytest.mark.parametrize("family,args", [
        ({"kind": "coherent", "params": {"mean_photons": 0}}, ["--columns", "nosuch"]),
        ({"kind": "squeezed", "params": {}}, ["--columns", "g2"]),
        ({"kind": "coherent", "params": {"mean_photons": 0}}, ["--columns", "g2", "--grid-step", "0"]),
        ({"kind": "coherent", "params": {"mean_photons": 0}}, ["--columns", "g2", "--param", "n"]),
    ])
    def test_errors(self, capsys, monkeypatch, family, args):
        code, out, _ = self.sweep(capsys, monkeypatch, family, "--stop", "1", *args)
        assert code == 1 and out == ""


class TestVerify:
    def test_positional(self, capsys, monkeypatch):
        code, out, _ = run(capsys, monkeypatch, ["verify", "soundness", "2000", "42"])
        rep = json.loads(out)
        assert code == 0 and rep == {**rep, "suite": "soundness", "trials": 2000, "violations": 0, "seed": 42}

    def test_flags(self, capsys, monkeypatch):
        code, out, _ = run(capsys, monkeypatch, ["verify", "set-inclusion", "--trials", "2000", "--seed", "1"])
        assert code == 0 and json.loads(out)["trials"] == 2000

    def test_unknown_suite(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "nosuchsuite"])
        assert exc.value.code == 1

    def test_violations_exit_nonzero(self, capsys, monkeypatch, tmp_path):
        import sppbounds.bounds as B

        monkeypatch.setattr(B, "spp_bounds_photon", lambda g2, n: B.Interval(1.0, 1.0))
        diag = tmp_path / "d.jsonl"
        code, out, _ = run(capsys, monkeypatch, ["verify", "soundness", "50", "1", "--diagnostics", str(diag)])
        assert code == 1 and json.loads(out)["violations"] > 0 and diag.exists()


def test_help_lists_exit_codes(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    assert "insufficient data" in capsys.readouterr().out
