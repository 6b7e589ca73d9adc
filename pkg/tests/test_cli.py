import json

import pytest

from magnomol import NO_SIGNAL
from magnomol.cli import main
from magnomol.config import parse_config
from magnomol.errors import ConfigError
from magnomol.measures import FLAT_COLUMNS
from magnomol.output import CONTRAST_COLUMNS, read_csv

SWEEP_1PT = """\
[sweep]
axis = delta_a
min = -1
max = -1
points = 1
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cfg(tmp_path):
    def write(text, name="run.ini"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


class TestPoint:
    def test_default_point_json(self, capsys):
        code, out, _ = run(capsys, "point")
        data = json.loads(out)
        assert code == 0 and tuple(data) == FLAT_COLUMNS
        assert data["e_aB"] > 0 and data["stable"] is True

    def test_undriven(self, capsys):
        code, out, _ = run(capsys, "point", "--set", "drive=0")
        data = json.loads(out)
        assert code == 0
        assert data["e_am"] == data["e_aB"] == data["e_mB"] == 0.0

    def test_invalid_parameter_exit_1(self, capsys):
        code, out, err = run(capsys, "point", "--set", "kappa_a=-1")
        assert code == 1 and out == "" and "kappa_a" in err

    def test_unstable_exit_2(self, capsys):
        code, out, _ = run(capsys, "point", "--set", "delta_a=0.3", "--set", "delta_m=-0.3",
                           "--set", "drive=20")
        assert code == 2 and json.loads(out)["stable"] is False

    def test_config_file(self, capsys, cfg):
        path = cfg("[system]\ntemperature_k = 0\nomega_nu_thz = 30\n")
        code, out, _ = run(capsys, "point", "--config", path)
        assert code == 0 and json.loads(out)["e_aB"] > 0


class TestStability:
    def test_stable(self, capsys):
        code, out, _ = run(capsys, "stability")
        data = json.loads(out)
        assert code == 0 and data["spectral_abscissa"] < 0 and len(data["eigenvalues"]) == 6

    def test_unstable(self, capsys):
        code, out, _ = run(capsys, "stability", "--set", "delta_a=0.3", "--set", "delta_m=-0.3",
                           "--set", "drive=20")
        assert code == 2 and json.loads(out)["stable"] is False


class TestSweep:
    def test_single_point_csv(self, capsys, cfg, tmp_path):
        out_path = tmp_path / "o.csv"
        code, _, _ = run(capsys, "sweep", "--config", cfg(SWEEP_1PT), "--out", str(out_path))
        lines = out_path.read_text().splitlines()
        assert code == 0 and len(lines) == 3
        header = lines[0].split(",")
        assert header[:3] == ["delta_a", "branch", "delta_b"]
        assert header[-len(CONTRAST_COLUMNS):] == list(CONTRAST_COLUMNS)
        assert (tmp_path / "o.csv.meta.json").exists()

    def test_rerun_byte_identical(self, capsys, cfg, tmp_path):
        texts = []
        for k in range(2):
            p = tmp_path / f"r{k}.json"
            run(capsys, "sweep", "--config", cfg(SWEEP_1PT), "--out", str(p), "--format", "json", "--no-meta")
            texts.append(p.read_bytes())
        assert texts[0] == texts[1]
        data = json.loads(texts[0])
        assert set(data) == {"metadata", "rows", "contrasts"} and "timestamp" not in data["metadata"]

    def test_no_meta_suppresses_sidecar(self, capsys, cfg, tmp_path):
        p = tmp_path / "o.csv"
        run(capsys, "sweep", "--config", cfg(SWEEP_1PT), "--out", str(p), "--no-meta")
        assert not (tmp_path / "o.csv.meta.json").exists()

    def test_csv_round_trip(self, capsys, cfg, tmp_path):
        from magnomol.config import load_config
        from magnomol.sweep import run_sweep

        p = tmp_path / "o.csv"
        run(capsys, "sweep", "--config", cfg(SWEEP_1PT), "--out", str(p))
        rows = read_csv(p)
        res = run_sweep(load_config(cfg(SWEEP_1PT)).sweep_spec())
        for parsed, row in zip(rows, res.rows):
            for key, value in row.report.to_flat().items():
                if key != "error":
                    assert parsed[key] == value, key

    def test_stdout_when_no_path(self, capsys, cfg):
        code, out, _ = run(capsys, "sweep", "--config", cfg(SWEEP_1PT))
        assert code == 0 and out.splitlines()[0].startswith("delta_a,branch,delta_b")

    def test_missing_axis(self, capsys):
        code, _, err = run(capsys, "sweep")
        assert code == 1 and "axis" in err

    def test_workers_from_env(self, capsys, cfg, tmp_path, monkeypatch):
        monkeypatch.setenv("MAGNOMOL_WORKERS", "2")
        text = SWEEP_1PT.replace("max = -1\npoints = 1", "max = 0\npoints = 3")
        outs = []
        for k, extra in enumerate(([], ["--workers", "1"])):
            p = tmp_path / f"w{k}.csv"
            run(capsys, "sweep", "--config", cfg(text), "--out", str(p), "--no-meta", *extra)
            outs.append(p.read_bytes())
        assert outs[0] == outs[1]

    def test_unwritable_output(self, capsys, cfg, tmp_path):
        code, _, err = run(capsys, "sweep", "--config", cfg(SWEEP_1PT), "--out", str(tmp_path / "no" / "x.csv"))
        assert code == 1 and "cannot write" in err


class TestPreset:
    def test_fig3_contrast_columns(self, capsys, tmp_path):
        p = tmp_path / "fig3.csv"
        code, out, _ = run(capsys, "preset", "fig3", "--out", str(p))
        rows = read_csv(p)
        assert code == 0 and len(rows) == 2 * 401
        assert all(col in rows[0] for col in CONTRAST_COLUMNS)
        assert all(r["contrast_e_am"] is NO_SIGNAL or 0 <= r["contrast_e_am"] <= 1 for r in rows)
        assert out.startswith("fig3: ")

    def test_fig5_summary(self, capsys, tmp_path):
        code, out, _ = run(capsys, "preset", "fig5", "--out", str(tmp_path / "f.csv"))
        assert code == 0 and "max g_B_to_a[dB<0]=" in out and "max g_a_to_m[dB<0]=0 " in out

    def test_fig7_summary(self, capsys, tmp_path):
        code, out, _ = run(capsys, "preset", "fig7", "--out", str(tmp_path / "f.csv"))
        assert code == 0 and "e_aB cutoff[dB<0]=" in out

    def test_default_path(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        run(capsys, "preset", "fig9b", "--format", "json", "--no-meta")
        assert (tmp_path / "fig9b.json").exists()

    def test_override_reaches_preset(self, capsys, tmp_path):
        p = tmp_path / "f.csv"
        run(capsys, "preset", "fig7", "--out", str(p), "--set", "drive=0")
        assert all(r["e_aB"] == 0.0 for r in read_csv(p))

    def test_unknown_preset(self, capsys):
        code, _, err = run(capsys, "preset", "fig1")
        assert code == 1 and "fig3" in err and "fig9c" in err

    def test_bad_override(self, capsys):
        code, _, err = run(capsys, "preset", "fig3", "--set", "sweep.points=3")
        assert code == 1


class TestConfig:
    def test_units(self):
        c = parse_config("[system]\nomega_nu_thz = 15\nj = 0.1\ntemperature_k = 300\n")
        assert c.params.j_coupling == 0.1 and c.params.temperature == 300.0
        assert c.params.omega_nu == pytest.approx(2 * 3.141592653589793 * 15e12)

    @pytest.mark.parametrize(
        "text,line",
        [("[system]\ndelta_a = 1\nbogus = 2\n", 3), ("[system]\n\nkappa_a = -1\n", 3),
         ("[system]\ndrive = abc\n", 2), ("[nope]\n", 1), ("[system]\ndrive\n", 2),
         ("drive = 1\n", 1)],
    )
    def test_errors_carry_line(self, text, line):
        with pytest.raises(ConfigError) as info:
            parse_config(text)
        assert info.value.line == line and f"line {line}" in str(info.value)

    def test_override_sections(self):
        c = parse_config(SWEEP_1PT, ["sweep.points=1", "drive=1.5", "output.format=json"])
        assert c.params.drive == 1.5 and c.output["format"] == "json"

    def test_bad_override(self):
        with pytest.raises(ConfigError):
            parse_config("", ["drive"])

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "point", "--config", str(tmp_path / "none.ini"))
        assert code == 1 and "cannot read" in err

    def test_two_axis_sweep(self):
        text = SWEEP_1PT + "axis2 = temperature_k\nmin2 = 10\nmax2 = 20\npoints2 = 2\n"
        spec = parse_config(text).sweep_spec()
        assert [a.name for a in spec.axes] == ["delta_a", "temperature"]


class TestUsage:
    @pytest.mark.parametrize("argv", [["bogus"], ["point", "--nope"], ["sweep", "--format", "xml"], []])
    def test_usage_errors_exit_1(self, capsys, argv):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 1
        assert "usage" in capsys.readouterr().err
