import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from transport_bregman import cli
from transport_bregman import transport1d


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    """divergence -> list of (value, method) from a compare table."""
    out = {}
    for line in text.splitlines()[4:]:
        name, value, method = line.split(None, 2)
        out.setdefault(name, []).append((None if value == "n/a" else float(value), method))
    return out


def test_sweep_rows_and_values(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "gaussian-sweep", "--sigma-x", "1:2:2", "--sigma-y", "1:2:2", "--out", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["sigma_x", "sigma_y", "kl", "tkl", "tjs", "w2"]
    assert [(r["sigma_x"], r["sigma_y"]) for r in rows] == [("1", "1"), ("1", "2"), ("2", "1"), ("2", "2")]
    assert all(float(rows[0][k]) == 0 for k in ("kl", "tkl", "tjs", "w2"))
    assert float(rows[2]["tkl"]) == pytest.approx(1 - math.log(2), abs=1e-9)


def test_sweep_cardinality_and_filter(capsys):
    code, text, _ = run(capsys, "gaussian-sweep", "--sigma-x", "0.5:3:10", "--sigma-y", "0.5:3:10",
                        "--divergences", "w2,tkl", "--out", "-")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "sigma_x,sigma_y,tkl,w2"
    assert len(lines) == 101


def test_sweep_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run(capsys, "gaussian-sweep", "--sigma-x", "0.2:3:7", "--sigma-y", "0.2:3:7", "--out", str(path))
    assert a.read_bytes() == b.read_bytes()


def test_sweep_symmetry_and_asymmetry(capsys):
    _, text, _ = run(capsys, "gaussian-sweep", "--sigma-x", "0.2:3:8", "--sigma-y", "0.2:3:8", "--out", "-")
    rows = {(r["sigma_x"], r["sigma_y"]): r for r in csv.DictReader(text.splitlines())}
    worst_gap = 0.0
    for (a, b_), r in rows.items():
        s = rows[(b_, a)]
        assert float(r["tjs"]) == pytest.approx(float(s["tjs"]), abs=1e-9)
        assert float(r["w2"]) == pytest.approx(float(s["w2"]), abs=1e-12)
        worst_gap = max(worst_gap, abs(float(r["tkl"]) - float(s["tkl"])))
    assert worst_gap > 0.01


@pytest.mark.parametrize("bad", ["0:1:5", "1:2:1", "2:1:5", "a:b:c", "1:2"])
def test_sweep_bad_range(capsys, bad):
    code, _, err = run(capsys, "gaussian-sweep", "--sigma-x", bad, "--out", "-")
    assert code == 2
    assert "range" in err


def test_sweep_bad_divergence(capsys):
    code, _, err = run(capsys, "gaussian-sweep", "--divergences", "kl,hellinger", "--out", "-")
    assert code == 2


def test_compare_gaussians(capsys):
    code, text, _ = run(capsys, "compare", "--p", "gaussian:0:4", "--q", "gaussian:0:1")
    assert code == 0
    rows = rows_of(text)
    for value, _ in rows["tkl"]:
        assert value == pytest.approx(0.306853, abs=1e-6)
    assert rows["cross_entropy"][0][0] is None


def test_compare_same_spec_is_zero(capsys, tmp_path):
    x = np.linspace(-8, 8, 801)
    grid = tmp_path / "g.txt"
    np.savetxt(grid, np.c_[x, np.exp(-x * x / 2)])
    for spec in ("gaussian:1:2", "uniform:0:3", f"grid:{grid}"):
        code, text, _ = run(capsys, "compare", "--p", spec, "--q", spec)
        assert code == 0
        for name, entries in rows_of(text).items():
            if name == "cross_entropy":
                continue
            for value, _ in entries:
                assert value == pytest.approx(0.0, abs=1e-12), (spec, name)


def test_compare_samples_capabilities(capsys, tmp_path):
    path = tmp_path / "s.txt"
    np.savetxt(path, np.random.default_rng(0).standard_normal(5000))
    code, text, _ = run(capsys, "compare", "--p", f"samples:{path}", "--q", "gaussian:0:1")
    assert code == 0
    rows = rows_of(text)
    assert rows["tkl"][0][0] is not None and rows["tkl"][0][0] < 0.5
    assert rows["kl"][0][0] is None and "no pdf" in rows["kl"][0][1]


def test_compare_cross_entropy_with_grid_q(capsys, tmp_path):
    x = np.linspace(-10, 10, 4001)
    grid = tmp_path / "g.txt"
    np.savetxt(grid, np.c_[x, np.exp(-x * x / 2)])
    code, text, _ = run(capsys, "compare", "--p", f"grid:{grid}", "--q", f"grid:{grid}")
    rows = rows_of(text)
    assert rows["cross_entropy"][0][0] == pytest.approx(0.5 * math.log(2 * math.pi * math.e), abs=1e-4)


def test_compare_domain_error_does_not_abort(capsys, tmp_path):
    x = np.linspace(0, 3, 301)
    grid = tmp_path / "gap.txt"
    np.savetxt(grid, np.c_[x, np.where((x > 1) & (x < 2), 0.0, 1.0)])
    code, text, _ = run(capsys, "compare", "--p", f"grid:{grid}", "--q", "uniform:0:3")
    assert code == 0
    rows = rows_of(text)
    assert rows["tkl"][0][0] is None and rows["tkl"][0][1].startswith("error:")
    assert rows["w2"][0][0] is not None


def test_compare_config_multivariate(capsys, tmp_path):
    cfg = tmp_path / "pair.json"
    cfg.write_text(json.dumps({
        "p": {"kind": "gaussian", "mean": [0, 0], "covariance": [[9, 0], [0, 1]]},
        "q": {"kind": "gaussian", "mean": [0, 0], "covariance": [[1, 0], [0, 4]]},
    }))
    code, text, _ = run(capsys, "compare", "--config", str(cfg))
    assert code == 0
    rows = rows_of(text)
    assert rows["tkl"][0][0] == pytest.approx(1.094535, abs=1e-6)
    assert rows["w2"][0][0] == pytest.approx(5.0)


def test_config_round_trip(tmp_path):
    specs = [
        cli.DensitySpec.parse("gaussian:0.5:2"),
        cli.DensitySpec.parse("uniform:-1:1"),
        cli.DensitySpec.parse("grid:/data/g.txt"),
        cli.DensitySpec.from_dict({"kind": "gaussian", "mean": [0, 1], "covariance": [[1, 0], [0, 2]]}),
    ]
    for spec in specs:
        assert cli.DensitySpec.from_dict(json.loads(json.dumps(spec.to_dict()))) == spec
    quad = cli.quadrature_from_dict({"nodes": 512, "clip": 1e-5})
    assert cli.quadrature_from_dict(json.loads(json.dumps(cli.quadrature_to_dict(quad)))) == quad
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"p": specs[0].to_dict(), "q": specs[1].to_dict(), "quadrature": cli.quadrature_to_dict(quad)}))
    loaded = cli.load_config(str(path))
    assert loaded == {"p": specs[0], "q": specs[1], "quadrature": quad}


def test_flags_override_config(capsys, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"p": {"kind": "gaussian", "mean": 0, "variance": 4},
                                "q": {"kind": "gaussian", "mean": 0, "variance": 1},
                                "quadrature": {"nodes": 64}}))
    code, text, _ = run(capsys, "compare", "--config", str(path), "--nodes", "1024")
    assert code == 0
    assert "1024 nodes" in text


@pytest.mark.parametrize(
    "argv",
    [
        ["compare", "--p", "gaussian:0", "--q", "gaussian:0:1"],
        ["compare", "--p", "gaussian:0:-1", "--q", "gaussian:0:1"],
        ["compare", "--p", "lognormal:0:1", "--q", "gaussian:0:1"],
        ["compare", "--p", "grid:/nonexistent/file", "--q", "gaussian:0:1"],
        ["compare", "--p", "gaussian:0:1"],
        ["compare", "--p", "gaussian:0:1", "--q", "gaussian:0:1", "--nodes", "4"],
        ["compare", "--config", "/nonexistent.json"],
    ],
)
def test_compare_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_argparse_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_verify_passes(capsys, tmp_path):
    out = tmp_path / "v.csv"
    code, text, _ = run(capsys, "verify", "--seed", "0", "--out", str(out))
    assert code == 0
    assert "FAIL" not in text
    rows = list(csv.DictReader(out.open()))
    assert len(rows) >= 20 and all(r["passed"] == "1" for r in rows)
    code2, text2, _ = run(capsys, "verify", "--seed", "0")
    assert text2 == text


def test_verify_fails_with_wrong_sign_tkl(capsys, monkeypatch):
    real = transport1d.transport_kl_1d
    monkeypatch.setattr(transport1d, "transport_kl_1d", lambda p, q, cfg=None: -real(p, q, cfg or cli.DEFAULT_CONFIG))
    code, text, _ = run(capsys, "verify", "--seed", "0")
    assert code == 1
    assert "FAIL" in text


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "transport_bregman", "compare", "--p", "uniform:0:2", "--q", "uniform:0:1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "tkl" in proc.stdout
