"""Command-line interface: parsing, file schemas, manifests, exit codes."""

import csv
import json
import os

import numpy as np
import pytest

from randcluster.cli import (
    config_as_dict,
    config_from_dict,
    main,
    parse_grid,
    parse_pair,
)
from randcluster.engine import SweepConfig, run_sweep
from randcluster.errors import InvalidInputError


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_parse_grid_range_form():
    assert parse_grid("0:1:0.25") == (0.0, 0.25, 0.5, 0.75, 1.0)
    assert parse_grid("0.5:0.5:0.1") == (0.5,)
    # inclusive endpoint survives float stepping
    grid = parse_grid("0:1:0.02")
    assert len(grid) == 51
    assert grid[-1] == 1.0


def test_parse_grid_list_form():
    assert parse_grid("0.1,0.9,0.5") == (0.1, 0.9, 0.5)
    assert parse_grid(" 0.3 ") == (0.3,)


def test_parse_grid_errors():
    for bad in ("0:1", "0:1:0", "1:0:0.1", "a,b", "", "0:1:0.1:5"):
        with pytest.raises(InvalidInputError):
            parse_grid(bad)


def test_parse_pair():
    assert parse_pair("1,4") == (1, 4)
    for bad in ("1", "1,2,3", "a,b"):
        with pytest.raises(InvalidInputError):
            parse_pair(bad)


def test_config_round_trip_through_manifest_dict():
    cfg = SweepConfig(
        n=5, q_grid=(0.1, 0.9), samples=7, master_seed=3,
        tasks=frozenset({"percolation"}), percolation_pair=(2, 5), workers=2,
    )
    assert config_from_dict(config_as_dict(cfg)) == cfg


def test_sweep_writes_census_thresholds_manifest(tmp_path):
    out = str(tmp_path)
    rc = main([
        "sweep", "--n", "4", "--q", "0:1:0.1", "--samples", "200",
        "--seed", "9", "--threads", "1", "--out", out,
    ])
    assert rc == 0
    header, rows = read_csv(os.path.join(out, "census.csv"))
    assert header == [
        "q", "samples",
        "mixed1_pct", "mixed1_stderr",
        "mixed2_pct", "mixed2_stderr",
        "mixed3_pct", "mixed3_stderr",
        "f2_pct", "f2_stderr",
    ]
    assert len(rows) == 11
    # the CSV must carry exactly the engine's numbers
    cfg = SweepConfig(
        n=4, q_grid=parse_grid("0:1:0.1"), samples=200, master_seed=9, workers=1,
    )
    results = run_sweep(cfg)
    for row, r in zip(rows, results):
        assert float(row[0]) == r.q
        assert int(row[1]) == 200
        assert float(row[2]) == pytest.approx(r.mixed_pct[0].mean, abs=1e-9)
        assert float(row[9]) == pytest.approx(r.f2_pct.stderr, abs=1e-9)

    with open(os.path.join(out, "thresholds.json")) as fh:
        thr = json.load(fh)
    assert thr["level"] == 99.9
    assert thr["fit_family"] == "isotonic-pchip"
    assert [e["k"] for e in thr["thresholds"]] == [1, 2, 3]
    for e in thr["thresholds"]:
        assert e["status"] in ("ok", "unavailable")
        if e["status"] == "ok":
            assert 0.0 <= e["q_star"] <= 1.0

    with open(os.path.join(out, "manifest.json")) as fh:
        man = json.load(fh)
    assert man["tool"] == "randcluster"
    assert man["command"] == "sweep"
    assert man["backend"] in ("compiled", "python")
    assert man["csv_schema_version"] == 1
    assert set(man["outputs"]) == {"census.csv", "thresholds.json"}
    assert config_from_dict(man["config"]) == cfg


def test_manifest_digests_match_files(tmp_path):
    import hashlib

    out = str(tmp_path)
    main(["sweep", "--n", "3", "--q", "0:1:0.2", "--samples", "50", "--out", out])
    with open(os.path.join(out, "manifest.json")) as fh:
        man = json.load(fh)
    for name, digest in man["outputs"].items():
        with open(os.path.join(out, name), "rb") as fh:
            assert hashlib.sha256(fh.read()).hexdigest() == digest


def test_manifest_config_rerun_reproduces_identical_bytes(tmp_path):
    out_a = str(tmp_path / "a")
    out_b = str(tmp_path / "b")
    argv = ["sweep", "--n", "4", "--q", "0:1:0.2", "--samples", "128", "--seed", "5"]
    assert main(argv + ["--out", out_a]) == 0
    with open(os.path.join(out_a, "manifest.json")) as fh:
        man = json.load(fh)
    cfg = config_from_dict(man["config"])
    assert main(argv + ["--out", out_b]) == 0
    for name in ("census.csv", "thresholds.json"):
        with open(os.path.join(out_a, name), "rb") as fa:
            with open(os.path.join(out_b, name), "rb") as fb:
                assert fa.read() == fb.read()
    assert cfg.samples == 128


def test_single_point_grid_records_unavailable_thresholds(tmp_path):
    out = str(tmp_path)
    rc = main(["sweep", "--n", "3", "--q", "0.5", "--samples", "40", "--out", out])
    assert rc == 0
    with open(os.path.join(out, "thresholds.json")) as fh:
        thr = json.load(fh)
    assert all(e["status"] == "unavailable" for e in thr["thresholds"])
    assert all("detail" in e for e in thr["thresholds"])
    assert thr["f2_max"]["status"] == "unavailable"


def test_json_format_mirrors_csv(tmp_path):
    out_csv = str(tmp_path / "c")
    out_json = str(tmp_path / "j")
    argv = ["negativity", "--n", "3", "--q", "0,0.5,1", "--samples", "60", "--seed", "2"]
    assert main(argv + ["--out", out_csv]) == 0
    assert main(argv + ["--out", out_json, "--format", "json"]) == 0
    header, rows = read_csv(os.path.join(out_csv, "negativity.csv"))
    with open(os.path.join(out_json, "negativity.json")) as fh:
        obj = json.load(fh)
    assert obj["columns"] == header
    assert len(obj["rows"]) == len(rows)
    for jrow, crow in zip(obj["rows"], rows):
        for jv, cv in zip(jrow, crow):
            assert float(jv) == pytest.approx(float(cv), abs=1e-9)


def test_average_state_csv_schema(tmp_path):
    out = str(tmp_path)
    rc = main([
        "average-state", "--n", "4", "--q", "0,0.5,1", "--samples", "80", "--out", out,
    ])
    assert rc == 0
    header, rows = read_csv(os.path.join(out, "average_state.csv"))
    assert header == [
        "q", "samples", "purity", "coherence",
        "en_paper", "en_bipartitions", "neg_size1", "neg_size2",
    ]
    # q=0 row: pure product state, coherence 2**4 - 1
    assert float(rows[0][2]) == pytest.approx(1.0, abs=1e-9)
    assert float(rows[0][3]) == pytest.approx(15.0, abs=1e-9)
    # q=1 row: fixed complete-graph state, also pure
    assert float(rows[-1][2]) == pytest.approx(1.0, abs=1e-9)


def test_reductions_csv_schema(tmp_path):
    out = str(tmp_path)
    rc = main([
        "reductions", "--n", "4", "--q", "0,1", "--samples", "30", "--out", out,
    ])
    assert rc == 0
    header, rows = read_csv(os.path.join(out, "reductions.csv"))
    assert header[:2] == ["q", "samples"]
    assert "e3_1_2_3_mean" in header and "e3_2_3_4_std" in header
    assert header[-2:] == ["ebip_mean", "ebip_std"]
    assert len(rows) == 2
    assert all(float(v) == 0.0 for v in rows[0][2:])  # q=0: no entanglement


def test_percolation_csv_and_pair_required(tmp_path):
    out = str(tmp_path)
    rc = main([
        "percolation", "--n", "5", "--q", "0,0.2,1", "--samples", "400",
        "--pair", "1,4", "--out", out,
    ])
    assert rc == 0
    header, rows = read_csv(os.path.join(out, "percolation.csv"))
    assert header == ["q", "samples", "nonzero_pct", "nonzero_stderr"]
    assert float(rows[0][2]) == 0.0
    assert float(rows[-1][2]) == 0.0
    mid = float(rows[1][2])
    assert 0.0 < mid < 100.0
    rc2 = main(["percolation", "--n", "5", "--q", "0.5", "--samples", "10",
                "--pair", "2,2", "--out", out])
    assert rc2 == 2


def test_plot_flag_writes_svg_and_registers_it(tmp_path):
    out = str(tmp_path)
    rc = main([
        "sweep", "--n", "3", "--q", "0:1:0.2", "--samples", "40",
        "--out", out, "--plot", "curve.svg",
    ])
    assert rc == 0
    svg_path = os.path.join(out, "curve.svg")
    assert os.path.exists(svg_path)
    with open(svg_path) as fh:
        assert fh.read().lstrip().startswith("<svg")
    with open(os.path.join(out, "manifest.json")) as fh:
        man = json.load(fh)
    assert "curve.svg" in man["outputs"]


def test_sample_subcommand_is_deterministic(tmp_path, capsys):
    argv = ["sample", "--n", "4", "--q", "0.6", "--seed", "12", "--index", "3"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    obj = json.loads(first)
    assert obj["n"] == 4
    assert obj["q"] == 0.6
    assert obj["sample_index"] == 3
    assert len(obj["graph_digest"]) == 64
    assert set(obj["census"]["per_size"]) == {"1", "2", "3"}
    assert "amplitudes" not in obj

    assert main(argv + ["--amps"]) == 0
    with_amps = json.loads(capsys.readouterr().out)
    amps = np.array([complex(re, im) for re, im in with_amps["amplitudes"]])
    assert amps.size == 16
    assert abs(np.linalg.norm(amps) - 1.0) < 1e-12


def test_sample_rejects_grids(capsys):
    assert main(["sample", "--n", "3", "--q", "0:1:0.5"]) == 2


def test_usage_errors_exit_2(tmp_path, capsys):
    out = str(tmp_path)
    assert main(["sweep", "--n", "4", "--q", "junk", "--out", out]) == 2
    assert main(["sweep", "--n", "1", "--q", "0.5", "--out", out]) == 2
    assert main(["sweep", "--n", "4", "--q", "0.5", "--threads", "x", "--out", out]) == 2
    assert main(["sweep", "--n", "4", "--q", "0.5", "--samples", "0", "--out", out]) == 2


def test_threads_flag_does_not_change_output_bytes(tmp_path):
    outs = []
    for threads in ("1", "8"):
        out = str(tmp_path / f"t{threads}")
        rc = main([
            "sweep", "--n", "4", "--q", "0:1:0.25", "--samples", "600",
            "--seed", "4", "--threads", threads, "--out", out,
        ])
        assert rc == 0
        with open(os.path.join(out, "census.csv"), "rb") as fh:
            outs.append(fh.read())
    assert outs[0] == outs[1]
