"""Command-line driver.

Thin single-threaded front end over the sweep engine: parses flags, runs the
requested task set, persists results as CSV or JSON plus a run manifest, and
optionally emits a summary SVG chart.  All parallelism lives inside the
engine; everything written here is a pure function of the configuration, so
reruns reproduce identical bytes.

Exit codes: 0 on success, 1 on a numeric or runtime failure, 2 on a usage
error.  Curve-fit failures on degenerate data (for example a single-point
grid) are recorded in thresholds.json rather than treated as fatal.
"""

import argparse
import hashlib
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, kernels, svgplot
from .analysis import (
    FIT_FAMILY,
    bootstrap_threshold,
    fit_mixedness_curve,
    locate_max,
    solve_threshold,
)
from .engine import SweepConfig, replay_sample, run_sweep
from .errors import InvalidInputError, RandClusterError, ResourceLimitError
from .graphs import build_state

USAGE_EXIT = 2
FAILURE_EXIT = 1
THRESHOLD_LEVEL = 99.9
CSV_SCHEMA_VERSION = 1

ROOT_MODE_BY_FLAG = {"paper": "paper_n", "bipartitions": "bipartition_count"}

# spawn-key namespace separating analysis rng streams from sampling streams
_ANALYSIS_TAG = 101


def parse_grid(text):
    """Grid flag parser: 'start:stop:step' (inclusive) or a comma list."""
    text = str(text).strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError("expected start:stop:step")
            start, stop, step = (float(p) for p in parts)
            if step <= 0:
                raise ValueError("step must be positive")
            if stop < start:
                raise ValueError("stop must be >= start")
            vals = []
            i = 0
            while True:
                v = round(start + i * step, 12)
                if v > stop + 1e-9:
                    break
                vals.append(v)
                i += 1
        else:
            vals = [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise InvalidInputError(f"bad --q value {text!r}: {exc}") from None
    if not vals:
        raise InvalidInputError(f"bad --q value {text!r}: empty grid")
    return tuple(vals)


def parse_pair(text):
    """'--pair i,j' parser."""
    parts = str(text).split(",")
    if len(parts) != 2:
        raise InvalidInputError(f"bad --pair value {text!r}: expected i,j")
    try:
        i, j = int(parts[0]), int(parts[1])
    except ValueError:
        raise InvalidInputError(f"bad --pair value {text!r}: expected integers") from None
    return i, j


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        raise InvalidInputError("boolean cells are not part of any table schema")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.12g}"


def _write_table(outdir, stem, header, rows, fmt):
    """Persist one table as stem.csv or stem.json; returns the filename."""
    if fmt == "csv":
        name = f"{stem}.csv"
        lines = [",".join(header)]
        lines.extend(",".join(_cell(v) for v in row) for row in rows)
        with open(os.path.join(outdir, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        name = f"{stem}.json"
        obj = {
            "columns": list(header),
            "rows": [[(int(v) if isinstance(v, (int, np.integer)) else float(v)) for v in row] for row in rows],
        }
        _dump_json(os.path.join(outdir, name), obj)
    return name


def _dump_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def config_as_dict(cfg):
    return {
        "n": cfg.n,
        "q_grid": [float(q) for q in cfg.q_grid],
        "samples": cfg.samples,
        "master_seed": cfg.master_seed,
        "purity_tol": cfg.purity_tol,
        "root_mode": cfg.root_mode,
        "workers": cfg.workers,
        "tasks": sorted(cfg.tasks),
        "percolation_pair": list(cfg.percolation_pair) if cfg.percolation_pair else None,
    }


def config_from_dict(d):
    """Rebuild the engine configuration recorded in a manifest."""
    return SweepConfig(
        n=int(d["n"]),
        q_grid=tuple(d["q_grid"]),
        samples=int(d["samples"]),
        master_seed=int(d["master_seed"]),
        purity_tol=float(d["purity_tol"]),
        root_mode=str(d["root_mode"]),
        workers=d["workers"] if d["workers"] == "auto" else int(d["workers"]),
        tasks=frozenset(d["tasks"]),
        percolation_pair=tuple(d["percolation_pair"]) if d["percolation_pair"] else None,
    )


def _write_manifest(outdir, command, cfg, filenames):
    manifest = {
        "tool": "randcluster",
        "version": __version__,
        "command": command,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "backend": kernels.BACKEND,
        "fit_family": FIT_FAMILY,
        "csv_schema_version": CSV_SCHEMA_VERSION,
        "config": config_as_dict(cfg),
        "outputs": {name: _sha256(os.path.join(outdir, name)) for name in sorted(filenames)},
    }
    _dump_json(os.path.join(outdir, "manifest.json"), manifest)


def _analysis_rng(cfg, stream):
    seq = np.random.SeedSequence(cfg.master_seed, spawn_key=(_ANALYSIS_TAG, stream))
    return np.random.default_rng(seq)


def _config(args, tasks, pair=None):
    workers = args.threads
    if workers != "auto":
        try:
            workers = int(workers)
        except ValueError:
            raise InvalidInputError(
                f"bad --threads value {args.threads!r}: expected integer or 'auto'"
            ) from None
    return SweepConfig(
        n=args.n,
        q_grid=parse_grid(args.q),
        samples=args.samples,
        master_seed=args.seed,
        purity_tol=args.purity_tol,
        root_mode=ROOT_MODE_BY_FLAG[args.root_mode],
        workers=workers,
        tasks=frozenset(tasks),
        percolation_pair=pair,
    )


def _outdir(args):
    outdir = args.out
    os.makedirs(outdir, exist_ok=True)
    return outdir


def _plot_path(args, outdir):
    if not args.plot:
        return None
    if os.path.isabs(args.plot) or os.path.dirname(args.plot):
        return args.plot
    return os.path.join(outdir, args.plot)


def _register_plot(files, plot, outdir):
    """List the chart in the manifest when it lands inside the output dir."""
    if plot and os.path.dirname(os.path.abspath(plot)) == os.path.abspath(outdir):
        files.append(os.path.basename(plot))


def threshold_table(results, cfg, level=THRESHOLD_LEVEL):
    """Fit each size-class mixedness curve and solve for its threshold.

    Fit or crossing failures are recorded per entry, never raised: a grid
    too small or too flat to fit is a property of the data, not a crash.
    """
    entries = []
    for k in range(1, cfg.n):
        pts = [(r.q, r.mixed_pct[k - 1].mean, r.mixed_pct[k - 1].stderr) for r in results]
        entry = {"k": k}
        try:
            fit = fit_mixedness_curve(pts)
            q_star = solve_threshold(fit, level)
            _, spread = bootstrap_threshold(pts, level, n_boot=100, rng=_analysis_rng(cfg, k))
            entry.update(
                status="ok",
                q_star=q_star,
                uncertainty=spread,
                fit_params=[float(p) for p in fit.params],
                fit_residual=fit.residual,
            )
        except RandClusterError as exc:
            entry.update(status="unavailable", q_star=None, uncertainty=None, detail=str(exc))
        entries.append(entry)
    return entries


def f2_max_entry(results, cfg):
    pts = [(r.q, r.f2_pct.mean, r.f2_pct.stderr) for r in results]
    try:
        v, u = locate_max(pts, n_boot=100, rng=_analysis_rng(cfg, 0))
        return {"status": "ok", "q_at_max": v, "uncertainty": u}
    except RandClusterError as exc:
        return {"status": "unavailable", "q_at_max": None, "uncertainty": None, "detail": str(exc)}


def cmd_sweep(args):
    cfg = _config(args, {"census"})
    outdir = _outdir(args)
    results = run_sweep(cfg)

    header = ["q", "samples"]
    for k in range(1, cfg.n):
        header += [f"mixed{k}_pct", f"mixed{k}_stderr"]
    header += ["f2_pct", "f2_stderr"]
    rows = []
    for r in results:
        row = [r.q, r.samples]
        for k in range(1, cfg.n):
            row += [r.mixed_pct[k - 1].mean, r.mixed_pct[k - 1].stderr]
        row += [r.f2_pct.mean, r.f2_pct.stderr]
        rows.append(row)
    files = [_write_table(outdir, "census", header, rows, args.format)]

    table = threshold_table(results, cfg)
    payload = {
        "level": THRESHOLD_LEVEL,
        "fit_family": FIT_FAMILY,
        "thresholds": table,
        "f2_max": f2_max_entry(results, cfg),
    }
    _dump_json(os.path.join(outdir, "thresholds.json"), payload)
    files.append("thresholds.json")

    plot = _plot_path(args, outdir)
    if plot:
        q = [r.q for r in results]
        series = [
            svgplot.Series(
                label=f"size-{k} mixed %",
                x=q,
                y=[r.mixed_pct[k - 1].mean for r in results],
                yerr=[r.mixed_pct[k - 1].stderr for r in results],
            )
            for k in range(1, cfg.n)
        ]
        series.append(
            svgplot.Series(
                label="max-mixed pair %",
                x=q,
                y=[r.f2_pct.mean for r in results],
                yerr=[r.f2_pct.stderr for r in results],
            )
        )
        vlines = [
            (e["q_star"], f"T{e['k']}") for e in table if e["status"] == "ok"
        ]
        svgplot.line_chart(
            series,
            plot,
            title=f"Mixed-reduction fractions, n={cfg.n}",
            xlabel="gate probability q",
            ylabel="percent of reductions",
            vlines=vlines,
        )
        _register_plot(files, plot, outdir)

    _write_manifest(outdir, "sweep", cfg, files)
    return 0


def cmd_negativity(args):
    cfg = _config(args, {"multipartite"})
    outdir = _outdir(args)
    results = run_sweep(cfg)

    header = [
        "q",
        "samples",
        "en_paper_mean",
        "en_paper_std",
        "en_paper_stderr",
        "en_bipartitions_mean",
        "en_bipartitions_std",
        "en_bipartitions_stderr",
    ]
    rows = []
    for r in results:
        a = r.multipartite["paper_n"]
        b = r.multipartite["bipartition_count"]
        rows.append([r.q, r.samples, a.mean, a.std, a.stderr, b.mean, b.std, b.stderr])
    files = [_write_table(outdir, "negativity", header, rows, args.format)]

    plot = _plot_path(args, outdir)
    if plot:
        q = [r.q for r in results]
        series = [
            svgplot.Series(
                label=f"mean E_{cfg.n} ({flag} root)",
                x=q,
                y=[r.multipartite[mode].mean for r in results],
                yerr=[r.multipartite[mode].std for r in results],
            )
            for flag, mode in ROOT_MODE_BY_FLAG.items()
        ]
        svgplot.line_chart(
            series,
            plot,
            title=f"Multipartite negativity, n={cfg.n}",
            xlabel="gate probability q",
            ylabel="mean negativity",
        )
        _register_plot(files, plot, outdir)

    _write_manifest(outdir, "negativity", cfg, files)
    return 0


def cmd_average_state(args):
    cfg = _config(args, {"average_state"})
    outdir = _outdir(args)
    results = run_sweep(cfg)

    half = cfg.n // 2
    header = ["q", "samples", "purity", "coherence", "en_paper", "en_bipartitions"]
    header += [f"neg_size{k}" for k in range(1, half + 1)]
    rows = []
    for r in results:
        st = r.average_state
        row = [
            r.q,
            r.samples,
            st.purity,
            st.coherence,
            st.multipartite["paper_n"],
            st.multipartite["bipartition_count"],
        ]
        row += list(st.class_negativity)
        rows.append(row)
    files = [_write_table(outdir, "average_state", header, rows, args.format)]

    plot = _plot_path(args, outdir)
    if plot:
        q = [r.q for r in results]
        scale = float((1 << cfg.n) - 1)
        mode = cfg.root_mode
        series = [
            svgplot.Series(label="purity", x=q, y=[r.average_state.purity for r in results]),
            svgplot.Series(
                label=f"coherence / {int(scale)}",
                x=q,
                y=[r.average_state.coherence / scale for r in results],
            ),
            svgplot.Series(
                label=f"E_{cfg.n} of the average state",
                x=q,
                y=[r.average_state.multipartite[mode] for r in results],
            ),
        ]
        svgplot.line_chart(
            series,
            plot,
            title=f"Average-state figures of merit, n={cfg.n}",
            xlabel="gate probability q",
            ylabel="value",
        )
        _register_plot(files, plot, outdir)

    _write_manifest(outdir, "average-state", cfg, files)
    return 0


def cmd_reductions(args):
    cfg = _config(args, {"reductions"})
    outdir = _outdir(args)
    results = run_sweep(cfg)

    triples = sorted(results[0].reductions.triples)
    header = ["q", "samples"]
    for t in triples:
        tag = "_".join(str(v) for v in t)
        header += [f"e3_{tag}_mean", f"e3_{tag}_std"]
    header += ["ebip_mean", "ebip_std"]
    rows = []
    for r in results:
        row = [r.q, r.samples]
        for t in triples:
            cs = r.reductions.triples[t]
            row += [cs.mean, cs.std]
        row += [r.reductions.bipartite.mean, r.reductions.bipartite.std]
        rows.append(row)
    files = [_write_table(outdir, "reductions", header, rows, args.format)]

    plot = _plot_path(args, outdir)
    if plot:
        q = [r.q for r in results]
        series = [
            svgplot.Series(
                label="triple " + "-".join(str(v) for v in t),
                x=q,
                y=[r.reductions.triples[t].mean for r in results],
            )
            for t in triples
        ]
        series.append(
            svgplot.Series(
                label="mean pair negativity",
                x=q,
                y=[r.reductions.bipartite.mean for r in results],
                yerr=[r.reductions.bipartite.std for r in results],
            )
        )
        svgplot.line_chart(
            series,
            plot,
            title=f"Reduction negativities, n={cfg.n}",
            xlabel="gate probability q",
            ylabel="mean negativity",
        )
        _register_plot(files, plot, outdir)

    _write_manifest(outdir, "reductions", cfg, files)
    return 0


def cmd_percolation(args):
    pair = parse_pair(args.pair)
    cfg = _config(args, {"percolation"}, pair=pair)
    outdir = _outdir(args)
    results = run_sweep(cfg)

    header = ["q", "samples", "nonzero_pct", "nonzero_stderr"]
    rows = [[r.q, r.samples, r.percolation_pct[0], r.percolation_pct[1]] for r in results]
    files = [_write_table(outdir, "percolation", header, rows, args.format)]

    plot = _plot_path(args, outdir)
    if plot:
        svgplot.line_chart(
            [
                svgplot.Series(
                    label=f"pair {cfg.percolation_pair} entangled %",
                    x=[r.q for r in results],
                    y=[r.percolation_pct[0] for r in results],
                    yerr=[r.percolation_pct[1] for r in results],
                )
            ],
            plot,
            title=f"Long-range pair entanglement, n={cfg.n}",
            xlabel="gate probability q",
            ylabel="percent of samples",
        )
        _register_plot(files, plot, outdir)

    _write_manifest(outdir, "percolation", cfg, files)
    return 0


def cmd_sample(args):
    grid = parse_grid(args.q)
    if len(grid) != 1:
        raise InvalidInputError("sample expects a single --q value, not a grid")
    cfg = SweepConfig(
        n=args.n,
        q_grid=grid,
        samples=args.index + 1,
        master_seed=args.seed,
        purity_tol=args.purity_tol,
    )
    rec = replay_sample(cfg, 0, args.index)
    obj = {
        "n": cfg.n,
        "q": cfg.q_grid[0],
        "master_seed": cfg.master_seed,
        "sample_index": rec.sample_index,
        "graph": {"n": rec.graph.n, "edges": [list(e) for e in rec.graph.edges]},
        "graph_digest": rec.graph_digest,
        "census": {
            "per_size": {
                str(m): {"total": tot, "mixed": mix}
                for m, (tot, mix) in sorted(rec.census.per_size.items())
            },
            "f2_hits": rec.census.f2_hits,
            "f2_total": rec.census.f2_total,
        },
    }
    if args.amps:
        amps = build_state(rec.graph).amps
        obj["amplitudes"] = [[float(a.real), float(a.imag)] for a in amps]
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _add_common(sub, grid_default="0:1:0.02"):
    sub.add_argument("--n", type=int, required=True, help="number of qubits")
    sub.add_argument(
        "--q",
        default=grid_default,
        help="gate-probability grid: start:stop:step or a comma list",
    )
    sub.add_argument("--samples", type=int, default=1000, help="samples per grid point")
    sub.add_argument("--seed", type=int, default=0, help="master seed")
    sub.add_argument(
        "--threads", default="auto", help="worker threads (integer or 'auto')"
    )
    sub.add_argument("--out", default=".", metavar="DIR", help="output directory")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--plot", default=None, metavar="FILE.svg", help="write a chart")
    sub.add_argument(
        "--purity-tol",
        type=float,
        default=1e-9,
        dest="purity_tol",
        help="purity distance from 1 below which a reduction counts as pure",
    )
    sub.add_argument(
        "--root-mode",
        choices=tuple(ROOT_MODE_BY_FLAG),
        default="paper",
        dest="root_mode",
        help="root convention for the multipartite negativity product",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="randcluster",
        description="Monte Carlo survey of entanglement in random CZ-gate networks.",
    )
    parser.add_argument("--version", action="version", version=f"randcluster {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("sweep", help="mixed-reduction census with threshold fits")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("negativity", help="per-sample multipartite negativity means")
    _add_common(p)
    p.set_defaults(func=cmd_negativity)

    p = subs.add_parser(
        "average-state", help="accumulated average state: purity, coherence, negativities"
    )
    _add_common(p)
    p.set_defaults(func=cmd_average_state)

    p = subs.add_parser("reductions", help="three-qubit and pair reduction negativities")
    _add_common(p)
    p.set_defaults(func=cmd_reductions)

    p = subs.add_parser("percolation", help="long-range pair entanglement scan")
    _add_common(p)
    p.add_argument("--pair", required=True, help="qubit pair i,j")
    p.set_defaults(func=cmd_percolation)

    p = subs.add_parser("sample", help="print one reproducible sample as JSON")
    p.add_argument("--n", type=int, required=True, help="number of qubits")
    p.add_argument("--q", required=True, help="single gate probability")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--index", type=int, default=0, help="sample index within the stream")
    p.add_argument("--amps", action="store_true", help="include the amplitude vector")
    p.add_argument("--purity-tol", type=float, default=1e-9, dest="purity_tol")
    p.set_defaults(func=cmd_sample)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInputError, ResourceLimitError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except RandClusterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILURE_EXIT
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return FAILURE_EXIT


if __name__ == "__main__":
    sys.exit(main())
