"""Monte Carlo sweep engine.

For each q on a grid, Q network instances are simulated and the requested
tasks are evaluated in one pass per sample.  Samples are addressed by
(master_seed, q_index, sample_index) through counter-based substreams, and
work is split into fixed-size blocks whose boundaries do not depend on the
worker count, so results are bitwise identical for any --threads setting.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from hashlib import sha256
from math import comb

import numpy as np

from . import graphs, kernels, measures
from .errors import InvalidInputError, ResourceLimitError
from .quantum import MAX_DENSITY_QUBITS, MAX_STATE_QUBITS, DensityMatrix
from .subsets import (
    canonical_bipartitions,
    census_masks,
    census_sizes,
    labels_to_mask,
    mask_to_labels,
    pair_list,
    triple_list,
)
from .tolerances import NEGATIVITY_ZERO_TOL, PURITY_TOL

TASK_NAMES = ("census", "multipartite", "average_state", "reductions", "percolation")

# Samples per work unit.  Fixed: block boundaries are part of the
# reproducibility contract (they define the merge order), worker counts are
# not allowed to influence them.
BLOCK_SIZE = 512


@dataclass(frozen=True)
class SweepConfig:
    """Full description of one sweep; everything an output depends on."""

    n: int
    q_grid: tuple
    samples: int
    master_seed: int
    purity_tol: float = PURITY_TOL
    root_mode: str = "paper_n"
    workers: object = "auto"
    tasks: frozenset = frozenset({"census"})
    percolation_pair: tuple = None
    store_average_matrix: bool = False

    def __post_init__(self):
        if not 2 <= self.n <= MAX_STATE_QUBITS:
            raise ResourceLimitError(f"n must be in 2..{MAX_STATE_QUBITS}, got {self.n}")
        grid = tuple(float(q) for q in self.q_grid)
        if not grid:
            raise InvalidInputError("q_grid must not be empty")
        if any(not 0.0 <= q <= 1.0 for q in grid):
            raise InvalidInputError("q_grid values must lie in [0, 1]")
        if len(set(grid)) != len(grid) or list(grid) != sorted(grid):
            raise InvalidInputError("q_grid values must be distinct and ascending")
        if self.samples < 1:
            raise InvalidInputError(f"samples must be >= 1, got {self.samples}")
        graphs.check_seed(self.master_seed)
        if self.purity_tol <= 0:
            raise InvalidInputError("purity_tol must be positive")
        if self.root_mode not in measures.ROOT_MODES:
            raise InvalidInputError(f"unknown root_mode {self.root_mode!r}")
        if self.workers != "auto" and (not isinstance(self.workers, int) or self.workers < 1):
            raise InvalidInputError("workers must be a positive integer or 'auto'")
        tasks = frozenset(self.tasks)
        if not tasks or not tasks <= set(TASK_NAMES):
            raise InvalidInputError(f"tasks must be a non-empty subset of {TASK_NAMES}")
        if "average_state" in tasks and self.n > MAX_DENSITY_QUBITS:
            raise ResourceLimitError(
                f"average_state accumulates a dense matrix; n <= {MAX_DENSITY_QUBITS} required"
            )
        if "reductions" in tasks and self.n < 3:
            raise InvalidInputError("reductions task needs n >= 3")
        if "percolation" in tasks:
            if self.percolation_pair is None:
                raise InvalidInputError("percolation task needs percolation_pair=(i, j)")
            i, j = self.percolation_pair
            if i == j or not all(1 <= v <= self.n for v in (i, j)):
                raise InvalidInputError(f"invalid percolation pair {self.percolation_pair}")
            object.__setattr__(self, "percolation_pair", (min(i, j), max(i, j)))
        object.__setattr__(self, "q_grid", grid)
        object.__setattr__(self, "tasks", tasks)

    def resolved_workers(self) -> int:
        if self.workers == "auto":
            return os.cpu_count() or 1
        return int(self.workers)


@dataclass(frozen=True)
class CurveStat:
    """Mean with both spread conventions: std (ddof=1) and std/sqrt(Q)."""

    mean: float
    std: float
    stderr: float


@dataclass(frozen=True)
class AverageStateStats:
    """Figures of merit of the accumulated average state at one q."""

    purity: float
    coherence: float
    multipartite: dict
    class_negativity: tuple
    matrix: object = None


@dataclass(frozen=True)
class ReductionStats:
    """Per-triple tripartite negativities plus the mean pair negativity."""

    triples: dict
    bipartite: CurveStat


@dataclass(frozen=True)
class QPointAggregate:
    """Everything measured at one grid point."""

    q: float
    samples: int
    mixed_pct: tuple = None
    f2_pct: CurveStat = None
    multipartite: dict = None
    average_state: AverageStateStats = None
    reductions: ReductionStats = None
    percolation_pct: tuple = None


@dataclass(frozen=True)
class SampleRecord:
    """One sample, reproducible from (master_seed, q_index, sample_index)."""

    sample_index: int
    graph_digest: str
    graph: graphs.GraphInstance
    census: measures.ReductionCensus
    scalars: dict


class _TaskPlan:
    """Per-config precomputation shared by every block of every q-point."""

    def __init__(self, cfg: SweepConfig):
        n = cfg.n
        pairs = pair_list(n)
        self.pairs_a = np.asarray([i - 1 for i, _ in pairs], dtype=np.int64)
        self.pairs_b = np.asarray([j - 1 for _, j in pairs], dtype=np.int64)
        self.n_pairs = len(pairs)
        if "census" in cfg.tasks:
            masks = census_masks(n)
            sizes = census_sizes(n)
            self.census_mask_arr = np.asarray(masks, dtype=np.int64)
            w = np.zeros((len(masks), n - 1), dtype=np.float64)
            f2w = np.zeros(len(masks), dtype=np.float64)
            for k, (ma, mb) in enumerate(sizes):
                w[k, ma - 1] += 1.0
                w[k, mb - 1] += 1.0
                f2w[k] = (1.0 if ma == 2 else 0.0) + (1.0 if mb == 2 else 0.0)
            self.census_weights = w
            self.f2_weights = f2w
            self.size_totals = np.asarray([comb(n, m) for m in range(1, n)], dtype=np.float64)
            self.f2_total = float(comb(n, 2)) if n >= 3 else 0.0
        if "multipartite" in cfg.tasks:
            self.bipart_masks = np.asarray(canonical_bipartitions(n), dtype=np.int64)
        if "reductions" in cfg.tasks:
            self.triples = triple_list(n)
            self.triple_masks = [labels_to_mask(t) for t in self.triples]
            self.triple_sides = [
                np.asarray([1 << (lab - 1) for lab in t], dtype=np.int64) for t in self.triples
            ]
            self.red_pairs = pair_list(n)
            self.red_pair_masks = [labels_to_mask(p) for p in self.red_pairs]
            self.red_pair_sides = [
                np.asarray([1 << (p[0] - 1)], dtype=np.int64) for p in self.red_pairs
            ]
        if "percolation" in cfg.tasks:
            i, j = cfg.percolation_pair
            self.perc_mask = labels_to_mask((i, j))
            self.perc_side = np.asarray([1 << (i - 1)], dtype=np.int64)


def _simulate_block(cfg, plan, key, q, start, count):
    """Evaluate all requested tasks on samples [start, start+count)."""
    n = cfg.n
    edge_bits = np.empty((count, plan.n_pairs), dtype=np.uint8)
    for t in range(count):
        rng = graphs.stream_at(key, start + t)
        edge_bits[t] = rng.random(plan.n_pairs) < q
    amps = kernels.build_states(edge_bits, plan.pairs_a, plan.pairs_b, n)
    out = {}
    if "census" in cfg.tasks:
        purities = kernels.subset_purities(amps, plan.census_mask_arr, n)
        mixed = (purities < 1.0 - cfg.purity_tol).astype(np.float64)
        out["mixed_pct"] = 100.0 * (mixed @ plan.census_weights) / plan.size_totals
        if plan.f2_total > 0:
            f2 = (np.abs(purities - 0.25) < cfg.purity_tol).astype(np.float64)
            out["f2_pct"] = 100.0 * (f2 @ plan.f2_weights) / plan.f2_total
        else:
            out["f2_pct"] = np.zeros(count)
    if "multipartite" in cfg.tasks:
        factors = kernels.bipartition_negativities(amps, plan.bipart_masks, n)
        with np.errstate(divide="ignore"):
            logs = np.log(factors).sum(axis=1)
        out["en_paper_n"] = np.exp(logs / n)
        out["en_bipartition_count"] = np.exp(logs / plan.bipart_masks.size)
    if "average_state" in cfg.tasks:
        out["proj_sum"] = amps.T @ amps.conj()
    if "reductions" in cfg.tasks:
        tri = np.empty((count, len(plan.triples)), dtype=np.float64)
        for c, (tmask, sides) in enumerate(zip(plan.triple_masks, plan.triple_sides)):
            negs = kernels.reduced_pt_negativities(amps, tmask, sides, n)
            with np.errstate(divide="ignore"):
                tri[:, c] = np.exp(np.log(negs).sum(axis=1) / 3.0)
        out["triples"] = tri
        pairneg = np.empty((count, len(plan.red_pairs)), dtype=np.float64)
        for c, (pmask, sides) in enumerate(zip(plan.red_pair_masks, plan.red_pair_sides)):
            pairneg[:, c] = kernels.reduced_pt_negativities(amps, pmask, sides, n)[:, 0]
        out["bipartite"] = pairneg.mean(axis=1)
    if "percolation" in cfg.tasks:
        neg = kernels.reduced_pt_negativities(amps, plan.perc_mask, plan.perc_side, n)[:, 0]
        out["percolation"] = neg > NEGATIVITY_ZERO_TOL
    return out


def _curve_stat(values) -> CurveStat:
    values = np.asarray(values, dtype=np.float64)
    q = values.size
    mean = float(values.mean())
    std = float(values.std(ddof=1)) if q > 1 else 0.0
    return CurveStat(mean=mean, std=std, stderr=std / np.sqrt(q))


def _average_state_stats(cfg, proj_sum) -> AverageStateStats:
    rho = DensityMatrix(proj_sum / cfg.samples, tuple(range(1, cfg.n + 1)))
    multi = {
        mode: measures.mixed_multipartite_negativity(rho, mode) for mode in measures.ROOT_MODES
    }
    by_class = {}
    for mask in canonical_bipartitions(cfg.n):
        k = min(mask.bit_count(), cfg.n - mask.bit_count())
        by_class.setdefault(k, []).append(measures.negativity(rho, mask_to_labels(mask)))
    class_neg = tuple(
        float(np.mean(by_class[k])) for k in sorted(by_class)
    )
    return AverageStateStats(
        purity=measures.purity(rho),
        coherence=measures.l1_coherence(rho),
        multipartite=multi,
        class_negativity=class_neg,
        matrix=rho if cfg.store_average_matrix else None,
    )


def _aggregate_point(cfg, plan, q, blocks) -> QPointAggregate:
    kwargs = {"q": q, "samples": cfg.samples}
    if "census" in cfg.tasks:
        fr = np.concatenate([b["mixed_pct"] for b in blocks], axis=0)
        kwargs["mixed_pct"] = tuple(_curve_stat(fr[:, m]) for m in range(cfg.n - 1))
        kwargs["f2_pct"] = _curve_stat(np.concatenate([b["f2_pct"] for b in blocks]))
    if "multipartite" in cfg.tasks:
        kwargs["multipartite"] = {
            "paper_n": _curve_stat(np.concatenate([b["en_paper_n"] for b in blocks])),
            "bipartition_count": _curve_stat(
                np.concatenate([b["en_bipartition_count"] for b in blocks])
            ),
        }
    if "average_state" in cfg.tasks:
        proj = blocks[0]["proj_sum"]
        for b in blocks[1:]:
            proj = proj + b["proj_sum"]
        kwargs["average_state"] = _average_state_stats(cfg, proj)
    if "reductions" in cfg.tasks:
        tri = np.concatenate([b["triples"] for b in blocks], axis=0)
        triples = {
            t: _curve_stat(tri[:, c]) for c, t in enumerate(plan.triples)
        }
        bip = _curve_stat(np.concatenate([b["bipartite"] for b in blocks]))
        kwargs["reductions"] = ReductionStats(triples=triples, bipartite=bip)
    if "percolation" in cfg.tasks:
        flags = np.concatenate([b["percolation"] for b in blocks])
        p = float(flags.mean())
        kwargs["percolation_pct"] = (
            100.0 * p,
            100.0 * float(np.sqrt(p * (1.0 - p) / flags.size)),
        )
    return QPointAggregate(**kwargs)


def run_sweep(cfg: SweepConfig) -> list:
    """Run the full sweep; one QPointAggregate per grid value, in order."""
    plan = _TaskPlan(cfg)
    workers = cfg.resolved_workers()
    spans = [
        (s, min(BLOCK_SIZE, cfg.samples - s)) for s in range(0, cfg.samples, BLOCK_SIZE)
    ]
    results = []
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for qi, q in enumerate(cfg.q_grid):
            key = graphs.stream_key(cfg.master_seed, qi)
            if pool is None:
                blocks = [_simulate_block(cfg, plan, key, q, s, c) for s, c in spans]
            else:
                futs = [
                    pool.submit(_simulate_block, cfg, plan, key, q, s, c) for s, c in spans
                ]
                blocks = [f.result() for f in futs]
            results.append(_aggregate_point(cfg, plan, q, blocks))
    finally:
        if pool is not None:
            pool.shutdown()
    return results


def accumulate_average_state(states) -> DensityMatrix:
    """Uniform mixture of the given pure states' projectors.

    States are consumed in the given order and summed in fixed-size chunks,
    exactly matching the engine's accumulation, so results are bitwise
    reproducible for the same input sequence.
    """
    states = list(states)
    if not states:
        raise InvalidInputError("need at least one state")
    n = states[0].n
    if any(s.n != n for s in states):
        raise InvalidInputError("all states must share the same qubit count")
    if n > MAX_DENSITY_QUBITS:
        raise ResourceLimitError(f"average state capped at n <= {MAX_DENSITY_QUBITS}")
    total = None
    for s in range(0, len(states), BLOCK_SIZE):
        a = np.stack([st.amps for st in states[s : s + BLOCK_SIZE]])
        part = a.T @ a.conj()
        total = part if total is None else total + part
    return DensityMatrix(total / len(states), tuple(range(1, n + 1)))


def reduction_profile(cfg: SweepConfig) -> list:
    """Per-q reduction statistics (three-qubit and pair negativities)."""
    cfg = replace(cfg, tasks=frozenset({"reductions"}))
    return run_sweep(cfg)


def percolation_scan(cfg: SweepConfig, pair) -> list:
    """Per-q percentage of samples whose reduction onto `pair` is NPT."""
    cfg = replace(cfg, tasks=frozenset({"percolation"}), percolation_pair=tuple(pair))
    return run_sweep(cfg)


def replay_sample(cfg: SweepConfig, q_index: int, sample_index: int) -> SampleRecord:
    """Regenerate one sample of a sweep in isolation, with its census."""
    if not 0 <= q_index < len(cfg.q_grid):
        raise InvalidInputError(f"q_index {q_index} outside the grid")
    if not 0 <= sample_index < cfg.samples:
        raise InvalidInputError(f"sample_index {sample_index} outside 0..{cfg.samples - 1}")
    key = graphs.stream_key(cfg.master_seed, q_index)
    rng = graphs.stream_at(key, sample_index)
    g = graphs.sample_graph(cfg.n, cfg.q_grid[q_index], rng)
    state = graphs.build_state(g)
    cen = measures.census(state, cfg.purity_tol)
    scalars = {}
    if "multipartite" in cfg.tasks:
        for mode in measures.ROOT_MODES:
            scalars[f"en_{mode}"] = measures.multipartite_negativity(state, mode)
    digest = sha256(g.to_json().encode()).hexdigest()
    return SampleRecord(
        sample_index=sample_index, graph_digest=digest, graph=g, census=cen, scalars=scalars
    )
