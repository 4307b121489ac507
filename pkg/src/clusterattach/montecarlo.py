"""Independent replications of triangle-count trajectories and their mean curve.

Replication ``j`` of a run with master seed ``S`` draws from
``numpy.random.default_rng(derive_seed(S, j))`` where ``derive_seed`` takes
the first 64-bit word of ``SeedSequence(S, spawn_key=(j,))``.  The mapping
depends only on ``(S, j)``, so results do not depend on how replications
are scheduled across workers.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import engine, urn
from .engine import CAParams, LIMIT
from .graph import Graph
from .trajectory import Trajectory, checkpoints


def derive_seed(master_seed: int, index: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class MeanCurve:
    n: np.ndarray
    mean: np.ndarray
    sd: np.ndarray
    replications: int
    delta1: int
    label: str = ""

    def se(self) -> np.ndarray:
        return self.sd / np.sqrt(self.replications)

    def at(self, n: int) -> tuple[float, float]:
        """``(mean, standard error)`` at a recorded ``n``."""
        i = int(np.searchsorted(self.n, n))
        if i >= len(self.n) or self.n[i] != n:
            raise KeyError(f"n={n} not recorded")
        return float(self.mean[i]), float(self.se()[i])

    @property
    def offset(self) -> np.ndarray:
        return self.mean - self.delta1


@dataclass
class ReplicationSummary:
    index: int
    seed: int
    final_delta: int
    final_active: int


@dataclass
class MCResult:
    curve: MeanCurve
    summaries: list[ReplicationSummary]
    trajectories: list[Trajectory] | None = None
    meta: dict = field(default_factory=dict)


def _one(args) -> Trajectory:
    initial, engine_name, params, n_steps, thinning, seed, label = args
    rng = np.random.default_rng(seed)
    if engine_name == "fast":
        traj = urn.run_fast(initial, n_steps, rng, thinning=thinning, record_active=True)
    else:
        traj = engine.run(initial, params, n_steps, rng, thinning=thinning, record_active=True)
        traj.extra.pop("graph", None)
    traj.seed = seed
    traj.initial_label = label
    return traj


def run_replications(
    initial: Graph | urn.CounterState,
    engine_name: str = "fast",
    R: int = 100,
    N: int = 10**6,
    thinning: int = 1000,
    master_seed: int = 0,
    params: CAParams = LIMIT,
    label: str = "",
    workers: int = 1,
    keep_trajectories: bool = False,
    seeds: list[int] | None = None,
) -> MCResult:
    """Run ``R`` replications of ``N`` steps and average them index by index.

    ``engine_name`` is ``"fast"`` (counter process, limit model only) or
    ``"full"`` (graph engine, any parameters).  ``seeds`` overrides the
    per-replication seeds derived from ``master_seed``.
    """
    if R < 1 or N < 0:
        raise ValueError("need R >= 1 and N >= 0")
    if engine_name == "fast":
        if not params.is_limit:
            raise ValueError("the fast engine only simulates the epsilon=0, m=2, indicator model")
        s0 = initial if isinstance(initial, urn.CounterState) else urn.from_graph(initial)
        start = s0
    elif engine_name == "full":
        if not isinstance(initial, Graph):
            raise TypeError("the full engine needs an initial Graph")
        report = engine.validate_initial(initial, params)
        if not report:
            raise engine.ModelError(report.message)
        start = initial
    else:
        raise ValueError(f"unknown engine {engine_name!r}")

    if seeds is None:
        seeds = [derive_seed(master_seed, j) for j in range(R)]
    elif len(seeds) != R:
        raise ValueError("need one seed per replication")
    jobs = [(start, engine_name, params, N, thinning, s, label) for s in seeds]
    t0 = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            trajs = list(pool.map(_one, jobs, chunksize=max(1, R // (4 * workers))))
    else:
        trajs = [_one(job) for job in jobs]
    wall = time.perf_counter() - t0

    stack = np.stack([t.delta for t in trajs]).astype(np.float64)
    # fixed summation order over replication index
    total = np.zeros(stack.shape[1])
    for row in stack:
        total += row
    mean = total / R
    sd = stack.std(axis=0, ddof=1) if R > 1 else np.zeros_like(mean)
    curve = MeanCurve(trajs[0].n.copy(), mean, sd, R, trajs[0].delta1, label)
    summaries = [
        ReplicationSummary(j, t.seed, t.final_delta, int(t.active[-1])) for j, t in enumerate(trajs)
    ]
    meta = {
        "label": label,
        "engine": engine_name,
        "replications": R,
        "steps": N,
        "thinning": thinning,
        "master_seed": master_seed,
        "seed_scheme": "SeedSequence(master_seed, spawn_key=(j,)).generate_state(1, uint64)[0]",
        "params": {
            "m": params.m,
            "epsilon": params.epsilon,
            "f": params.f.kind,
            "alpha": params.f.alpha,
        },
        "seeds": seeds,
        "wall_time_s": wall,
    }
    return MCResult(curve, summaries, trajs if keep_trajectories else None, meta)


# --- CSV ------------------------------------------------------------------

def export_csv(obj: MeanCurve | Trajectory, offset: bool = False) -> str:
    """CSV text: ``n,delta_mean`` for curves, ``n,delta`` for trajectories.

    ``offset=True`` appends the column ``minus_delta1`` holding the value
    minus the initial triangle count.
    """
    if isinstance(obj, MeanCurve):
        name, values, d1 = "delta_mean", obj.mean, obj.delta1
        fmt = lambda x: repr(float(x))  # noqa: E731
    else:
        name, values, d1 = "delta", obj.delta, obj.delta1 if len(obj) else 0
        fmt = lambda x: str(int(x))  # noqa: E731
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", name, "minus_delta1"] if offset else ["n", name])
    for n, y in zip(obj.n.tolist(), values.tolist()):
        row = [n, fmt(y)]
        if offset:
            row.append(fmt(y - d1))
        w.writerow(row)
    return buf.getvalue()


def parse_csv(text: str) -> dict[str, np.ndarray]:
    """Columns of a CSV written by :func:`export_csv`, keyed by header name."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ValueError("empty CSV")
    header = rows[0]
    body = [r for r in rows[1:] if r]
    cols: dict[str, np.ndarray] = {}
    for k, name in enumerate(header):
        vals = [r[k] for r in body]
        if name == "n" or (name == "delta" and all("." not in v for v in vals)):
            cols[name] = np.array([int(v) for v in vals], dtype=np.int64)
        else:
            cols[name] = np.array([float(v) for v in vals], dtype=np.float64)
    return cols


def metadata_json(meta: dict) -> str:
    return json.dumps(meta, indent=2, sort_keys=True) + "\n"


__all__ = [
    "MCResult",
    "MeanCurve",
    "ReplicationSummary",
    "Trajectory",
    "checkpoints",
    "derive_seed",
    "export_csv",
    "metadata_json",
    "parse_csv",
    "run_replications",
]
