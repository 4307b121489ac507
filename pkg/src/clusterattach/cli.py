"""Command-line interface.

    clusterattach evolve  --initial triangle --steps 100 --seed 7
    clusterattach mc      --initial complete:17 --fast -R 100 -N 1000000
    clusterattach fit     --input curve.csv --window 200000 1000000
    clusterattach oracle  --initial triangle -n 3
    clusterattach verify  --initial quadrilateral-example --n-max 500
    clusterattach convert --input g.txt --to dot

Initial graphs: ``triangle``, ``complete:K``, ``quadrilateral-example``,
``path:K`` (``path-graph`` is ``path:4``) or ``file:PATH`` (edge list).
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import engine, fit, graph, montecarlo, oracle, urn
from .engine import AttachmentFunction, CAParams, ModelError


@dataclass
class RunConfig:
    command: str
    initial: str = "triangle"
    engine: str = "fast"
    m: int = 2
    epsilon: float = 0.0
    alpha: float | None = None
    N: int = 1000
    R: int = 100
    thinning: int = 1
    seed: int = 0
    outputs: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        outs = {k: getattr(args, k) for k in ("out", "meta", "final_edges") if getattr(args, k, None)}
        return cls(
            command=args.command,
            initial=args.initial,
            engine=getattr(args, "engine", "full"),
            m=args.m,
            epsilon=args.epsilon,
            alpha=args.alpha,
            N=getattr(args, "N", None) or getattr(args, "steps", 0),
            R=getattr(args, "R", 1),
            thinning=args.thinning,
            seed=args.seed,
            outputs=outs,
        )

    @property
    def params(self) -> CAParams:
        f = AttachmentFunction.indicator() if self.alpha is None else AttachmentFunction.power(self.alpha)
        return CAParams(m=self.m, epsilon=self.epsilon, f=f)


def initial_graph(spec: str) -> graph.Graph:
    name, _, arg = spec.partition(":")
    if name == "triangle":
        return graph.triangle()
    if name == "complete":
        return graph.complete_graph(int(arg))
    if name in ("quadrilateral-example", "quadrilateral"):
        return graph.quadrilateral_example()
    if name == "path":
        return graph.path_graph(int(arg))
    if name == "path-graph":
        return graph.path_graph(4)
    if name == "file":
        return graph.load_edge_list(Path(arg).read_text())
    raise ValueError(f"unknown initial graph {spec!r}")


def _write(path: str | None, text: str) -> None:
    """Write to ``path`` atomically, or to stdout when ``path`` is None/'-'."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, target)


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--initial", default="triangle", help="initial graph spec (default: triangle)")
    p.add_argument("--m", type=int, default=2, help="edges per new node (default: 2)")
    p.add_argument("--epsilon", type=float, default=0.0, help="additive weight epsilon (default: 0)")
    f = p.add_mutually_exclusive_group()
    f.add_argument("--alpha", type=float, help="power attachment f(x) = x**alpha")
    f.add_argument("--indicator", action="store_true", help="indicator attachment f(x) = 1{x>0} (default)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clusterattach", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="run the full graph engine and write a trajectory CSV")
    _add_model_args(p)
    p.add_argument("--steps", type=int, required=True, help="number of evolution steps")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default: 0)")
    p.add_argument("--thinning", type=int, default=1, help="record every k-th step (default: 1)")
    p.add_argument("--offset", action="store_true", help="add a delta minus delta1 column")
    p.add_argument("--out", help="trajectory CSV path (default: stdout)")
    p.add_argument("--dot-at", type=int, nargs="*", default=[], metavar="STEP",
                   help="write DOT snapshots after these steps")
    p.add_argument("--dot-prefix", default="snapshot", help="DOT file prefix (default: snapshot)")
    p.add_argument("--final-edges", help="write the final graph as an edge list")

    p = sub.add_parser("mc", help="Monte-Carlo replications and mean curve")
    _add_model_args(p)
    eng = p.add_mutually_exclusive_group()
    eng.add_argument("--fast", dest="engine", action="store_const", const="fast",
                     help="counter process (limit model only; default)")
    eng.add_argument("--full", dest="engine", action="store_const", const="full", help="full graph engine")
    p.set_defaults(engine="fast")
    p.add_argument("-R", type=int, default=100, help="replications (default: 100)")
    p.add_argument("-N", type=int, default=10**6, help="steps per replication (default: 1e6)")
    p.add_argument("--thinning", type=int, default=1000, help="record every k-th step (default: 1000)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default: 0)")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default: 1)")
    p.add_argument("--offset", action="store_true", help="add a mean minus delta1 column")
    p.add_argument("--out", help="mean-curve CSV path (default: stdout)")
    p.add_argument("--meta", help="JSON metadata sidecar path (default: OUT.meta.json when --out is set)")

    p = sub.add_parser("fit", help="fit c1 + c2 n^c3 to a mean-curve CSV")
    p.add_argument("--input", required=True, help="CSV written by mc or evolve")
    p.add_argument("--window", type=float, nargs=2, default=None, metavar=("N_MIN", "N_MAX"),
                   help="fit only points with N_MIN <= n <= N_MAX (default: all)")
    p.add_argument("--c1-mode", choices=["free", "fixed", "both"], default="both",
                   help="free c1, c1 fixed to delta1, or report both (default)")
    p.add_argument("--delta1", type=float, help="initial triangle count (default: value at n=1)")
    p.add_argument("--label", default="", help="label for the CSV row")
    p.add_argument("--csv", help="append fit rows to this CSV")

    p = sub.add_parser("oracle", help="exact P(B_n) and E[Delta_n] of the limit model")
    p.add_argument("--initial", default="triangle", help="initial graph spec (default: triangle)")
    p.add_argument("-n", type=int, required=True, help="largest n")
    p.add_argument("--every", type=int, default=1, help="print every k-th n (default: 1)")
    p.add_argument("--out", help="table path (default: stdout)")

    p = sub.add_parser("verify", help="check the probability inequalities and engine agreement")
    p.add_argument("--initial", default="triangle", help="initial graph spec (default: triangle)")
    p.add_argument("--n-max", type=int, default=500, help="largest n for marginal checks (default: 500)")
    p.add_argument("--joint-max", type=int, default=200, help="largest v for joint checks (default: 200)")
    p.add_argument("--whites-max", type=int, default=1000, help="largest white count for the conditional check (default: 1000)")
    p.add_argument("--horizon", type=int, default=10**4, help="largest n-k for the conditional check (default: 1e4)")
    p.add_argument("--equivalence-reps", type=int, default=200,
                   help="replications per engine for the agreement check; 0 skips it (default: 200)")
    p.add_argument("--equivalence-steps", type=int, default=100,
                   help="steps per replication for the agreement check (default: 100)")
    p.add_argument("--seed", type=int, default=0, help="master seed for the agreement check (default: 0)")

    p = sub.add_parser("convert", help="convert an edge list to DOT or normalised edge list")
    p.add_argument("--input", required=True, help="edge-list file or initial graph spec")
    p.add_argument("--to", choices=["dot", "edgelist"], default="dot", help="output format (default: dot)")
    p.add_argument("--out", help="output path (default: stdout)")
    return ap


def cmd_evolve(args) -> int:
    cfg = RunConfig.from_args(args)
    p = cfg.params
    g0 = initial_graph(cfg.initial)
    report = engine.validate_initial(g0, p)
    if not report:
        raise ModelError(report.message)
    rng = np.random.default_rng(args.seed)
    snaps: dict[int, str] = {}
    wanted = set(args.dot_at)

    def on_step(t, g):
        if t in wanted:
            snaps[t] = graph.export_dot(g, name=f"step{t}")

    traj = engine.run(g0, p, cfg.N, rng, thinning=cfg.thinning, on_step=on_step)
    if 0 in wanted:
        snaps[0] = graph.export_dot(g0, name="step0")
    traj.seed = args.seed
    traj.initial_label = args.initial
    _write(args.out, montecarlo.export_csv(traj, offset=args.offset))
    for t, text in sorted(snaps.items()):
        _write(f"{args.dot_prefix}_{t}.dot", text)
    if args.final_edges:
        _write(args.final_edges, graph.save_edge_list(traj.extra["graph"]))
    return 0


def cmd_mc(args) -> int:
    cfg = RunConfig.from_args(args)
    g0 = initial_graph(cfg.initial)
    res = montecarlo.run_replications(
        g0, cfg.engine, R=cfg.R, N=cfg.N, thinning=cfg.thinning,
        master_seed=cfg.seed, params=cfg.params, label=cfg.initial, workers=args.workers,
    )
    _write(args.out, montecarlo.export_csv(res.curve, offset=args.offset))
    meta_path = args.meta or (f"{args.out}.meta.json" if args.out and args.out != "-" else None)
    if meta_path:
        _write(meta_path, montecarlo.metadata_json(res.meta))
    return 0


def cmd_fit(args) -> int:
    cols = montecarlo.parse_csv(Path(args.input).read_text())
    ycol = "delta_mean" if "delta_mean" in cols else "delta"
    n, y = cols["n"], cols[ycol]
    delta1 = args.delta1
    if delta1 is None and len(n) and n[0] == 1:
        delta1 = float(y[0])
    modes = ["free", "fixed"] if args.c1_mode == "both" else [args.c1_mode]
    out, rows = [], []
    for mode in modes:
        r = fit.fit_power(n, y, window=args.window, c1_mode=mode, delta1=delta1)
        out.append(r.text())
        rows.append(r.csv_row(args.label))
    sys.stdout.write("".join(out))
    if args.csv:
        path = Path(args.csv)
        head = "" if path.exists() else fit.CSV_HEADER
        with path.open("a") as fh:
            fh.write(head + "".join(rows))
    return 0


def cmd_oracle(args) -> int:
    s0 = urn.from_graph(initial_graph(args.initial))
    pb = oracle.pb_curve(s0, args.n)
    ed = oracle.expected_delta_curve(s0, args.n)
    lines = ["n,p_b,expected_delta"]
    for n in range(1, args.n + 1):
        if (n - 1) % args.every == 0 or n == args.n:
            lines.append(f"{n},{pb[n - 1]:.12g},{ed[n - 1]:.12g}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def equivalence_check(g0: graph.Graph, reps: int, steps: int, seed: int) -> tuple[bool, str]:
    """Both engines' mean Delta at ``steps`` against the exact expectation."""
    s0 = urn.from_graph(g0)
    exact = oracle.expected_delta(s0, steps + 1)
    lines, ok = [], True
    for name in ("fast", "full"):
        res = montecarlo.run_replications(g0, name, R=reps, N=steps, thinning=steps, master_seed=seed)
        mean, se = res.curve.at(steps + 1)
        z = (mean - exact) / se if se > 0 else 0.0
        passed = abs(z) <= 4
        ok &= passed
        lines.append(
            f"[{'PASS' if passed else 'FAIL'}] engine_{name}: mean Delta_{steps + 1} = {mean:.4f} "
            f"(se {se:.4f}), exact {exact:.4f}, z = {z:+.2f}"
        )
    return ok, "\n".join(lines)


def cmd_verify(args) -> int:
    g0 = initial_graph(args.initial)
    s0 = urn.from_graph(g0)
    report = oracle.verify_lemmas(
        s0, n_max=args.n_max, joint_max=min(args.joint_max, args.n_max),
        j_max=args.whites_max, d_max=args.horizon,
    )
    text = report.text()
    ok = report.passed
    if args.equivalence_reps > 0:
        eq_ok, eq_text = equivalence_check(g0, args.equivalence_reps, args.equivalence_steps, args.seed)
        ok &= eq_ok
        text += eq_text + "\n"
    sys.stdout.write(text)
    return 0 if ok else 1


def cmd_convert(args) -> int:
    src = args.input
    g = initial_graph(src) if ":" in src or not Path(src).exists() else graph.load_edge_list(Path(src).read_text())
    text = graph.export_dot(g) if args.to == "dot" else graph.save_edge_list(g)
    _write(args.out, text)
    return 0


COMMANDS = {
    "evolve": cmd_evolve,
    "mc": cmd_mc,
    "fit": cmd_fit,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "convert": cmd_convert,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ModelError, urn.StateError, graph.EdgeListParseError, fit.FitError, ValueError, OSError) as exc:
        print(f"clusterattach {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
