"""DOT snapshots of the limit model grown from the four-node example graph.

Active nodes and the edges between them are drawn dark; render with
``neato -Tpng snap_20.dot -o snap_20.png``.

    python scripts/snapshots.py --steps 0 5 20 100 --out results/
"""

import argparse
from pathlib import Path

import numpy as np

from clusterattach import engine, graph
from clusterattach.engine import LIMIT


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, nargs="+", default=[0, 5, 20, 100],
                    help="write a snapshot after each of these steps (default: 0 5 20 100)")
    ap.add_argument("--seed", type=int, default=7, help="RNG seed (default: 7)")
    ap.add_argument("--out", type=Path, default=Path("results"), help="output directory (default: results)")
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    wanted = set(args.steps)
    g0 = graph.quadrilateral_example()

    def save(t, g):
        if t in wanted:
            (args.out / f"snap_{t}.dot").write_text(graph.export_dot(g, name=f"step{t}"))
            print(f"step {t}: {g.n_nodes} nodes, {g.active_count} active, {g.total_triangles()} triangles")

    save(0, g0)
    engine.run(g0, LIMIT, max(args.steps), np.random.default_rng(args.seed), on_step=save)


if __name__ == "__main__":
    main()
