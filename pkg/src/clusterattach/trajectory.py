from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def checkpoints(n_steps: int, thinning: int) -> np.ndarray:
    """Step counts at which a thinned trajectory is recorded.

    Always includes step 0 and the final step ``n_steps``.
    """
    if thinning < 1:
        raise ValueError("thinning must be >= 1")
    t = np.arange(0, n_steps + 1, thinning, dtype=np.int64)
    if t[-1] != n_steps:
        t = np.append(t, np.int64(n_steps))
    return t


@dataclass
class Trajectory:
    """Triangle counts of one replication.

    ``n`` uses 1-based graph indexing: ``n = 1`` is the initial graph and
    ``n = t + 1`` is the graph after ``t`` evolution steps.
    """

    n: np.ndarray
    delta: np.ndarray
    thinning: int = 1
    seed: int | None = None
    initial_label: str = ""
    active: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.n = np.asarray(self.n, dtype=np.int64)
        self.delta = np.asarray(self.delta, dtype=np.int64)
        if self.n.shape != self.delta.shape:
            raise ValueError("n and delta must have the same length")

    def __len__(self) -> int:
        return len(self.n)

    @property
    def delta1(self) -> int:
        return int(self.delta[0])

    @property
    def final_delta(self) -> int:
        return int(self.delta[-1])

    def at(self, n: int) -> int:
        idx = np.searchsorted(self.n, n)
        if idx >= len(self.n) or self.n[idx] != n:
            raise KeyError(f"n={n} not recorded (thinning={self.thinning})")
        return int(self.delta[idx])
