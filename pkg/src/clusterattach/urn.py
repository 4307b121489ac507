"""Counter (urn) form of the limit model: epsilon=0, m=2, indicator f.

Under the limit model a new node attaches to a uniformly random pair of
active nodes.  The pair is an edge ("white ball") with probability
``e_conn / e_total``; then the new node closes exactly one triangle, becomes
active, and brings two new active-active edges.  Otherwise nothing about the
active part changes.  Four integers therefore determine the whole triangle
count process.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, replace
from fractions import Fraction
from math import isqrt

import numpy as np

from .graph import Graph
from .trajectory import Trajectory, checkpoints

INT64_MAX = np.iinfo(np.int64).max


class StateError(ValueError):
    pass


@dataclass(frozen=True)
class CounterState:
    v: int            # active nodes
    e_conn: int       # active-active pairs that are edges (white balls)
    delta1: int       # triangles of the initial graph
    v1: int           # active nodes of the initial graph

    @property
    def e_total(self) -> int:
        return self.v * (self.v - 1) // 2

    @property
    def e_disc(self) -> int:
        return self.e_total - self.e_conn

    @property
    def whites(self) -> int:
        """Number of white draws since the initial state."""
        return self.v - self.v1

    def check(self) -> None:
        if self.e_conn <= 0 or self.v < 3:
            raise StateError(f"need at least one triangle among active nodes: {self}")
        if self.e_conn > self.e_total:
            raise StateError(f"more connected pairs than pairs: {self}")
        if self.e_conn <= self.v - 1:
            raise StateError(f"active subgraph with {self.v} nodes needs more than {self.v - 1} edges: {self}")

    def after_whites(self, j: int) -> "CounterState":
        return replace(self, v=self.v + j, e_conn=self.e_conn + 2 * j)


def from_graph(g: Graph) -> CounterState:
    if g.active_count < 2:
        raise StateError(
            f"limit model needs at least 2 nodes lying in a triangle, initial graph has {g.active_count}"
        )
    s = CounterState(g.active_count, g.active_connected_pairs, g.total_triangles(), g.active_count)
    s.check()
    return s


def delta(s: CounterState) -> int:
    return s.v + (s.delta1 - s.v1)


def delta_from_pairs(s: CounterState) -> int:
    """Triangle count recovered from the urn size by inverting v(v-1)/2."""
    disc = 1 + 8 * s.e_total
    r = isqrt(disc)
    if r * r != disc:
        raise StateError("urn size is not a triangular number")
    return s.delta1 - s.v1 + (1 + r) // 2


def p_b(s: CounterState) -> Fraction:
    """Probability that the next step closes a triangle."""
    return Fraction(s.e_conn, s.e_total)


def conditional_pb(s_k: CounterState, k: int, n: int) -> Fraction:
    """P(triangle at step ``n`` | state ``s_k`` at step ``k`` and all of k..n-1 white)."""
    if not n >= k >= 1:
        raise ValueError("need n >= k >= 1")
    d = n - k
    return Fraction(s_k.e_conn + 2 * d, s_k.e_total + d * s_k.v + d * (d - 1) // 2)


def step(s: CounterState, rng: np.random.Generator) -> tuple[CounterState, bool]:
    """One urn draw; the state is returned unchanged on a black ball."""
    xi = int(rng.integers(1, s.e_total, endpoint=True))
    if xi <= s.e_conn:
        return CounterState(s.v + 1, s.e_conn + 2, s.delta1, s.v1), True
    return s, False


def _batch(e_conn: int, e_total: int) -> int:
    # about twice the expected wait for a white ball
    return int(min(1 << 16, max(16, 2 * e_total // e_conn + 16)))


def iter_white_times(s0: CounterState, n_steps: int, rng: np.random.Generator):
    """Yield the steps (1-based) at which a white ball is drawn within ``n_steps``.

    Draws are taken in blocks with a fixed bound ``e_total``: the state only
    changes on a white ball, so every draw up to and including the first
    white in a block is a valid urn draw.  Draws after it are discarded and
    the next block uses the updated bound.
    """
    e, v = s0.e_conn, s0.v
    t = 0
    while t < n_steps:
        tot = v * (v - 1) // 2
        if tot > INT64_MAX:
            raise OverflowError("urn size exceeds 64-bit range")
        b = min(n_steps - t, _batch(e, tot))
        xi = rng.integers(1, tot, size=b, endpoint=True)
        hit = np.flatnonzero(xi <= e)
        if hit.size == 0:
            t += b
            continue
        t += int(hit[0]) + 1
        yield t
        e += 2
        v += 1


def white_times(s0: CounterState, n_steps: int, rng: np.random.Generator) -> np.ndarray:
    return np.fromiter(iter_white_times(s0, n_steps, rng), dtype=np.int64)


def run_fast(
    s0: CounterState,
    n_steps: int,
    rng: np.random.Generator,
    thinning: int = 1,
    record_active: bool = False,
) -> Trajectory:
    """Triangle-count trajectory of the limit model without building the graph."""
    ts = checkpoints(n_steps, thinning)
    marks = ts.tolist()
    count = np.empty(len(ts), dtype=np.int64)
    whites = 0
    k = 0
    for t in iter_white_times(s0, n_steps, rng):
        k_next = bisect_left(marks, t, k)
        count[k:k_next] = whites
        k = k_next
        whites += 1
    count[k:] = whites
    traj = Trajectory(ts + 1, delta(s0) + count, thinning=thinning)
    if record_active:
        traj.active = s0.v + count
    traj.extra["final_state"] = s0.after_whites(whites)
    return traj


def states_along(s0: CounterState, whites: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(v, e_conn)`` of every distinct state visited along a path."""
    j = np.arange(len(whites) + 1, dtype=np.int64)
    return s0.v + j, s0.e_conn + 2 * j
