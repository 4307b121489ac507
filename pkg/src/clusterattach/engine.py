"""General clustering attachment (CA) evolution on a full graph.

At each step every existing node gets weight ``f(c_i) + epsilon`` where
``c_i`` is its clustering coefficient; ``m`` distinct nodes are drawn by
successive sampling (sequential draws without replacement, renormalising
after each draw) and a new node is connected to all of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .trajectory import Trajectory, checkpoints


class ModelError(ValueError):
    """The graph/parameter combination admits no valid attachment step."""


@dataclass(frozen=True)
class AttachmentFunction:
    """``power`` is ``x**alpha``; ``indicator`` is ``1{x > 0}``."""

    kind: str = "indicator"
    alpha: float | None = None

    def __post_init__(self):
        if self.kind == "power":
            if self.alpha is None or not self.alpha > 0:
                raise ValueError("power attachment needs alpha > 0")
        elif self.kind == "indicator":
            if self.alpha is not None:
                raise ValueError("indicator attachment takes no alpha")
        else:
            raise ValueError(f"unknown attachment function {self.kind!r}")

    @classmethod
    def power(cls, alpha: float) -> "AttachmentFunction":
        return cls("power", float(alpha))

    @classmethod
    def indicator(cls) -> "AttachmentFunction":
        return cls("indicator")

    def __call__(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        if self.kind == "indicator":
            return 1.0
        return float(x) ** self.alpha

    def of_node(self, degree: int, triangles: int) -> float:
        # integer predicate: a node with no triangle has c == 0 exactly
        if triangles == 0:
            return 0.0
        if self.kind == "indicator":
            return 1.0
        return (2.0 * triangles / (degree * (degree - 1))) ** self.alpha


@dataclass(frozen=True)
class CAParams:
    m: int = 2
    epsilon: float = 0.0
    f: AttachmentFunction = field(default_factory=AttachmentFunction.indicator)

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("m must be >= 2")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")

    @property
    def is_limit(self) -> bool:
        """True for the epsilon=0, m=2, indicator limit model."""
        return self.m == 2 and self.epsilon == 0 and self.f.kind == "indicator"


LIMIT = CAParams()


@dataclass
class ValidationReport:
    ok: bool
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_initial(g: Graph, p: CAParams) -> ValidationReport:
    if p.epsilon > 0:
        if g.n_nodes < p.m:
            return ValidationReport(
                False, f"epsilon > 0 needs at least m={p.m} nodes, initial graph has {g.n_nodes}"
            )
        return ValidationReport(True)
    if g.active_count < p.m:
        return ValidationReport(
            False,
            f"epsilon = 0 needs at least m={p.m} nodes with positive attachment weight "
            f"(nodes in a triangle), initial graph has {g.active_count}",
        )
    return ValidationReport(True)


def _raw_weights(g: Graph, p: CAParams) -> np.ndarray:
    f = p.f
    eps = p.epsilon
    return np.fromiter(
        (f.of_node(d, t) + eps for d, t in zip(g.degree, g.triangles)),
        dtype=np.float64,
        count=g.n_nodes,
    )


def node_weights(g: Graph, p: CAParams) -> np.ndarray:
    """Attachment probabilities of all nodes of ``g``."""
    w = _raw_weights(g, p)
    total = w.sum()
    if not total > 0:
        raise ModelError("all attachment weights are zero: no node lies in a triangle and epsilon = 0")
    return w / total


def _draw(cum: np.ndarray, w: np.ndarray, m: int, rng: np.random.Generator) -> list[int]:
    """Successive sampling of ``m`` indices from unnormalised weights ``w``.

    ``cum`` is ``np.cumsum(w)``.  Each draw picks a point uniformly in the
    mass left after removing earlier picks and maps it back onto ``cum``.
    """
    n = len(w)
    chosen: list[int] = []
    remaining = float(cum[-1])
    for _ in range(m):
        if not remaining > 0:
            raise ModelError(f"fewer than m={m} nodes have positive weight")
        u = rng.random() * remaining
        for r in sorted(chosen):
            if u >= cum[r] - w[r]:
                u += w[r]
            else:
                break
        idx = int(np.searchsorted(cum, u, side="right"))
        if idx >= n or w[idx] <= 0 or idx in chosen:
            # rounding at the top of the range
            idx = next(k for k in range(n - 1, -1, -1) if w[k] > 0 and k not in chosen)
        chosen.append(idx)
        remaining -= float(w[idx])
    return chosen


def successive_sample(weights, m: int, rng: np.random.Generator) -> list[int]:
    """Draw ``m`` distinct indices, in draw order."""
    w = np.asarray(weights, dtype=np.float64)
    if np.count_nonzero(w > 0) < m:
        raise ModelError(f"fewer than m={m} nodes have positive weight")
    return _draw(np.cumsum(w), w, m, rng)


@dataclass
class StepRecord:
    new_node: int
    sampled: list[int]
    new_triangles: int


class Evolver:
    """Evolves a graph in place, caching per-node weights between steps."""

    def __init__(self, g: Graph, p: CAParams, capacity: int | None = None):
        report = validate_initial(g, p)
        if not report:
            raise ModelError(report.message)
        self.graph = g
        self.params = p
        cap = max(capacity or 0, 2 * g.n_nodes, 16)
        self._w = np.zeros(cap, dtype=np.float64)
        self._w[: g.n_nodes] = _raw_weights(g, p)
        g.dirty.clear()

    def _refresh(self) -> None:
        g = self.graph
        n = g.n_nodes
        if n > len(self._w):
            grown = np.zeros(max(2 * len(self._w), n), dtype=np.float64)
            grown[: len(self._w)] = self._w
            self._w = grown
        f, eps, w = self.params.f, self.params.epsilon, self._w
        deg, tri = g.degree, g.triangles
        for i in g.dirty:
            w[i] = f.of_node(deg[i], tri[i]) + eps
        g.dirty.clear()

    def weights(self) -> np.ndarray:
        w = self._w[: self.graph.n_nodes]
        return w / w.sum()

    def step(self, rng: np.random.Generator) -> StepRecord:
        g = self.graph
        w = self._w[: g.n_nodes]
        sampled = _draw(np.cumsum(w), w, self.params.m, rng)
        new = g.add_node()
        closed = 0
        for i in sampled:
            closed += g.add_edge(new, i)
        self._refresh()
        return StepRecord(new, sampled, closed)


def evolve_step(g: Graph, p: CAParams, rng: np.random.Generator) -> StepRecord:
    """One CA step on ``g`` (mutated in place)."""
    return Evolver(g, p).step(rng)


def run(
    g0: Graph,
    p: CAParams,
    n_steps: int,
    rng: np.random.Generator,
    thinning: int = 1,
    record_active: bool = False,
    on_step=None,
    copy: bool = True,
) -> Trajectory:
    """Evolve ``n_steps`` steps and record the total triangle count.

    ``on_step(t, graph)`` is called after every step (``t`` counts from 1).
    The initial graph is copied unless ``copy=False``.
    """
    g = g0.copy() if copy else g0
    ev = Evolver(g, p, capacity=g.n_nodes + n_steps)
    ts = checkpoints(n_steps, thinning)
    delta = np.empty(len(ts), dtype=np.int64)
    active = np.empty(len(ts), dtype=np.int64) if record_active else None
    k = 0
    for t in range(n_steps + 1):
        if t:
            ev.step(rng)
            if on_step is not None:
                on_step(t, g)
        if t == ts[k]:
            delta[k] = g.total_triangles()
            if active is not None:
                active[k] = g.active_count
            k += 1
    return Trajectory(ts + 1, delta, thinning=thinning, active=active, extra={"graph": g})
