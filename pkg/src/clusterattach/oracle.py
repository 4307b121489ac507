"""Exact probabilities for the limit model.

A black draw leaves the counter state unchanged, so after ``k`` draws the
state is determined by the number ``j`` of white draws.  The distribution of
``j`` evolves by a birth chain with white probability

    q(j) = (e_conn + 2 j) / binom(v + j, 2)

which gives P(B_n), E[Delta_n] and P(B_u and B_v) by dynamic programming.
For long sweeps the chain's support is trimmed to entries above 1e-300,
far below double-precision resolution of any reported quantity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numba
import numpy as np

from .urn import CounterState


def q_white(s0: CounterState, j):
    """White probability after ``j`` white draws, as float (array-friendly)."""
    v = s0.v + np.asarray(j, dtype=np.float64)
    return (s0.e_conn + 2.0 * np.asarray(j, dtype=np.float64)) / (v * (v - 1.0) / 2.0)


def q_white_exact(s0: CounterState, j: int) -> Fraction:
    v = s0.v + j
    return Fraction(s0.e_conn + 2 * j, v * (v - 1) // 2)


def _q_table(s0: CounterState, size: int) -> np.ndarray:
    return q_white(s0, np.arange(size + 1))


@dataclass
class WhiteCountDistribution:
    """Law of the white count after ``step`` draws.

    ``probs[i]`` is P(j = offset + i); entries outside the stored window are
    zero (or below the trim threshold).
    """

    step: int
    probs: np.ndarray
    offset: int = 0

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=np.float64)

    @classmethod
    def initial(cls) -> "WhiteCountDistribution":
        return cls(0, np.array([1.0]))

    def prob(self, j: int) -> float:
        i = j - self.offset
        if 0 <= i < len(self.probs):
            return float(self.probs[i])
        return 0.0

    def total(self) -> float:
        return math.fsum(self.probs)

    def dense(self) -> np.ndarray:
        """Probabilities for ``j = 0..step``."""
        out = np.zeros(self.step + 1)
        out[self.offset : self.offset + len(self.probs)] = self.probs
        return out

    def white_mass(self, s0: CounterState) -> float:
        j = np.arange(self.offset, self.offset + len(self.probs))
        return float(self.probs @ q_white(s0, j))


def advance(d: WhiteCountDistribution, s0: CounterState, trim: float = 0.0) -> WhiteCountDistribution:
    j = np.arange(d.offset, d.offset + len(d.probs))
    moved = d.probs * q_white(s0, j)
    new = np.zeros(len(d.probs) + 1)
    new[:-1] = d.probs - moved
    new[1:] += moved
    offset = d.offset
    if trim > 0:
        keep = np.flatnonzero(new > trim)
        new = new[keep[0] : keep[-1] + 1]
        offset += int(keep[0])
    return WhiteCountDistribution(d.step + 1, new, offset)


def distribution(s0: CounterState, k: int) -> WhiteCountDistribution:
    d = WhiteCountDistribution.initial()
    for _ in range(k):
        d = advance(d, s0)
    return d


@numba.njit(cache=True)
def _sweep(pi, lo, hi, q, n_steps, out_pb, out_cum, cum0):
    """Propagate a (sub-)probability vector for ``n_steps`` draws in place.

    ``pi[lo:hi+1]`` holds the live window.  ``out_pb[k]`` receives the white
    mass before draw ``k + 1``; ``out_cum[k]`` its compensated running sum
    starting from ``cum0``.
    """
    s = cum0
    comp = 0.0
    for k in range(n_steps):
        mass = 0.0
        for j in range(hi, lo - 1, -1):
            w = pi[j] * q[j]
            mass += w
            pi[j + 1] += w
            pi[j] -= w
        hi += 1
        out_pb[k] = mass
        y = mass - comp
        t = s + y
        comp = (t - s) - y
        s = t
        out_cum[k] = s
        while lo < hi and pi[lo] < 1e-300:
            pi[lo] = 0.0
            lo += 1
        while hi > lo and pi[hi] < 1e-300:
            pi[hi] = 0.0
            hi -= 1
    return lo, hi


def pb_curve(s0: CounterState, n_max: int) -> np.ndarray:
    """``P(B_n)`` for ``n = 1..n_max`` (index ``n - 1``)."""
    return _marginal_sweep(s0, n_max)[0]


def expected_delta_curve(s0: CounterState, n_max: int) -> np.ndarray:
    """``E[Delta_n]`` for ``n = 1..n_max`` (index ``n - 1``)."""
    _, cum = _marginal_sweep(s0, n_max - 1)
    return np.concatenate(([float(s0.delta1)], s0.delta1 + cum))


def _marginal_sweep(s0: CounterState, n_steps: int):
    n_steps = max(int(n_steps), 0)
    q = _q_table(s0, n_steps + 1)
    pi = np.zeros(n_steps + 2)
    pi[0] = 1.0
    pb = np.empty(n_steps)
    cum = np.empty(n_steps)
    _sweep(pi, 0, 0, q, n_steps, pb, cum, 0.0)
    return pb, cum


def marginal_pb(s0: CounterState, n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return float(pb_curve(s0, n)[-1])


def expected_delta(s0: CounterState, n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return float(expected_delta_curve(s0, n)[-1])


def joint_row(s0: CounterState, u: int, v_max: int) -> np.ndarray:
    """``P(B_u and B_v)`` for ``v = u+1..v_max`` (index ``v - u - 1``)."""
    if u < 1 or v_max <= u:
        return np.empty(0)
    q = _q_table(s0, v_max + 1)
    pi = np.zeros(v_max + 2)
    pi[0] = 1.0
    scratch = np.empty(max(u - 1, 1))
    lo, hi = _sweep(pi, 0, 0, q, u - 1, scratch, scratch.copy(), 0.0)
    # keep only paths that are white at step u, shifted to j + 1
    rho = np.zeros(v_max + 2)
    rho[lo + 1 : hi + 2] = pi[lo : hi + 1] * q[lo : hi + 1]
    n = v_max - u
    out = np.empty(n)
    _sweep(rho, lo + 1, hi + 1, q, n, out, np.empty(n), 0.0)
    return out


def joint_pb(s0: CounterState, u: int, v: int) -> float:
    if u == v:
        raise ValueError("need u != v")
    if u > v:
        u, v = v, u
    return float(joint_row(s0, u, v)[-1])


def joint_matrix(s0: CounterState, n_max: int) -> np.ndarray:
    """Upper-triangular ``J[u-1, v-1] = P(B_u and B_v)`` for ``u < v <= n_max``."""
    J = np.full((n_max, n_max), np.nan)
    for u in range(1, n_max):
        J[u - 1, u:] = joint_row(s0, u, n_max)
    return J


# --- exhaustive enumeration (exact rationals) -----------------------------

@dataclass
class PathEnumeration:
    marginals: list[Fraction]                           # P(B_n), n = 1..n_max
    joints: dict[tuple[int, int], Fraction]             # P(B_u and B_v), u < v
    delta_law: list[dict[int, Fraction]] = field(default_factory=list)  # law of Delta_n


def enumerate_paths(s0: CounterState, n_max: int) -> PathEnumeration:
    """Sum exact path probabilities over all white/black sequences of length ``n_max``."""
    marg = [Fraction(0)] * n_max
    joints: dict[tuple[int, int], Fraction] = {
        (u, v): Fraction(0) for u in range(1, n_max + 1) for v in range(u + 1, n_max + 1)
    }
    law: list[dict[int, Fraction]] = [dict() for _ in range(n_max + 1)]
    for path in product((True, False), repeat=n_max):
        prob = Fraction(1)
        e, v = s0.e_conn, s0.v
        for color in path:
            q = Fraction(e, v * (v - 1) // 2)
            prob *= q if color else 1 - q
            if prob == 0:
                break
            if color:
                e += 2
                v += 1
        if prob == 0:
            continue
        whites = [k + 1 for k, c in enumerate(path) if c]
        for k in whites:
            marg[k - 1] += prob
        for a in range(len(whites)):
            for b in range(a + 1, len(whites)):
                joints[(whites[a], whites[b])] += prob
        d = s0.delta1
        for k in range(n_max + 1):
            law[k][d] = law[k].get(d, Fraction(0)) + prob
            if k < n_max and path[k]:
                d += 1
    return PathEnumeration(marg, joints, law)


# --- inequality checks ------------------------------------------------------

@dataclass
class Check:
    name: str
    description: str
    passed: bool
    count: int
    worst_margin: float
    worst_at: tuple
    equalities: int = 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        eq = f", {self.equalities} tolerated equalities" if self.equalities else ""
        return (
            f"[{status}] {self.name}: {self.description}\n"
            f"    checked {self.count} cases{eq}; worst margin {self.worst_margin:.6g} at {self.worst_at}"
        )


@dataclass
class LemmaReport:
    initial: CounterState
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def text(self) -> str:
        s = self.initial
        head = (
            f"initial state: v={s.v} e_conn={s.e_conn} e_total={s.e_total} delta1={s.delta1}\n"
        )
        body = "\n".join(c.line() for c in self.checks)
        tail = f"\noverall: {'PASS' if self.passed else 'FAIL'}\n"
        return head + body + tail


def check_conditional_decreasing(s0: CounterState, j_max: int = 1000, d_max: int = 10**4) -> Check:
    """All-white conditional probability is positive and strictly decreasing.

    Integer-exact: for every state reachable with up to ``j_max`` whites
    (``v = v0 + j``, ``e = e0 + 2j``) and every horizon ``d < d_max``,

        (e + 2d) * den(d + 1) > (e + 2d + 2) * den(d),  den(d) = e_total + d v + d(d-1)/2.
    """
    d = np.arange(d_max + 1, dtype=np.int64)
    worst = math.inf
    worst_at: tuple = ()
    count = 0
    positive = True
    for j in range(j_max + 1):
        s = s0.after_whites(j)
        num = s.e_conn + 2 * d
        den = s.e_total + d * s.v + d * (d - 1) // 2
        positive &= bool(np.all(num > 0) and np.all(den > 0))
        lhs = num[:-1] * den[1:]
        rhs = num[1:] * den[:-1]
        diff = lhs - rhs
        count += len(diff)
        positive &= bool(np.all(diff > 0))
        rel = diff / lhs.astype(np.float64)
        i = int(np.argmin(rel))
        if rel[i] < worst:
            worst, worst_at = float(rel[i]), (f"whites={j}", f"n-k={i}")
    return Check(
        "conditional_decreasing",
        "p_n(G_k) > 0 and p_n(G_k) > p_{n+1}(G_k) (integer cross-multiplication)",
        positive,
        count,
        worst,
        worst_at,
    )


def check_marginal_exceeds_all_white(s0: CounterState, pb: np.ndarray) -> Check:
    """P(B_n) > P(B_n | B_1..B_{n-1} all white) for n >= 2.

    For a complete initial graph B_1 is certain, so n = 2 is an equality.
    """
    n = np.arange(2, len(pb) + 1, dtype=np.float64)
    d = n - 1
    p_all = (s0.e_conn + 2 * d) / (s0.e_total + d * s0.v + d * (d - 1) / 2)
    margin = pb[1:] - p_all
    rel = margin / p_all
    ok = bool(np.all(p_all > 0))
    equalities = 0
    if len(margin) and s0.e_conn == s0.e_total:
        ok &= abs(margin[0]) <= 1e-12
        equalities = 1
        rel = rel.copy()
        rel[0] = np.inf
    ok &= bool(np.all(rel > 0))
    i = int(np.argmin(rel)) if len(rel) else 0
    return Check(
        "marginal_exceeds_all_white",
        "P(B_n) > P(B_n | B_1 ... B_{n-1})",
        ok,
        len(margin),
        float(rel[i]) if len(rel) else math.inf,
        (f"n={i + 2}",),
        equalities,
    )


def check_negative_correlation(s0: CounterState, v_max: int = 200, pb: np.ndarray | None = None) -> Check:
    """P(B_u and B_v) <= P(B_u) P(B_v) for u < v <= v_max, strictly unless B_u is certain."""
    if pb is None or len(pb) < v_max:
        pb = pb_curve(s0, v_max)
    worst = math.inf
    worst_at: tuple = ()
    count = 0
    equalities = 0
    ok = True
    for u in range(1, v_max):
        row = joint_row(s0, u, v_max)
        prod = pb[u - 1] * pb[u:v_max]
        margin = prod - row
        count += len(margin)
        certain = u == 1 and s0.e_conn == s0.e_total
        if certain:
            # P(B_1) = 1, so the joint equals the product exactly
            ok &= bool(np.all(np.abs(margin) <= 1e-12 * prod + 1e-15))
            equalities += len(margin)
            continue
        ok &= bool(np.all(margin > 0))
        rel = margin / prod
        i = int(np.argmin(rel))
        if rel[i] < worst:
            worst, worst_at = float(rel[i]), (f"u={u}", f"v={u + 1 + i}")
    return Check(
        "negative_correlation",
        "P(B_u and B_v) <= P(B_u) P(B_v), u < v",
        ok,
        count,
        worst,
        worst_at,
        equalities,
    )


def check_log_lower_bound(s0: CounterState, ed: np.ndarray) -> Check:
    """E[Delta_n] - Delta_1 > e_conn / (3 e_total) * ln(n - 1) for n >= 2."""
    n = np.arange(2, len(ed) + 1, dtype=np.float64)
    bound = s0.e_conn / (3.0 * s0.e_total) * np.log(n - 1)
    margin = (ed[1:] - s0.delta1) - bound
    i = int(np.argmin(margin)) if len(margin) else 0
    return Check(
        "log_lower_bound",
        "E[Delta_n] - Delta_1 > e_conn/(3 e_total) ln(n-1)",
        bool(np.all(margin > 0)),
        len(margin),
        float(margin[i]) if len(margin) else math.inf,
        (f"n={i + 2}",),
    )


def check_pb_decreasing(pb: np.ndarray) -> Check:
    diff = pb[:-1] - pb[1:]
    i = int(np.argmin(diff)) if len(diff) else 0
    return Check(
        "pb_decreasing",
        "P(B_n) > P(B_{n+1})",
        bool(np.all(diff > 0)),
        len(diff),
        float(diff[i]) if len(diff) else math.inf,
        (f"n={i + 1}",),
    )


def verify_lemmas(
    s0: CounterState,
    n_max: int = 10**4,
    joint_max: int = 200,
    j_max: int = 1000,
    d_max: int = 10**4,
) -> LemmaReport:
    if joint_max > 1000:
        raise ValueError("joint sweep is quadratic; keep joint_max <= 1000")
    pb, cum = _marginal_sweep(s0, max(n_max, joint_max))
    ed = s0.delta1 + np.concatenate(([0.0], cum[: n_max - 1]))
    checks = [
        check_conditional_decreasing(s0, j_max, d_max),
        check_marginal_exceeds_all_white(s0, pb[:n_max]),
        check_negative_correlation(s0, joint_max, pb),
        check_log_lower_bound(s0, ed),
        check_pb_decreasing(pb[:n_max]),
    ]
    return LemmaReport(s0, checks)

