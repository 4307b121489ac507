"""Least-squares fit of ``y ~ c1 + c2 * n**c3``.

The exponent is found by a one-dimensional search; for each trial ``c3`` the
best ``(c1, c2)`` (or ``c2`` alone, with ``c1`` fixed) is a linear least
squares problem solved in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INVPHI = (math.sqrt(5) - 1) / 2


class FitError(ValueError):
    pass


@dataclass
class FitResult:
    c1: float
    c2: float
    c3: float
    residual: float
    window: tuple[float, float]
    c1_mode: str
    n_points: int
    at_bound: bool = False

    def predict(self, n) -> np.ndarray:
        return self.c1 + self.c2 * np.asarray(n, dtype=np.float64) ** self.c3

    def text(self) -> str:
        flag = "  (exponent search hit a bound)" if self.at_bound else ""
        return (
            f"c1_mode={self.c1_mode} window=[{self.window[0]:g}, {self.window[1]:g}] points={self.n_points}\n"
            f"c1={self.c1:.6g} c2={self.c2:.6g} c3={self.c3:.6f} residual={self.residual:.6g}{flag}\n"
        )

    def csv_row(self, label: str = "") -> str:
        return (
            f"{label},{self.c1_mode},{self.window[0]:g},{self.window[1]:g},"
            f"{self.c1!r},{self.c2!r},{self.c3!r},{self.residual!r}\n"
        )


CSV_HEADER = "label,c1_mode,n_min,n_max,c1,c2,c3,residual\n"


def _linear(x: np.ndarray, y: np.ndarray, c1_fixed: float | None):
    if c1_fixed is None:
        xm, ym = x.mean(), y.mean()
        dx = x - xm
        sxx = dx @ dx
        c2 = (dx @ (y - ym)) / sxx if sxx > 0 else 0.0
        c1 = ym - c2 * xm
    else:
        c1 = c1_fixed
        c2 = (x @ (y - c1)) / (x @ x)
    r = y - c1 - c2 * x
    return float(c1), float(c2), float(r @ r)


def profile_residual(n, y, c3: float, c1_fixed: float | None = None) -> float:
    """Sum of squared errors at exponent ``c3`` with the linear part optimal."""
    n = np.asarray(n, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return _linear(n**c3, y, c1_fixed)[2]


def golden_section(func, lo: float, hi: float, tol: float = 1e-6) -> float:
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = func(c), func(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = func(d)
    return (a + b) / 2


def fit_power(
    n,
    y,
    window: tuple[float, float] | None = None,
    c1_mode: str = "free",
    delta1: float | None = None,
    c3_bounds: tuple[float, float] = (0.01, 1.5),
    tol: float = 1e-6,
    grid: int = 150,
) -> FitResult:
    """Fit ``c1 + c2 n^c3`` to the samples with ``n`` inside ``window``.

    ``c1_mode="fixed"`` pins ``c1`` to ``delta1`` (the initial triangle
    count).  A coarse grid over ``c3_bounds`` brackets the minimum, which is
    then refined by golden-section search to ``tol``.
    """
    n = np.asarray(n, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if window is not None:
        keep = (n >= window[0]) & (n <= window[1])
        n, y = n[keep], y[keep]
    if len(n) < 3:
        raise FitError(f"need at least 3 samples in the window, got {len(n)}")
    if np.any(n < 1):
        raise FitError("all n must be >= 1")
    if np.ptp(y) == 0:
        raise FitError("degenerate window: y is constant")
    if c1_mode == "free":
        c1_fixed = None
    elif c1_mode == "fixed":
        if delta1 is None:
            raise ValueError("c1_mode='fixed' needs delta1")
        c1_fixed = float(delta1)
    else:
        raise ValueError(f"unknown c1_mode {c1_mode!r}")

    # rescale n so n**c3 stays O(1); c2 is mapped back at the end
    scale = float(n.max())
    u = n / scale
    lo, hi = c3_bounds

    def sse(c3: float) -> float:
        return _linear(u**c3, y, c1_fixed)[2]

    xs = np.linspace(lo, hi, grid + 1)
    vals = np.array([sse(x) for x in xs])
    k = int(np.argmin(vals))
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, grid)]
    c3 = golden_section(sse, a, b, tol)
    if vals[k] < sse(c3):
        c3 = float(xs[k])
    c1, c2u, res = _linear(u**c3, y, c1_fixed)
    at_bound = c3 - lo < 10 * tol or hi - c3 < 10 * tol
    return FitResult(
        c1=c1,
        c2=float(c2u / scale**c3),
        c3=float(c3),
        residual=res,
        window=(float(n.min()), float(n.max())) if window is None else (float(window[0]), float(window[1])),
        c1_mode=c1_mode,
        n_points=len(n),
        at_bound=bool(at_bound),
    )
