import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clusterattach import fit
from clusterattach.fit import FitError

N = np.arange(1, 10**6 + 2, 1000, dtype=np.float64)


@pytest.mark.parametrize("c1, c2, c3", [(5.0, 2.0, 0.5), (680.0, 3.1, 0.49), (1.0, 0.3, 1.2), (0.0, 10.0, 0.05)])
def test_recovers_exact_power_law(c1, c2, c3):
    y = c1 + c2 * N**c3
    r = fit.fit_power(N, y)
    assert abs(r.c3 - c3) < 1e-4
    assert abs(r.c2 - c2) < 1e-4 * max(1, c2)
    # the intercept is only determined relative to the scale of y
    assert abs(r.c1 - c1) < 1e-4 * np.abs(y).max()
    assert r.residual < 1e-12 * np.sum(y**2)


def test_fixed_mode_pins_intercept():
    y = 1 + 2.8 * N**0.5
    r = fit.fit_power(N, y, c1_mode="fixed", delta1=1)
    assert r.c1 == 1 and abs(r.c3 - 0.5) < 1e-5 and abs(r.c2 - 2.8) < 1e-4
    with pytest.raises(ValueError):
        fit.fit_power(N, y, c1_mode="fixed")
    with pytest.raises(ValueError):
        fit.fit_power(N, y, c1_mode="both")


def test_window_selects_points():
    y = 3 + N**0.6
    r = fit.fit_power(N, y, window=(2e5, 1e6))
    assert r.n_points == np.count_nonzero((N >= 2e5) & (N <= 1e6))
    assert r.window == (2e5, 1e6)
    assert abs(r.c3 - 0.6) < 1e-4


def test_rejects_degenerate_input():
    with pytest.raises(FitError):
        fit.fit_power([1, 2, 3], [4, 4, 4])
    with pytest.raises(FitError):
        fit.fit_power([1, 2], [1, 2])
    with pytest.raises(FitError):
        fit.fit_power(N, N, window=(5e7, 6e7))
    with pytest.raises(FitError):
        fit.fit_power([0, 1, 2], [1, 2, 3])


def test_bound_flag():
    # linear growth with c3 capped below 1 pins the search to the upper bound
    r = fit.fit_power(N, 2 * N, c3_bounds=(0.01, 0.8))
    assert r.at_bound and abs(r.c3 - 0.8) < 1e-5
    assert not fit.fit_power(N, 2 * N**0.5).at_bound


def test_noisy_fit_is_local_optimum():
    rng = np.random.default_rng(0)
    y = 1 + 2.8 * N**0.5 + rng.normal(0, 5, size=N.size)
    r = fit.fit_power(N, y)
    h = (1.5 - 0.01) / 150
    base = fit.profile_residual(N, y, r.c3)
    assert base == pytest.approx(r.residual, rel=1e-9)
    for c3 in (r.c3 - h, r.c3 + h, r.c3 - 1e-3, r.c3 + 1e-3):
        assert fit.profile_residual(N, y, c3) >= base


@given(st.floats(0.1, 100), st.floats(-50, 50), st.floats(0.2, 1.0), st.floats(0.5, 5))
@settings(max_examples=30, deadline=None)
def test_affine_equivariance_in_y(scale, shift, c3, c2):
    y = 2 + c2 * N**c3
    a = fit.fit_power(N, y)
    b = fit.fit_power(N, scale * y + shift)
    assert abs(a.c3 - b.c3) < 1e-4
    assert b.c2 == pytest.approx(scale * a.c2, rel=1e-3)


def test_golden_section_on_parabola():
    x = fit.golden_section(lambda t: (t - 0.3) ** 2, 0.0, 1.0, 1e-8)
    assert abs(x - 0.3) < 1e-7


def test_csv_row_and_text():
    r = fit.fit_power(N, 1 + 2 * N**0.5)
    row = r.csv_row("K3").strip().split(",")
    assert len(row) == len(fit.CSV_HEADER.strip().split(","))
    assert row[0] == "K3" and float(row[6]) == r.c3
    assert "c3=0.5" in r.text()
