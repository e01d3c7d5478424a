import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transport_bregman import density as dens
from transport_bregman.errors import DegenerateQuantileError
from transport_bregman.quadrature import DEFAULT_CONFIG, rule


def test_gaussian_quantiles():
    g = dens.gaussian1d(0.0, 1.0)
    assert g.quantile(0.5) == 0.0
    assert g.quantile(0.975) == pytest.approx(1.959964, abs=1e-5)
    assert g.quantile_derivative(0.5) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-12)


def test_gaussian_upper_tail_is_exact():
    g = dens.gaussian1d(1.0, 4.0)
    nodes = rule(DEFAULT_CONFIG)
    q, dq = g.evaluate(nodes)
    assert np.all(np.isfinite(q)) and np.all(np.isfinite(dq))
    # symmetric rule, symmetric density
    np.testing.assert_allclose(q + q[::-1], 2.0, rtol=0, atol=1e-9)
    np.testing.assert_allclose(dq, dq[::-1], rtol=1e-12)


def test_uniform():
    assert dens.uniform1d(0, 1).quantile(0.37) == pytest.approx(0.37)
    assert dens.uniform1d(0, 2).quantile_derivative(0.3) == 2.0
    assert dens.uniform1d(-1, 1).quantile(0.5) == 0.0
    with pytest.raises(ValueError):
        dens.uniform1d(1, 1)
    with pytest.raises(ValueError):
        dens.gaussian1d(0, 0)


def test_grid_quantiles():
    x = np.linspace(0, 1, 101)
    u = dens.from_grid(dens.GridDensity(x, np.ones_like(x)))
    assert u.quantile(0.25) == pytest.approx(0.25, abs=1e-3)
    g = dens.GridDensity.tabulate(dens.gaussian1d(0, 1), -8, 8, 4001)
    assert dens.from_grid(g).quantile(0.975) == pytest.approx(1.95996, abs=1e-3)


def test_grid_autonormalises():
    x = np.linspace(-8, 8, 801)
    pdf = np.exp(-x * x / 2)
    a = dens.from_grid(dens.GridDensity(x, pdf))
    b = dens.from_grid(dens.GridDensity(x, 3 * pdf))
    u = np.linspace(0.01, 0.99, 50)
    np.testing.assert_allclose(a.quantile(u), b.quantile(u), rtol=0, atol=1e-12)
    table = dens.GridDensity(x, 3 * pdf)
    mass = np.sum(np.diff(x) * (table.pdf[1:] + table.pdf[:-1]) / 2)
    assert mass == pytest.approx(1.0, abs=1e-12)


def test_grid_cdf_inverts_quantile(std_normal_grid):
    q = dens.from_grid(std_normal_grid)
    u = np.linspace(1e-4, 1 - 1e-4, 1001)
    np.testing.assert_allclose(std_normal_grid.cdf(q.quantile(u)), u, atol=1e-12)


def test_grid_round_trip(std_normal_grid):
    u = np.linspace(0.01, 0.99, 99)
    diff = dens.from_grid(std_normal_grid).quantile(u) - dens.gaussian1d(0, 1).quantile(u)
    assert np.max(np.abs(diff)) < 2e-3


def test_grid_plateau_is_degenerate():
    x = np.linspace(0, 3, 301)
    pdf = np.where((x > 1) & (x < 2), 0.0, 1.0)
    q = dens.from_grid(dens.GridDensity(x, pdf))
    u_mid = float(dens.GridDensity(x, pdf).cdf(1.5))
    with pytest.raises(DegenerateQuantileError):
        q.quantile_derivative(u_mid)


@pytest.mark.parametrize(
    "x,pdf",
    [([0, 1], [1]), ([0, 0], [1, 1]), ([0, 1], [-1, 1]), ([0, 1], [0, 0]), ([0, np.nan], [1, 1])],
)
def test_grid_validation(x, pdf):
    with pytest.raises(ValueError):
        dens.GridDensity(np.array(x, float), np.array(pdf, float))


def test_grid_cumulative_increases_where_mass(std_normal_grid):
    # near 1 the cumulative table cannot resolve tiny cell masses, so the
    # upper half is checked on the survival side
    p, x = std_normal_grid.pdf, std_normal_grid.grid
    cell = np.diff(x) * (p[1:] + p[:-1]) / 2
    has_mass = cell > 0
    lower = std_normal_grid.cumulative[1:] < 0.5
    assert np.all(np.diff(std_normal_grid.cumulative)[has_mass & lower] > 0)
    survival = np.cumsum(cell[::-1])[::-1]
    assert np.all(cell[has_mass & ~lower] > 0)
    assert np.all(-np.diff(np.append(survival, 0.0))[has_mass & ~lower] > 0)


def test_samples():
    assert dens.from_samples([1, 2, 3]).quantile(0.5) == 2.0
    assert dens.from_samples([0, 1]).quantile(0.25) == 0.0
    big = dens.from_samples(np.random.default_rng(0).standard_normal(100_000))
    assert abs(big.quantile(0.5)) < 0.02
    with pytest.raises(ValueError):
        dens.from_samples([1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        dens.from_samples([1.0])


def test_samples_derivative_positive():
    s = dens.from_samples(np.random.default_rng(1).standard_normal(300))
    _, dq = s.evaluate(rule(DEFAULT_CONFIG))
    assert np.all(dq > 0)


def test_displacement_interpolation():
    p, q = dens.gaussian1d(0, 4), dens.gaussian1d(0, 1)
    mid = dens.displacement_interpolate(p, q, 0.5)
    u = np.linspace(0.01, 0.99, 33)
    np.testing.assert_allclose(mid.quantile(u), dens.gaussian1d(0, 2.25).quantile(u), rtol=1e-12, atol=1e-15)
    nodes = rule(DEFAULT_CONFIG)
    np.testing.assert_array_equal(dens.displacement_interpolate(p, q, 0.0).evaluate(nodes)[0], q.evaluate(nodes)[0])
    np.testing.assert_array_equal(dens.displacement_interpolate(p, q, 1.0).evaluate(nodes)[0], p.evaluate(nodes)[0])
    np.testing.assert_allclose(dens.displacement_interpolate(p, p, 0.3).quantile(u), p.quantile(u))
    for t in (-0.1, 1.5):
        with pytest.raises(ValueError):
            dens.displacement_interpolate(p, q, t)


def test_load_files(tmp_path):
    grid = tmp_path / "g.txt"
    grid.write_text("# x pdf\n0 1\n0.5 1\n1 1\n")
    table = dens.load_grid(grid)
    assert table.cdf(0.5) == pytest.approx(0.5)
    samples = tmp_path / "s.txt"
    samples.write_text("3\n1\n2\n")
    assert dens.from_samples(dens.load_samples(samples)).quantile(0.5) == 2.0


FAMILIES = [
    dens.gaussian1d(0.3, 2.0),
    dens.uniform1d(-1, 2),
    dens.from_grid(dens.GridDensity.tabulate(dens.gaussian1d(0, 1), -8, 8, 2001)),
    dens.from_samples(np.random.default_rng(3).exponential(size=200)),
    dens.displacement_interpolate(dens.gaussian1d(0, 4), dens.uniform1d(0, 1), 0.4),
]


@pytest.mark.parametrize("d", FAMILIES, ids=repr)
@settings(max_examples=30, deadline=None)
@given(u=st.lists(st.floats(1e-6, 1 - 1e-6), min_size=2, max_size=50))
def test_quantile_monotone(d, u):
    u = np.sort(np.array(u))
    assert np.all(np.diff(d.quantile(u)) >= 0)


@pytest.mark.parametrize("d", [FAMILIES[0], FAMILIES[1], FAMILIES[4]], ids=repr)
def test_derivative_consistency(d):
    u = np.linspace(0.01, 0.99, 199)
    h = 1e-6
    fd = (d.quantile(u + h) - d.quantile(u - h)) / (2 * h)
    np.testing.assert_allclose(fd, d.quantile_derivative(u), rtol=1e-4)
