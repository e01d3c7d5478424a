import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transport_bregman import gaussian as g
from transport_bregman.oracle import random_spd

G = g.GaussianDensity
D91 = G(None, np.diag([9.0, 1.0]))
D14 = G(None, np.diag([1.0, 4.0]))


def test_sqrtm():
    np.testing.assert_allclose(g.sqrtm_spd(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(g.sqrtm_spd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    r3 = math.sqrt(3)
    s = g.sqrtm_spd([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(s, [[(r3 + 1) / 2, (r3 - 1) / 2], [(r3 - 1) / 2, (r3 + 1) / 2]], rtol=1e-12)
    with pytest.raises(np.linalg.LinAlgError):
        g.sqrtm_spd([[1.0, 2.0], [2.0, 1.0]])


def test_density_validation():
    with pytest.raises(ValueError):
        G([0, 0, 0], np.eye(2))
    with pytest.raises(ValueError):
        G(None, np.diag([1.0, 1e-12]))
    with pytest.raises(ValueError):
        G(None, np.ones((2, 3)))
    asym = G(None, [[2.0, 1.0], [0.0, 2.0]])
    np.testing.assert_array_equal(asym.covariance, asym.covariance.T)


def test_ot_map():
    T = g.ot_map_gaussian(D91, D14)
    np.testing.assert_allclose(T.matrix, np.diag([3.0, 0.5]), atol=1e-12)
    same = g.ot_map_gaussian(D91, D91)
    np.testing.assert_allclose(same.matrix, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(same.shift, 0.0)
    scalar = g.ot_map_gaussian(G.scalar(4.0, 1.0), G.scalar(1.0, 0.0))
    assert scalar.matrix[0, 0] == pytest.approx(2.0)
    np.testing.assert_allclose(scalar(np.array([[0.0], [1.0]])).ravel(), [1.0, 3.0])
    with pytest.raises(ValueError):
        g.ot_map_gaussian(D91, G.scalar(1.0))


def test_transport_kl_values():
    assert g.transport_kl_gaussian(D91, D91) == pytest.approx(0, abs=1e-14)
    assert g.transport_kl_gaussian(G.scalar(4.0), G.scalar(1.0)) == pytest.approx(1 - math.log(2), abs=1e-14)
    expected = 0.5 * math.log(4 / 9) + 3.5 - 2
    assert expected == pytest.approx(1.094535, abs=1e-6)
    assert g.transport_kl_gaussian(D91, D14) == pytest.approx(expected, abs=1e-12)


def test_midpoint_covariance():
    np.testing.assert_allclose(g.midpoint_covariance(D91, D91), D91.covariance, atol=1e-12)
    np.testing.assert_allclose(g.midpoint_covariance(D91, D14), np.diag([4.0, 2.25]), atol=1e-12)
    assert g.midpoint_covariance(G.scalar(4.0), G.scalar(1.0))[0, 0] == pytest.approx(2.25)


def test_midpoint_commuting_square_root(rng):
    Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    X = G(None, (Q * [1.0, 4.0, 0.3]) @ Q.T)
    Y = G(None, (Q * [2.0, 0.5, 7.0]) @ Q.T)
    assert g.commute(X.covariance, Y.covariance)
    half = 0.5 * (g.sqrtm_spd(X.covariance) + g.sqrtm_spd(Y.covariance))
    np.testing.assert_allclose(g.sqrtm_spd(g.midpoint_covariance(X, Y)), half, atol=1e-10)


def test_transport_js_values():
    assert g.transport_js_gaussian(D91, D91) == pytest.approx(0, abs=1e-14)
    assert g.transport_js_gaussian(G.scalar(4.0), G.scalar(1.0)) == pytest.approx(0.5 * math.log(9 / 8), abs=1e-12)
    assert g.transport_js_gaussian(D91, D14) == pytest.approx(g.transport_js_gaussian(D14, D91), abs=1e-12)


def test_classical_kl_and_w2():
    assert g.classical_kl_gaussian(D91, D91) == pytest.approx(0, abs=1e-14)
    assert g.classical_kl_gaussian(G.scalar(4.0), G.scalar(1.0)) == pytest.approx(1.5 - math.log(2), abs=1e-14)
    per_axis = g.classical_kl_gaussian(G.scalar(9.0), G.scalar(1.0)) + g.classical_kl_gaussian(G.scalar(1.0), G.scalar(4.0))
    assert g.classical_kl_gaussian(D91, D14) == pytest.approx(per_axis, abs=1e-12)
    assert g.wasserstein2_gaussian(D91, D91) == 0.0
    assert g.wasserstein2_gaussian(G.scalar(4.0), G.scalar(1.0)) == pytest.approx(1.0, abs=1e-12)
    assert g.wasserstein2_gaussian(D91, D14) == pytest.approx(5.0, abs=1e-12)
    assert g.wasserstein2_gaussian(G([1.0, 2.0], np.eye(2)), G(None, np.eye(2))) == pytest.approx(5.0)


def test_classical_kl_mean_term():
    X, Y = G.scalar(1.0, 2.0), G.scalar(1.0, 0.0)
    assert g.classical_kl_gaussian(X, Y) == pytest.approx(2.0)
    assert g.transport_kl_gaussian(X, Y) == pytest.approx(0.0, abs=1e-15)


seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 5)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, d=dims)
def test_random_pairs(seed, d):
    rng = np.random.default_rng(seed)
    X = G(rng.standard_normal(d), random_spd(rng, d))
    Y = G(rng.standard_normal(d), random_spd(rng, d))
    tkl = g.transport_kl_gaussian(X, Y)
    assert tkl >= -1e-10
    assert g.transport_js_gaussian(X, Y) >= -1e-10
    assert g.wasserstein2_gaussian(X, Y) == pytest.approx(g.wasserstein2_gaussian(Y, X), rel=1e-9, abs=1e-12)
    assert g.ot_map_gaussian(X, Y).pushforward_error(Y.covariance, X.covariance) < 1e-8
    T = g.ot_map_gaussian(X, Y).matrix
    np.testing.assert_allclose(T, T.T, atol=1e-12)
    assert np.linalg.eigvalsh(T)[0] > 0
    assert g.transport_js_formula(X, Y) == pytest.approx(g.transport_js_gaussian(X, Y), abs=1e-10)
    moved = G(X.mean + 3.0, X.covariance)
    assert g.transport_kl_gaussian(moved, Y) == pytest.approx(tkl, abs=1e-12)


def test_quarter_power_transcription(rng):
    for _ in range(20):
        X = G(None, random_spd(rng, 3))
        Y = G(None, random_spd(rng, 3))
        a = g.transport_js_formula(X, Y)
        b = g.transport_js_formula(X, Y, quarter_power=True)
        assert abs(a - b) < 1e-12


def test_commuting_fast_paths(rng):
    Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    X = G(None, (Q * [0.2, 1.0, 3.0, 9.0]) @ Q.T)
    Y = G(None, (Q * [5.0, 0.4, 1.0, 2.0]) @ Q.T)
    assert abs(g.transport_kl_gaussian(X, Y) - g.transport_kl_commuting(X, Y)) < 1e-10
    assert abs(g.transport_js_gaussian(X, Y) - g.transport_js_commuting(X, Y)) < 1e-10
