import math

import numpy as np
import pytest

from qpfmaps.core.errors import EscapeFlagError, OrderingError
from qpfmaps.core.graphs import (
    BACKWARD,
    FORWARD,
    GraphSample,
    circle_grid,
    escapes,
    finite_time_exponents,
    invariance_residual,
    lyapunov,
    pinching,
    pullback_attractor,
    pushforward_repeller,
)
from tests import utils


@pytest.fixture
def fam():
    return utils.figure_family()


@pytest.fixture
def strip():
    return utils.figure_strip()


def fixed_point(alpha=100, x=math.pi / 2):
    for _ in range(100):
        x = math.atan(alpha * x)
    return x


def test_circle_grid():
    grid = circle_grid(8)
    assert grid.tolist() == [i / 8 for i in range(8)]


def test_unforced_graphs(fam, strip):
    attractor = pullback_attractor(fam, 0.0, N=200, G=64, strip=strip)
    repeller = pushforward_repeller(fam, 0.0, N=200, G=64, strip=strip)

    assert attractor.direction == FORWARD
    assert repeller.direction == BACKWARD
    assert attractor.values == pytest.approx(np.full(64, fixed_point()))
    assert repeller.values == pytest.approx(np.zeros(64))

    assert lyapunov(fam, 0.0, repeller) == pytest.approx(math.log(100))
    x = fixed_point()
    assert lyapunov(fam, 0.0, attractor) == pytest.approx(math.log(100 / (1 + (100 * x) ** 2)))
    assert attractor.lyapunov < 0 < repeller.lyapunov


@pytest.mark.parametrize("beta", [0.3, 0.6, 0.75])
def test_pullback_decreases_with_N(fam, strip, beta):
    short = pullback_attractor(fam, beta, N=10, G=256, strip=strip)
    long = pullback_attractor(fam, beta, N=40, G=256, strip=strip)
    assert np.all(long.values <= short.values + 1e-12)


@pytest.mark.parametrize("beta", [0.3, 0.6, 0.75])
def test_pushforward_increases_with_N(fam, strip, beta):
    short = pushforward_repeller(fam, beta, N=10, G=256, strip=strip)
    long = pushforward_repeller(fam, beta, N=40, G=256, strip=strip)
    assert np.all(long.values >= short.values - 1e-12)


def test_escape_above_beta_plus(fam, strip):
    # beta_+(0) is about 0.7822
    graph = pullback_attractor(fam, 0.9, N=100, G=128, strip=strip)
    assert graph.is_absent
    assert np.all(np.isnan(graph.values[graph.escaped]))
    assert graph.summary()["escaped"] == int(graph.escaped.sum())

    assert escapes(fam, 0.9, 100, 128, strip)
    assert not escapes(fam, 0.5, 100, 128, strip)

    with pytest.raises(EscapeFlagError):
        lyapunov(fam, 0.9, graph)


def test_pinching(fam, strip):
    attractor = pullback_attractor(fam, 0.7, N=500, G=512, strip=strip)
    repeller = pushforward_repeller(fam, 0.7, N=500, G=512, strip=strip)
    stats = pinching(attractor, repeller)

    assert 0 <= stats.min_gap <= stats.mean_gap <= stats.max_gap
    assert 0 <= stats.argmin_theta < 1
    assert stats.to_dict()["min_gap"] == stats.min_gap


def test_gap_shrinks_with_beta(fam, strip):
    gaps = []
    for beta in (0.2, 0.5, 0.7):
        attractor = pullback_attractor(fam, beta, N=300, G=256, strip=strip)
        repeller = pushforward_repeller(fam, beta, N=300, G=256, strip=strip)
        gaps.append(pinching(attractor, repeller).min_gap)
    assert gaps == sorted(gaps, reverse=True)


def test_pinching_ordering_error():
    thetas = circle_grid(4)
    attractor = GraphSample(thetas, np.array([1.0, 1.0, 0.2, 1.0]), FORWARD, 10, 0.5)
    repeller = GraphSample(thetas, np.array([0.0, 0.0, 0.3, 0.0]), BACKWARD, 10, 0.5)
    with pytest.raises(OrderingError):
        pinching(attractor, repeller)


def test_pinching_needs_common_grid():
    a = GraphSample(circle_grid(4), np.ones(4), FORWARD, 10, 0.5)
    b = GraphSample(circle_grid(8), np.zeros(8), BACKWARD, 10, 0.5)
    with pytest.raises(ValueError):
        pinching(a, b)


def test_pinching_absent_graph():
    thetas = circle_grid(4)
    a = GraphSample(thetas, np.ones(4), FORWARD, 10, 0.5)
    b = GraphSample(thetas, np.zeros(4), BACKWARD, 10, 0.5, escaped=np.array([False, True, False, False]))
    with pytest.raises(EscapeFlagError):
        pinching(a, b)


@pytest.mark.parametrize("N,G", [(-1, 16), (10, 1)])
def test_invalid_sizes(fam, N, G):
    with pytest.raises(ValueError):
        pullback_attractor(fam, 0.5, N=N, G=G)
    with pytest.raises(ValueError):
        pushforward_repeller(fam, 0.5, N=N, G=G)


def test_threads_give_the_same_graph(fam, strip):
    single = pullback_attractor(fam, 0.7, N=200, G=300, strip=strip)
    threaded = pullback_attractor(fam, 0.7, N=200, G=300, strip=strip, n_jobs=3)
    assert threaded.values == pytest.approx(single.values, rel=1e-14, abs=1e-14)

    single = pushforward_repeller(fam, 0.7, N=200, G=300, strip=strip)
    threaded = pushforward_repeller(fam, 0.7, N=200, G=300, strip=strip, n_jobs=3)
    assert threaded.values == pytest.approx(single.values, rel=1e-14, abs=1e-14)


def test_invariance_residual(fam, strip):
    attractor = pullback_attractor(fam, 0.5, N=300, G=4096, strip=strip)
    assert invariance_residual(fam, 0.5, attractor) < 1e-4


def test_finite_time_exponents(fam):
    # x = 0 is a fixed point of the unforced map with slope alpha
    forward, backward = finite_time_exponents(fam, 0.0, 0.3, 0.0, 5)
    assert forward == pytest.approx(math.log(100))
    assert backward == pytest.approx(-math.log(100))

    with pytest.raises(ValueError):
        finite_time_exponents(fam, 0.0, 0.3, 0.0, 0)


def test_summary(fam, strip):
    graph = pullback_attractor(fam, 0.5, N=50, G=32, strip=strip)
    summary = graph.summary()
    assert summary["direction"] == FORWARD
    assert summary["G"] == 32
    assert summary["iterations"] == 50
    assert summary["escaped"] == 0
    assert summary["min"] <= summary["max"]
    assert summary["lyapunov"] is None
