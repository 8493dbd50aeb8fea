# Standard imports
import math

import numpy as np
import pytest

# Custom imports
from qpfmaps.core.errors import NoPreimageError, OrbitEscapeError
from qpfmaps.core.family import (
    ArctanIntro,
    ArctanQuarterPi,
    Custom,
    HqDrive,
    Jet2,
    compose_jets,
    jet_backward,
    jet_forward,
    propagate,
)

AFFINE = {
    "f": "a*x + b*cos(2*pi*theta) - beta",
    "fx": "a",
    "ftheta": "-2*pi*b*sin(2*pi*theta)",
    "fbeta": "-1",
    "fxx": "0",
    "fthetatheta": "-4*pi^2*b*cos(2*pi*theta)",
    "fthetax": "0",
    "a": 0.5,
    "b": 0.1,
}

# Random strip points per family in the finite-difference checks
SAMPLE_POINTS = 1000


def orbit_end(fam, beta, theta0, x0, n):
    x = x0
    for k in range(n):
        x = fam.eval(beta, np.mod(theta0 + k * fam.omega, 1.0), x)
    return x


def test_identity_jet():
    jet = propagate(ArctanIntro(100), 0.5, 0.0, 0.3, 0)
    assert jet.x == 0.3
    assert jet.dx == 1.0
    assert jet.dtheta == 0.0 and jet.dtheta2 == 0.0 and jet.dbeta == 0.0


def test_affine_jets():
    fam = Custom(2, extra=AFFINE)
    jets = jet_forward(fam, 0.2, 0.1, 0.3, 6)
    assert len(jets) == 6
    for k, jet in enumerate(jets, 1):
        assert jet.dx == pytest.approx(0.5 ** k)
        assert jet.dxx == pytest.approx(0.0)
    backward = jet_backward(fam, 0.2, 0.1, 0.3, 4)
    assert backward[-1].dx == pytest.approx(2.0 ** 4)


def test_affine_dtheta2_without_forcing():
    extra = dict(AFFINE, b=0.0)
    jet = propagate(Custom(2, extra=extra), 0.2, 0.1, 0.3, 5)
    assert jet.dtheta2 == pytest.approx(0.0)
    assert jet.dtheta == pytest.approx(0.0)


@pytest.mark.parametrize("n", [1, 4, 8])
@pytest.mark.parametrize(
    "fam", [ArctanIntro(100), ArctanQuarterPi(100), HqDrive(100, extra={"q": 3})], ids=lambda f: f.kind
)
def test_forward_jets_against_finite_differences(fam, n):
    rng = np.random.default_rng(n)
    beta = rng.uniform(0.1, 0.7, SAMPLE_POINTS)
    theta = rng.uniform(0.0, 1.0, SAMPLE_POINTS)
    x = rng.uniform(0.5, 1.5, SAMPLE_POINTS)

    jet = propagate(fam, beta, theta, x, n)
    assert np.all(jet.dx > 0)
    assert jet.x == pytest.approx(orbit_end(fam, beta, theta, x, n))

    h1, h2 = 1e-6, 1e-4
    plus = orbit_end(fam, beta, theta + h1, x, n)
    minus = orbit_end(fam, beta, theta - h1, x, n)
    d1 = (plus - minus) / (2 * h1)
    assert np.all(np.abs(jet.dtheta - d1) <= 1e-4 * np.maximum(np.abs(d1), 1.0))

    plus = orbit_end(fam, beta, theta + h2, x, n)
    minus = orbit_end(fam, beta, theta - h2, x, n)
    d2 = (plus - 2 * jet.x + minus) / h2 ** 2
    assert np.all(np.abs(jet.dtheta2 - d2) <= 1e-2 * np.maximum(np.abs(d2), 1.0))

    hb = 1e-6
    db = (orbit_end(fam, beta + hb, theta, x, n) - orbit_end(fam, beta - hb, theta, x, n)) / (2 * hb)
    assert np.all(np.abs(jet.dbeta - db) <= 1e-4 * np.maximum(np.abs(db), 1.0))


def test_backward_jets_against_finite_differences():
    fam = ArctanIntro(100)
    beta, theta, y, n = 0.3, 0.37, 0.9, 6

    def back(t):
        value = y
        for k in range(n):
            value = fam.inverse_eval(beta, np.mod(t - k * fam.omega, 1.0), value)
        return value

    jet = jet_backward(fam, beta, theta, y, n)[-1]
    assert jet.x == pytest.approx(back(theta))

    h = 1e-4
    d2 = (back(theta + h) - 2 * back(theta) + back(theta - h)) / h ** 2
    assert jet.dtheta2 == pytest.approx(d2, rel=1e-2, abs=1e-6)
    d1 = (back(theta + 1e-6) - back(theta - 1e-6)) / 2e-6
    assert jet.dtheta == pytest.approx(d1, rel=1e-4, abs=1e-8)


def test_forward_after_backward_is_identity():
    fam = ArctanIntro(100)
    beta, theta, x = 0.4, 0.2, 0.8
    back = jet_backward(fam, beta, theta, x, 1)[0]
    forward = jet_forward(fam, beta, np.mod(theta - fam.omega, 1.0), back.x, 1)[0]
    jet = compose_jets(forward, back)
    assert jet.x == pytest.approx(x, abs=1e-10)
    assert jet.dx == pytest.approx(1.0, abs=1e-10)
    assert jet.dtheta == pytest.approx(0.0, abs=1e-10)
    assert jet.dtheta2 == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("n,m", [(1, 1), (3, 5), (8, 4)])
def test_cocycle(n, m):
    fam = ArctanIntro(100)
    beta, theta, x = 0.5, 0.1, 1.2
    first = propagate(fam, beta, theta, x, n)
    second = propagate(fam, beta, np.mod(theta + n * fam.omega, 1.0), first.x, m)
    whole = propagate(fam, beta, theta, x, n + m)
    composed = compose_jets(second, first)
    for field in ("x", "dx", "dtheta", "dtheta2", "dbeta", "dxx", "dthetax"):
        expected = getattr(whole, field)
        assert getattr(composed, field) == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_orbit_escape():
    fam = ArctanIntro(100)
    with pytest.raises(OrbitEscapeError):
        jet_forward(fam, 0.9, 0.0, math.pi / 2, 5, bounds=(0.0, math.pi / 2))


def test_backward_without_preimage():
    fam = ArctanIntro(100)
    with pytest.raises(NoPreimageError):
        jet_backward(fam, 0.0, 0.0, 1.6, 3)


def test_jet_to_dict():
    jet = Jet2.identity(np.array([0.1, 0.2]))
    out = jet.to_dict()
    assert out["x"] == [0.1, 0.2]
    assert out["dx"] == [1.0, 1.0]
