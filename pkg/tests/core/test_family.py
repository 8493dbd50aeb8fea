# Standard imports
import math

import numpy as np
import pytest

# Custom imports
from qpfmaps.core.errors import ConfigurationError, DomainError, NoPreimageError
from qpfmaps.core.family import (
    ArctanIntro,
    ArctanQuarterPi,
    Custom,
    Harper,
    HqDrive,
    SineDrive,
    Strip,
)
from qpfmaps.core.familyfactory import create_family, family_kinds, load_family
from qpfmaps.commons import GOLDEN_MEAN
from tests import utils

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

FAMILIES = [
    ArctanIntro(100),
    ArctanQuarterPi(100),
    HqDrive(100, extra={"q": 3}),
    SineDrive(100, extra={"q": 3}),
    Custom(2, extra=AFFINE),
]


def random_points(size=1000, seed=0, x_range=(0.05, 1.5)):
    rng = np.random.default_rng(seed)
    return (
        rng.uniform(0.05, 0.95, size),
        rng.uniform(0.0, 1.0, size),
        rng.uniform(*x_range, size),
    )


def test_eval_examples():
    assert ArctanIntro(100).eval(0.0, 0.3, 0.0) == 0.0
    assert ArctanIntro(100).eval(0.78, 0.0, 0.0) == pytest.approx(-1.56)
    assert ArctanQuarterPi(100).eval(1.0, 0.5, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_inverse_examples():
    fam = ArctanIntro(100)
    assert fam.inverse_eval(0.0, 0.3, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert fam.inverse_eval(0.5, fam.omega, -1.0) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f.kind)
def test_inverse_round_trip(fam):
    beta, theta, x = random_points()
    y = fam.eval(beta, theta, x)
    back = fam.inverse_eval(beta, np.mod(theta + fam.omega, 1.0), y)
    assert np.max(np.abs(back - x)) < 1e-9


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f.kind)
def test_monotone_in_x_and_beta(fam):
    xs = np.linspace(0.0, math.pi / 2, 1000)
    for theta in (0.0, 0.3, 0.5, 0.8):
        values = fam.eval(0.5, theta, xs)
        assert np.all(np.diff(values) > 0)
        # non increasing in beta; equality where the drive vanishes
        assert np.all(fam.eval(0.6, theta, xs) <= values)


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f.kind)
def test_partials_against_finite_differences(fam):
    beta, theta, x = random_points(200, seed=1)
    p = fam.partials(beta, theta, x)
    h, hx = 1e-6, 1e-6 / fam.alpha
    f = fam.eval

    def close(value, estimate, rtol):
        value = np.broadcast_to(value, estimate.shape)
        return np.all(np.abs(value - estimate) <= rtol * np.maximum(np.abs(estimate), 1.0))

    assert np.allclose(p.value, f(beta, theta, x))
    assert close(p.dx, (f(beta, theta, x + hx) - f(beta, theta, x - hx)) / (2 * hx), 1e-4)
    assert close(p.dtheta, (f(beta, theta + h, x) - f(beta, theta - h, x)) / (2 * h), 1e-4)
    assert close(p.dbeta, (f(beta + h, theta, x) - f(beta - h, theta, x)) / (2 * h), 1e-4)

    d = fam.partials
    dxx = (np.asarray(d(beta, theta, x + hx).dx) - d(beta, theta, x - hx).dx) / (2 * hx)
    assert close(p.dxx, dxx, 1e-3)
    dtt = (np.asarray(d(beta, theta + h, x).dtheta) - d(beta, theta - h, x).dtheta) / (2 * h)
    assert close(p.dthetatheta, dtt, 1e-3)


def test_arctan_mixed_partial_vanishes():
    beta, theta, x = random_points(100)
    for fam in (ArctanIntro(100), ArctanQuarterPi(100)):
        assert np.all(fam.partials(beta, theta, x).dthetax == 0)


def test_hq_sigmoid_is_arctan_for_q_2():
    fam = HqDrive(100, extra={"q": 2})
    t = np.linspace(-50, 50, 1001)
    assert fam.h_sup == pytest.approx(math.pi / 2)
    assert np.max(np.abs(fam.h(t) - np.arctan(t))) < 1e-12
    assert np.max(np.abs(fam.h_inverse(np.arctan(t)) - t)) < 1e-8


def test_hq_sigmoid_limit():
    fam = SineDrive(100, extra={"q": 3})
    assert fam.h_sup == pytest.approx((math.pi / 3) / math.sin(math.pi / 3))
    assert fam.h(np.inf) == pytest.approx(fam.h_sup)
    assert fam.h(1e6) == pytest.approx(fam.h_sup, abs=1e-11)
    # odd and continuous at the junction of both expansions
    assert fam.h(-2.0) == pytest.approx(-fam.h(2.0))
    assert fam.h(1.0 - 1e-12) == pytest.approx(fam.h(1.0 + 1e-12), abs=1e-10)


def test_hq_invalid_q():
    with pytest.raises(ConfigurationError):
        HqDrive(100, extra={"q": 1})


def test_no_preimage():
    fam = ArctanIntro(100)
    with pytest.raises(NoPreimageError):
        fam.inverse_eval(0.0, 0.0, 2.0)
    assert fam.inverse_eval(0.0, 0.0, 2.0, strict=False) == math.inf
    assert fam.inverse_eval(0.0, 0.0, -2.0, strict=False) == -math.inf


def test_harper():
    fam = Harper(1.0, extra={"E": 0.5, "lam": 2.0})
    assert fam.lam == 2.0 and fam.energy == 0.5

    with pytest.raises(DomainError):
        fam.eval(0.0, 0.0, 2.0)
    with pytest.raises(NoPreimageError):
        fam.inverse_eval(0.0, 0.0, 0.0)

    x = np.linspace(-1.2, 1.2, 7)
    for theta in (0.1, 0.7):
        y = fam.eval(0.3, theta, x)
        assert fam.inverse_eval(0.3, theta + fam.omega, y) == pytest.approx(x, abs=1e-10)


def test_harper_partials():
    fam = Harper(1.0, extra={"E": 0.0, "lam": 1.5})
    rng = np.random.default_rng(3)
    beta, theta, x = rng.uniform(0, 1, 300), rng.uniform(0, 1, 300), rng.uniform(-1.2, 1.2, 300)
    # stay away from the chart boundary g = 0 where arctan(-1/g) jumps
    g = np.tan(x) - beta + fam.lam * np.cos(2 * np.pi * theta)
    keep = np.abs(g) > 0.3
    beta, theta, x = beta[keep], theta[keep], x[keep]

    h = 1e-6
    p = fam.partials(beta, theta, x)
    fx = (fam.eval(beta, theta, x + h) - fam.eval(beta, theta, x - h)) / (2 * h)
    ft = (fam.eval(beta, theta + h, x) - fam.eval(beta, theta - h, x)) / (2 * h)
    fb = (fam.eval(beta + h, theta, x) - fam.eval(beta - h, theta, x)) / (2 * h)
    assert p.dx == pytest.approx(fx, rel=1e-5, abs=1e-6)
    assert p.dtheta == pytest.approx(ft, rel=1e-5, abs=1e-6)
    assert p.dbeta == pytest.approx(fb, rel=1e-5, abs=1e-6)
    assert np.all(p.dbeta < 0)


def test_custom_family():
    fam = Custom(2, extra=AFFINE)
    assert fam.parameters == {"a": 0.5, "b": 0.1}
    assert fam.eval(0.2, 0.0, 1.0) == pytest.approx(0.5 + 0.1 - 0.2)
    assert fam.partials(0.2, 0.25, 1.0).dx == pytest.approx(0.5)


def test_custom_family_missing_partial():
    extra = dict(AFFINE)
    del extra["fxx"]
    with pytest.raises(ConfigurationError):
        Custom(2, extra=extra)


def test_custom_family_wrong_partial():
    extra = dict(AFFINE, fx="2*a")
    with pytest.raises(ConfigurationError) as info:
        Custom(2, extra=extra)
    assert info.value.assumption == "(A7)"
    assert "fx" in str(info.value)


def test_custom_family_empty_domain():
    with pytest.raises(ConfigurationError):
        Custom(2, extra=dict(AFFINE, domain=[1, -1]))


@pytest.mark.parametrize(
    "kind,cls",
    [
        ("ArctanIntro", ArctanIntro),
        ("arctan_intro", ArctanIntro),
        ("ArctanQuarterPi", ArctanQuarterPi),
        ("arctan_quarter_pi", ArctanQuarterPi),
        ("HqDrive", HqDrive),
        ("sine_drive", SineDrive),
        ("Harper", Harper),
    ],
)
def test_create_family(kind, cls):
    fam = create_family({"kind": kind, "alpha": 50, "extra": {"q": 3}}, omega=0.3)
    assert isinstance(fam, cls)
    assert fam.alpha == 50.0
    assert fam.omega == 0.3


def test_create_family_errors():
    assert "Custom" in family_kinds()
    with pytest.raises(ConfigurationError):
        create_family({"kind": "Logistic", "alpha": 2})
    with pytest.raises(ConfigurationError):
        create_family({"alpha": 2})
    with pytest.raises(ConfigurationError):
        create_family({"kind": "ArctanIntro", "alpha": -1})


def test_load_family():
    filename = utils.write_config({"kind": "Custom", "alpha": 2, "extra": AFFINE})
    fam = load_family(filename)
    assert isinstance(fam, Custom)
    assert fam.omega == GOLDEN_MEAN

    with pytest.raises(ConfigurationError):
        load_family("no_such_family.json")


def test_family_key_and_dict():
    a, b = HqDrive(100, extra={"q": 3}), HqDrive(100, extra={"q": 3})
    assert a.key() == b.key()
    assert a.key() != HqDrive(100, extra={"q": 4}).key()
    assert a.to_dict() == {"kind": "HqDrive", "alpha": 100.0, "extra": {"q": 3}}


def test_strip():
    strip = utils.figure_strip()
    assert strip.e_plus == pytest.approx(0.1)
    assert strip.alpha_e == pytest.approx(100 ** (2 / 3))
    assert strip.alpha_c * strip.alpha_e == pytest.approx(1.0)
    assert strip.alpha_u * strip.alpha_l == pytest.approx(1.0)
    assert strip.validate() is strip
    assert strip.bounds == (0.0, math.pi / 2)


@pytest.mark.parametrize(
    "changes,label",
    [
        ({"c_minus": 0.05}, "(A1)-(A3)"),
        ({"p": 1.2}, "(A1)-(A3)"),
        ({"s": -1}, "(A9)/(A11)"),
    ],
)
def test_invalid_strip(changes, label):
    with pytest.raises(ConfigurationError) as info:
        utils.figure_strip(**changes).validate()
    assert info.value.assumption == label
    assert str(info.value).startswith(label)


def test_strip_needs_e_plus():
    with pytest.raises(ConfigurationError):
        Strip.from_dict({"e_minus": 0, "c_minus": 0.5, "c_plus": 1.5}, 100)
