# Standard imports
from abc import ABC, abstractmethod
from typing import NamedTuple
import math

# Custom imports
import numpy as np

from qpfmaps.core.errors import ConfigurationError, DomainError, NoPreimageError
from qpfmaps.commons import GOLDEN_MEAN
import qpfmaps.commons as cm

LOGGER = cm.logger()


class Partials(NamedTuple):
    """Value and first/second partial derivatives of a fibre map

    Every field is a float or a numpy array broadcast from the inputs.
    """

    value: object
    dx: object
    dtheta: object
    dbeta: object
    dxx: object
    dthetatheta: object
    dthetax: object


def bracketed_inverse(func, dfunc, target, lo, hi, iterations=200, polish=3):
    """Vectorised monotone root finding of func(x) = target on [lo, hi]

    Bisection runs on the whole array at once, then a few Newton steps
    polish the result. ``func`` must be increasing on the bracket and the
    target must lie in [func(lo), func(hi)].
    """
    target = np.asarray(target, dtype=float)
    lo = np.full(target.shape, lo, dtype=float)
    hi = np.full(target.shape, hi, dtype=float)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        below = func(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 1e-14 * np.maximum(1.0, np.abs(hi))):
            break
    x = 0.5 * (lo + hi)
    for _ in range(polish):
        slope = dfunc(x)
        step = np.where(slope > 0, (func(x) - target) / np.where(slope > 0, slope, 1.0), 0.0)
        candidate = x - step
        # keep Newton inside the final bracket
        x = np.where((candidate >= lo) & (candidate <= hi), candidate, x)
    return x


class AbstractFamily(ABC):
    """Base class of the parametrised quasi-periodically forced monotone maps

    A family is the skew product (theta, x) -> (theta + omega, f(beta, theta, x))
    where x -> f(beta, theta, x) is strictly increasing. Subclasses
    implement the fibre map and its partial derivatives; the inverse is
    found by bracketed root finding unless the subclass has a closed form.

    Attributes:
        alpha (float): steepness of the fibre maps
        omega (float): rotation number of the base
        extra (dict): family specific parameters

    Examples:
        >>> fam = ArctanIntro(alpha=100)
        >>> fam.eval(0.78, 0.0, 0.0)
        -1.56
        >>> fam.inverse_eval(0.5, fam.omega, -1.0)
        0.0
    """

    kind = None
    # Open interval of admissible fibre coordinates
    domain = (-math.inf, math.inf)
    # Finite bracket used by the generic inverse
    bracket = (-1e3, 1e3)

    def __init__(self, alpha, omega=GOLDEN_MEAN, extra=None):
        if not alpha > 0:
            raise ConfigurationError(f"steepness alpha must be positive, got {alpha}")
        self.alpha = float(alpha)
        self.omega = float(omega)
        self.extra = dict(extra or {})

    def key(self) -> tuple:
        """Hashable identity used by caches"""
        return (
            self.kind,
            self.alpha,
            self.omega,
            tuple(sorted((k, repr(v)) for k, v in self.extra.items())),
        )

    def __repr__(self):
        return f"{self.__class__.__name__}(alpha={self.alpha}, extra={self.extra})"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "alpha": self.alpha, "extra": dict(self.extra)}

    def check_domain(self, x):
        """Raise DomainError if some x lies outside the fibre domain"""
        lo, hi = self.domain
        x = np.asarray(x)
        finite = np.isfinite(x)
        if np.any(finite & ((x <= lo) | (x >= hi))):
            raise DomainError(f"{self.kind}: fibre coordinate outside {self.domain}")

    @abstractmethod
    def eval(self, beta, theta, x):
        """Return the fibre map f(beta, theta, x)"""
        raise NotImplementedError()

    @abstractmethod
    def partials(self, beta, theta, x) -> Partials:
        """Return f and its six partial derivatives at (beta, theta, x)"""
        raise NotImplementedError()

    def inverse_eval(self, beta, theta, y, strict=True):
        """Return x such that f(beta, theta - omega, x) = y

        Args:
            strict (bool): If True, raise NoPreimageError when some y is
                outside the image of the fibre map. Otherwise such points
                are mapped to -inf/+inf.
        """
        base = np.asarray(theta, dtype=float) - self.omega
        y = np.asarray(y, dtype=float)
        lo, hi = self.bracket
        f_lo = self.eval(beta, base, lo)
        f_hi = self.eval(beta, base, hi)
        below = y < f_lo
        above = y > f_hi
        if strict and np.any(below | above):
            raise NoPreimageError(f"{self.kind}: value outside of the fibre image")

        x = bracketed_inverse(
            lambda t: self.eval(beta, base, t),
            lambda t: self.partials(beta, base, t).dx,
            np.clip(y, f_lo, f_hi),
            lo,
            hi,
        )
        x = np.where(below, -np.inf, np.where(above, np.inf, x))
        return x if x.ndim else float(x)

    def inverse_partials(self, beta, theta, y, strict=True) -> Partials:
        """Partials of the inverse fibre map g(theta, y) over theta

        g maps the fibre over theta to the fibre over theta - omega. Its
        derivatives follow from the inverse function theorem applied to
        the partials of f at (theta - omega, g).
        """
        x = self.inverse_eval(beta, theta, y, strict=strict)
        with np.errstate(all="ignore"):
            p = self.partials(beta, np.asarray(theta) - self.omega, x)
            g_y = 1.0 / p.dx
            g_theta = -p.dtheta / p.dx
            g_beta = -p.dbeta / p.dx
            g_yy = -p.dxx / p.dx ** 3
            g_thetay = -(p.dthetax + p.dxx * g_theta) / p.dx ** 2
            g_thetatheta = (
                -(p.dthetatheta + 2.0 * p.dthetax * g_theta + p.dxx * g_theta ** 2)
                / p.dx
            )
        return Partials(x, g_y, g_theta, g_beta, g_yy, g_thetatheta, g_thetay)
