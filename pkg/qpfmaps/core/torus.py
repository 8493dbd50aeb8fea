"""Circle geometry used by every combinatorial condition.

Points of the circle are reals taken modulo 1. Arcs are stored as a
center and a half width so a translation by a multiple of the rotation
number only moves the center.

All functions accept scalars or numpy arrays.
"""
# Standard imports
from dataclasses import dataclass
import math

# Custom imports
import numpy as np

from qpfmaps.commons import GOLDEN_MEAN, DEFAULT_CHECK_HORIZON
import qpfmaps.commons as cm

LOGGER = cm.logger()

# Tolerance used to decide if a rotation number is rational at working precision
RATIONAL_TOLERANCE = 1e-14


def circle_dist(a, b):
    """Distance on the circle R/Z

    Examples:
        >>> round(circle_dist(0.9, 0.1), 12)
        0.2
    """
    d = np.abs(np.mod(np.asarray(a, dtype=float) - b, 1.0))
    d = np.minimum(d, 1.0 - d)
    if np.ndim(d) == 0:
        return float(d)
    return d


def wrap(theta):
    """Return theta reduced to [0, 1)"""
    out = np.mod(theta, 1.0)
    if np.ndim(out) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class RotationSpec:
    """Rotation number with its Diophantine type (C, eta)

    Only the first ``check_horizon`` returns are ever inspected, the
    Diophantine property is therefore a finite certificate.
    """

    omega: float = GOLDEN_MEAN
    dio_C: float = 0.38
    dio_eta: float = 1.0
    check_horizon: int = DEFAULT_CHECK_HORIZON

    @classmethod
    def golden(cls, **kwargs):
        return cls(omega=GOLDEN_MEAN, **kwargs)

    def returns(self, horizon=None):
        """Distances d(k omega, 0) for k = 1..horizon"""
        horizon = horizon or self.check_horizon
        k = np.arange(1, horizon + 1, dtype=float)
        return k, circle_dist(k * self.omega, 0.0)

    def is_irrational(self) -> bool:
        _, d = self.returns()
        return bool(np.all(d > RATIONAL_TOLERANCE))

    def is_diophantine(self) -> bool:
        return diophantine_margin(self) >= self.dio_C

    def shift(self, theta, k=1):
        """Translate theta by k rotations"""
        return wrap(np.asarray(theta) + k * self.omega)


@dataclass(frozen=True)
class Arc:
    """Closed convex arc of the circle

    An empty region is a distinct value (``Arc.empty()``), never a zero
    width arc: a zero width arc is a single point.
    """

    center: float = 0.0
    half_width: float = 0.0
    is_empty: bool = False

    def __post_init__(self):
        if not self.is_empty:
            if not 0.0 <= self.half_width <= 0.5:
                raise ValueError(f"invalid arc half width {self.half_width}")
            object.__setattr__(self, "center", wrap(self.center))

    @classmethod
    def empty(cls):
        return cls(0.0, 0.0, True)

    @classmethod
    def full(cls):
        return cls(0.5, 0.5)

    @classmethod
    def from_endpoints(cls, start: float, stop: float):
        """Build the arc running counterclockwise from start to stop"""
        length = float(np.mod(stop - start, 1.0))
        return cls(start + length / 2.0, length / 2.0)

    @property
    def length(self) -> float:
        return 0.0 if self.is_empty else 2.0 * self.half_width

    @property
    def start(self) -> float:
        return wrap(self.center - self.half_width)

    @property
    def stop(self) -> float:
        return wrap(self.center + self.half_width)

    def shift(self, t: float):
        if self.is_empty:
            return self
        return Arc(self.center + t, self.half_width)

    def contains(self, theta):
        """Boolean (array) telling if theta lies in the arc"""
        if self.is_empty:
            return np.zeros(np.shape(theta), dtype=bool)
        return circle_dist(theta, self.center) <= self.half_width

    def contains_arc(self, other: "Arc") -> bool:
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        if self.half_width >= 0.5:
            return True
        return circle_dist(self.center, other.center) + other.half_width <= self.half_width

    def sample(self, count: int):
        """Return ``count`` equally spaced points covering the arc"""
        if self.is_empty:
            return np.empty(0)
        offsets = np.linspace(-self.half_width, self.half_width, count)
        return wrap(self.center + offsets)

    def to_dict(self) -> dict:
        if self.is_empty:
            return {"empty": True}
        return {
            "empty": False,
            "center": self.center,
            "half_width": self.half_width,
            "start": self.start,
            "stop": self.stop,
            "length": self.length,
        }


def diophantine_margin(rot: RotationSpec, horizon=None) -> float:
    """Return min over 1 <= k <= horizon of d(k omega, 0) * k**eta

    The rotation satisfies its declared Diophantine bound on the horizon
    iff the result is at least ``rot.dio_C``.
    """
    k, d = rot.returns(horizon)
    return float(np.min(d * k ** rot.dio_eta))


def arc_gap(a: Arc, b: Arc) -> float:
    """Infimum of the circle distance between two arcs, 0 when they meet

    An empty arc is at infinite distance of anything.
    """
    if a.is_empty or b.is_empty:
        return math.inf
    return max(0.0, circle_dist(a.center, b.center) - a.half_width - b.half_width)


def arcs_gap(arc: Arc, centers, half_width: float) -> float:
    """Vectorised :func:`arc_gap` between ``arc`` and many arcs of equal width"""
    centers = np.atleast_1d(centers)
    if arc.is_empty or centers.size == 0:
        return math.inf
    gaps = circle_dist(centers, arc.center) - arc.half_width - half_width
    return float(max(0.0, np.min(gaps)))


def translates(arc: Arc, rot: RotationSpec, ks):
    """Centers of the translates arc + k omega for every k in ks"""
    ks = np.asarray(ks, dtype=float)
    return wrap(arc.center + ks * rot.omega)
