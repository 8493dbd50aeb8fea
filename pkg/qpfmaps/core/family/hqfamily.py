# Standard imports
import math

# Custom imports
import numpy as np
from scipy.special import hyp2f1

from .abstractfamily import bracketed_inverse
from .drivefamily import DriveFamily, CosineDrive, TWO_PI
from qpfmaps.core.errors import ConfigurationError
from qpfmaps.commons import GOLDEN_MEAN


class HqSigmoid:
    """Mixin providing h_q(t) = sgn(t) int_0^|t| (1 + z^q)^-1 dz

    For q = 2, h_q is the arctangent. Values are computed from the Gauss
    hypergeometric function; the series around 0 is used for |t| <= 1 and
    the tail expansion around infinity otherwise.
    """

    @property
    def q(self) -> float:
        return float(self.extra.get("q", 2.0))

    def check_q(self):
        if not self.q > 1:
            raise ConfigurationError(f"{self.kind}: exponent q must exceed 1, got {self.q}")

    @property
    def h_sup(self) -> float:
        q = self.q
        return (math.pi / q) / math.sin(math.pi / q)

    def h(self, t):
        t = np.asarray(t, dtype=float)
        q = self.q
        u = np.abs(t)
        small = u <= 1.0
        with np.errstate(all="ignore"):
            near = u * hyp2f1(1.0, 1.0 / q, 1.0 + 1.0 / q, -(u ** q))
            safe = np.where(small, 2.0, u)
            far = self.h_sup - safe ** (1.0 - q) / (q - 1.0) * hyp2f1(
                1.0, (q - 1.0) / q, (2.0 * q - 1.0) / q, -(safe ** -q)
            )
        far = np.where(np.isinf(u), self.h_sup, far)
        return np.sign(t) * np.where(small, near, far)

    def h_prime(self, t):
        return 1.0 / (1.0 + np.abs(t) ** self.q)

    def h_second(self, t):
        t = np.asarray(t, dtype=float)
        q = self.q
        u = np.abs(t)
        return -q * np.sign(t) * u ** (q - 1.0) / (1.0 + u ** q) ** 2

    def h_inverse(self, z):
        z = np.asarray(z, dtype=float)
        # bisect on s with t = tan(s) to cover the unbounded half line
        s = bracketed_inverse(
            lambda s: self.h(np.tan(s)),
            lambda s: self.h_prime(np.tan(s)) / np.cos(s) ** 2,
            np.abs(z),
            0.0,
            math.pi / 2.0,
            polish=0,
        )
        t = np.tan(s)
        for _ in range(2):
            t = np.maximum(t - (self.h(t) - np.abs(z)) / self.h_prime(t), 0.0)
        return np.sign(z) * np.abs(t)


class HqDrive(HqSigmoid, CosineDrive, DriveFamily):
    """f = h_q(alpha x) - beta (h_q(inf) / 2) (1 + cos 2 pi theta)"""

    kind = "HqDrive"

    def __init__(self, alpha, omega=GOLDEN_MEAN, extra=None):
        super().__init__(alpha, omega, extra)
        self.check_q()

    @property
    def amplitude(self):
        return self.h_sup / 2.0


class SineDrive(HqSigmoid, DriveFamily):
    """f = h_q(alpha x) - 2 beta - (1 + sin 2 pi theta) / 2"""

    kind = "SineDrive"

    def __init__(self, alpha, omega=GOLDEN_MEAN, extra=None):
        super().__init__(alpha, omega, extra)
        self.check_q()

    def drive(self, theta):
        two = np.full(np.shape(theta), 2.0)
        zero = np.zeros(np.shape(theta))
        return two, zero, zero

    def offset(self, theta):
        phase = TWO_PI * np.asarray(theta, dtype=float)
        return (
            0.5 * (1.0 + np.sin(phase)),
            0.5 * TWO_PI * np.cos(phase),
            -0.5 * TWO_PI ** 2 * np.sin(phase),
        )
