# Standard imports
import math

# Custom imports
import numpy as np

from .abstractfamily import AbstractFamily, Partials
from qpfmaps.core.errors import NoPreimageError
from qpfmaps.commons import GOLDEN_MEAN

TWO_PI = 2.0 * math.pi


class Harper(AbstractFamily):
    """Projective action of the Schrodinger cocycle on angle coordinates

    f(beta, theta, x) = arctan(-1 / (tan x - (E + beta) + lambda cos 2 pi theta))

    The fibre is the open angle interval (-pi/2, pi/2). Increasing beta
    shifts the energy E upwards, which makes the fibre maps decrease in
    beta like the additive families.

    Only evaluation, inverse and exact partials are provided; none of the
    hypotheses of the critical region machinery is certified for it.

    Extra parameters:
        E (float): energy, default 0
        lam (float): coupling constant lambda, defaults to alpha
    """

    kind = "Harper"
    domain = (-math.pi / 2.0, math.pi / 2.0)

    def __init__(self, alpha=1.0, omega=GOLDEN_MEAN, extra=None):
        super().__init__(alpha, omega, extra)
        self.energy = float(self.extra.get("E", 0.0))
        self.lam = float(self.extra.get("lam", self.alpha))

    def _g(self, beta, theta, x):
        phase = TWO_PI * np.asarray(theta, dtype=float)
        return np.tan(x) - (self.energy + beta) + self.lam * np.cos(phase)

    def eval(self, beta, theta, x):
        self.check_domain(x)
        with np.errstate(divide="ignore"):
            out = np.arctan(-1.0 / self._g(beta, theta, x))
        return out if np.ndim(out) else float(out)

    def partials(self, beta, theta, x) -> Partials:
        self.check_domain(x)
        x = np.asarray(x, dtype=float)
        phase = TWO_PI * np.asarray(theta, dtype=float)
        g = self._g(beta, theta, x)
        sec2 = 1.0 / np.cos(x) ** 2
        g_x = sec2
        g_xx = 2.0 * np.tan(x) * sec2
        g_theta = -self.lam * TWO_PI * np.sin(phase)
        g_thetatheta = -self.lam * TWO_PI ** 2 * np.cos(phase)
        # d/dg arctan(-1/g) = 1 / (1 + g^2)
        u = 1.0 / (1.0 + g ** 2)
        u_g = -2.0 * g / (1.0 + g ** 2) ** 2
        with np.errstate(divide="ignore"):
            value = np.arctan(-1.0 / g)
        return Partials(
            value=value,
            dx=u * g_x,
            dtheta=u * g_theta,
            dbeta=-u,
            dxx=u_g * g_x ** 2 + u * g_xx,
            dthetatheta=u_g * g_theta ** 2 + u * g_thetatheta,
            dthetax=u_g * g_theta * g_x,
        )

    def inverse_eval(self, beta, theta, y, strict=True):
        y = np.asarray(y, dtype=float)
        self.check_domain(y)
        base = TWO_PI * (np.asarray(theta, dtype=float) - self.omega)
        degenerate = y == 0.0
        if strict and np.any(degenerate):
            raise NoPreimageError("Harper: 0 is the image of the boundary angle")
        with np.errstate(divide="ignore"):
            g = -1.0 / np.tan(y)
        x = np.arctan(g + self.energy + beta - self.lam * np.cos(base))
        x = np.where(degenerate, np.inf, x)
        return x if x.ndim else float(x)
