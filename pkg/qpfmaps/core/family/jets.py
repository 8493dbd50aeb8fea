"""Second order jets of iterated fibre maps.

A jet stores the image x_n = f^n(theta0, x0) of a fibre point together
with the derivatives of x_n with respect to the initial point and the
parameter. Jets are propagated one step at a time with the chain rule:

    dx_k      = f_x dx
    dtheta_k  = f_theta + f_x dtheta
    dtheta2_k = f_thetatheta + 2 f_thetax dtheta + f_xx dtheta^2 + f_x dtheta2
    dbeta_k   = f_beta + f_x dbeta

where the partials of f are taken at the previous point. Two additional
fields (dxx and dthetax) are carried so that jets can be composed.

Backward jets use the same recursion with the partials of the inverse
fibre map (see :meth:`AbstractFamily.inverse_partials`).
"""
# Standard imports
from dataclasses import dataclass

# Custom imports
import numpy as np

from qpfmaps.core.errors import OrbitEscapeError
from qpfmaps.commons import ESCAPE_EPSILON
import qpfmaps.commons as cm

LOGGER = cm.logger()


@dataclass(frozen=True)
class Jet2:
    x: object
    dx: object
    dtheta: object
    dtheta2: object
    dbeta: object
    dxx: object
    dthetax: object

    @classmethod
    def identity(cls, x0):
        x0 = np.asarray(x0, dtype=float)
        zero = np.zeros_like(x0)
        return cls(x0, np.ones_like(x0), zero, zero, zero, zero, zero)

    def step(self, p):
        """Return the jet after one more application of a map with partials p

        ``p`` holds the partials of the map at (theta_k, self.x).
        """
        return Jet2(
            x=p.value,
            dx=p.dx * self.dx,
            dtheta=p.dtheta + p.dx * self.dtheta,
            dtheta2=p.dthetatheta
            + 2.0 * p.dthetax * self.dtheta
            + p.dxx * self.dtheta ** 2
            + p.dx * self.dtheta2,
            dbeta=p.dbeta + p.dx * self.dbeta,
            dxx=p.dxx * self.dx ** 2 + p.dx * self.dxx,
            dthetax=p.dthetax * self.dx + p.dxx * self.dtheta * self.dx + p.dx * self.dthetax,
        )

    def to_dict(self) -> dict:
        return {
            key: np.asarray(value).tolist()
            for key, value in self.__dict__.items()
        }


def compose_jets(outer: Jet2, inner: Jet2) -> Jet2:
    """Jet of F o G from the jet of G (inner) and the jet of F at G's image"""
    return Jet2(
        x=outer.x,
        dx=outer.dx * inner.dx,
        dtheta=outer.dtheta + outer.dx * inner.dtheta,
        dtheta2=outer.dtheta2
        + 2.0 * outer.dthetax * inner.dtheta
        + outer.dxx * inner.dtheta ** 2
        + outer.dx * inner.dtheta2,
        dbeta=outer.dbeta + outer.dx * inner.dbeta,
        dxx=outer.dxx * inner.dx ** 2 + outer.dx * inner.dxx,
        dthetax=outer.dthetax * inner.dx
        + outer.dxx * inner.dtheta * inner.dx
        + outer.dx * inner.dthetax,
    )


def _check_bounds(x, bounds, step):
    if bounds is None:
        return
    lo, hi = bounds
    x = np.asarray(x)
    if np.any((x < lo - ESCAPE_EPSILON) | (x > hi + ESCAPE_EPSILON)):
        raise OrbitEscapeError(f"orbit left [{lo}, {hi}] at step {step}")


def iter_jets_forward(fam, beta, theta0, x0, n, bounds=None):
    """Yield the jets of f^k at (theta0, x0) for k = 1..n

    Args:
        bounds (tuple): optional (lo, hi) fibre window; leaving it raises
            OrbitEscapeError.
    """
    jet = Jet2.identity(x0)
    theta0 = np.asarray(theta0, dtype=float)
    for k in range(n):
        theta = np.mod(theta0 + k * fam.omega, 1.0)
        jet = jet.step(fam.partials(beta, theta, jet.x))
        _check_bounds(jet.x, bounds, k + 1)
        yield jet


def iter_jets_backward(fam, beta, theta0, x0, n, bounds=None, strict=True):
    """Yield the jets of f^-k at (theta0, x0) for k = 1..n

    Raises:
        NoPreimageError: if strict and some point has no preimage
    """
    jet = Jet2.identity(x0)
    theta0 = np.asarray(theta0, dtype=float)
    for k in range(n):
        theta = np.mod(theta0 - k * fam.omega, 1.0)
        jet = jet.step(fam.inverse_partials(beta, theta, jet.x, strict=strict))
        _check_bounds(jet.x, bounds, k + 1)
        yield jet


def jet_forward(fam, beta, theta0, x0, n, bounds=None) -> list:
    """Return the list of forward jets for k = 1..n

    Examples:
        >>> jets = jet_forward(ArctanIntro(100), 0.5, 0.0, 0.1, 8)
        >>> len(jets)
        8
        >>> bool(jets[-1].dx > 0)  # product of the fibre derivatives
        True
    """
    return list(iter_jets_forward(fam, beta, theta0, x0, n, bounds))


def jet_backward(fam, beta, theta0, x0, n, bounds=None) -> list:
    """Return the list of backward jets for k = 1..n"""
    return list(iter_jets_backward(fam, beta, theta0, x0, n, bounds))


def propagate(fam, beta, theta0, x0, n, backward=False, bounds=None, strict=True) -> Jet2:
    """Return only the last jet; memory use does not grow with n"""
    if n == 0:
        return Jet2.identity(x0)
    if backward:
        iterator = iter_jets_backward(fam, beta, theta0, x0, n, bounds, strict)
    else:
        iterator = iter_jets_forward(fam, beta, theta0, x0, n, bounds)
    jet = None
    for jet in iterator:
        pass
    return jet
