# Standard imports
from abc import abstractmethod
import math

# Custom imports
import numpy as np

from .abstractfamily import AbstractFamily, Partials
from qpfmaps.core.errors import NoPreimageError

TWO_PI = 2.0 * math.pi


class DriveFamily(AbstractFamily):
    """Additively forced family f = h(alpha x) - beta a(theta) - b(theta)

    ``h`` is an odd increasing sigmoid with limit ``h_sup`` at infinity;
    ``a`` is the parameter dependent drive and ``b`` an optional fixed
    offset. Subclasses provide both as (value, first, second) derivative
    triples.
    """

    @property
    @abstractmethod
    def h_sup(self) -> float:
        raise NotImplementedError()

    @abstractmethod
    def h(self, t):
        raise NotImplementedError()

    @abstractmethod
    def h_prime(self, t):
        raise NotImplementedError()

    @abstractmethod
    def h_second(self, t):
        raise NotImplementedError()

    @abstractmethod
    def h_inverse(self, z):
        """Inverse of h on (-h_sup, h_sup)"""
        raise NotImplementedError()

    @abstractmethod
    def drive(self, theta):
        """Return a(theta), a'(theta), a''(theta)"""
        raise NotImplementedError()

    def offset(self, theta):
        """Return b(theta), b'(theta), b''(theta)"""
        zero = np.zeros_like(np.asarray(theta, dtype=float))
        return zero, zero, zero

    def forcing(self, beta, theta):
        a = self.drive(theta)[0]
        b = self.offset(theta)[0]
        return beta * a + b

    def eval(self, beta, theta, x):
        out = self.h(self.alpha * np.asarray(x, dtype=float)) - self.forcing(beta, theta)
        return out if np.ndim(out) else float(out)

    def partials(self, beta, theta, x) -> Partials:
        x = np.asarray(x, dtype=float)
        t = self.alpha * x
        a, da, dda = self.drive(theta)
        b, db, ddb = self.offset(theta)
        value = self.h(t) - beta * a - b
        shape = np.broadcast(value, x).shape
        return Partials(
            value=value,
            dx=self.alpha * self.h_prime(t),
            dtheta=np.broadcast_to(-beta * da - db, shape),
            dbeta=np.broadcast_to(-a, shape),
            dxx=self.alpha ** 2 * self.h_second(t),
            dthetatheta=np.broadcast_to(-beta * dda - ddb, shape),
            dthetax=np.zeros(shape),
        )

    def inverse_eval(self, beta, theta, y, strict=True):
        z = np.asarray(y, dtype=float) + self.forcing(beta, np.asarray(theta) - self.omega)
        outside = np.abs(z) >= self.h_sup
        if strict and np.any(outside):
            raise NoPreimageError(
                f"{self.kind}: value outside of the fibre image (-{self.h_sup}, {self.h_sup})"
            )
        inside = np.where(outside, 0.0, z)
        x = self.h_inverse(inside) / self.alpha
        x = np.where(outside, np.copysign(np.inf, z), x)
        return x if x.ndim else float(x)


class CosineDrive:
    """Mixin: a(theta) = amplitude (1 + cos 2 pi theta)"""

    amplitude = 1.0

    def drive(self, theta):
        phase = TWO_PI * np.asarray(theta, dtype=float)
        return (
            self.amplitude * (1.0 + np.cos(phase)),
            -self.amplitude * TWO_PI * np.sin(phase),
            -self.amplitude * TWO_PI ** 2 * np.cos(phase),
        )
