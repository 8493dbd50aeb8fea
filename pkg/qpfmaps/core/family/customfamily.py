# Custom imports
import numpy as np

from .abstractfamily import AbstractFamily, Partials
from .expression import parse_expression
from qpfmaps.core.errors import ConfigurationError
from qpfmaps.commons import GOLDEN_MEAN
import qpfmaps.commons as cm

LOGGER = cm.logger()

# Keys of the expressions a custom family must supply
PARTIAL_KEYS = ("f", "fx", "ftheta", "fbeta", "fxx", "fthetatheta", "fthetax")

# Reserved keys of the "extra" section; anything else is a named parameter
RESERVED_KEYS = set(PARTIAL_KEYS) | {"domain", "validation"}


class Custom(AbstractFamily):
    """Family defined by closed form expressions

    The "extra" section of the family document holds the expression of f
    and of its six partial derivatives. Partials are never derived
    symbolically; they are checked against central finite differences
    when the family is built.

    Example of family document::

        {
            "kind": "Custom",
            "alpha": 100,
            "extra": {
                "f": "arctan(alpha*x) - 2*beta",
                "fx": "alpha/(1+(alpha*x)^2)",
                "ftheta": "0",
                "fbeta": "-2",
                "fxx": "-2*alpha^3*x/(1+(alpha*x)^2)^2",
                "fthetatheta": "0",
                "fthetax": "0",
                "domain": [-10, 10]
            }
        }

    Extra parameters:
        domain (list): bracket [lo, hi] used by the inverse, default [-1e3, 1e3]
        validation (dict): {"samples": int, "rtol": float, "seed": int}
        any other key: numeric parameter usable by name in the expressions
    """

    kind = "Custom"

    def __init__(self, alpha, omega=GOLDEN_MEAN, extra=None, validate=True):
        super().__init__(alpha, omega, extra)

        missing = [key for key in PARTIAL_KEYS if key not in self.extra]
        if missing:
            raise ConfigurationError(
                "custom family misses expression(s): %s" % ", ".join(missing)
            )

        self.parameters = {
            key: float(value)
            for key, value in self.extra.items()
            if key not in RESERVED_KEYS
        }
        self.expressions = {
            key: parse_expression(str(self.extra[key]), self.parameters)
            for key in PARTIAL_KEYS
        }
        lo, hi = self.extra.get("domain", self.bracket)
        if not lo < hi:
            raise ConfigurationError(f"custom family has an empty domain [{lo}, {hi}]")
        self.bracket = (float(lo), float(hi))

        if validate:
            self.validate_partials(**self.extra.get("validation", {}))

    def _env(self, beta, theta, x):
        env = dict(self.parameters)
        env.update(
            theta=np.asarray(theta, dtype=float),
            x=np.asarray(x, dtype=float),
            beta=np.asarray(beta, dtype=float),
            alpha=self.alpha,
            omega=self.omega,
        )
        return env

    def _value(self, key, env):
        value = self.expressions[key].evaluate(env)
        shape = np.broadcast(env["theta"], env["x"], env["beta"]).shape
        return np.broadcast_to(np.asarray(value, dtype=float), shape)

    def eval(self, beta, theta, x):
        out = self._value("f", self._env(beta, theta, x))
        return np.array(out) if np.ndim(out) else float(out)

    def partials(self, beta, theta, x) -> Partials:
        env = self._env(beta, theta, x)
        return Partials(*(self._value(key, env) for key in PARTIAL_KEYS))

    def validate_partials(self, samples=64, rtol=1e-4, seed=0):
        """Check every supplied partial against central finite differences

        Points are drawn in [0, 1] for beta and theta and in the inner half
        of the domain bracket for x.

        Raises:
            ConfigurationError: naming the first inconsistent partial
        """
        rng = np.random.default_rng(seed)
        lo, hi = self.bracket
        width = hi - lo
        beta = rng.uniform(0.0, 1.0, samples)
        theta = rng.uniform(0.0, 1.0, samples)
        x = rng.uniform(lo + width / 4.0, hi - width / 4.0, samples)

        h = 1e-5
        hx = h * max(1.0, width / 4.0) / max(1.0, self.alpha)
        f = lambda b, t, y: np.asarray(self.eval(b, t, y))
        d = lambda b, t, y: self.partials(b, t, y)

        estimates = {
            "fx": (f(beta, theta, x + hx) - f(beta, theta, x - hx)) / (2 * hx),
            "ftheta": (f(beta, theta + h, x) - f(beta, theta - h, x)) / (2 * h),
            "fbeta": (f(beta + h, theta, x) - f(beta - h, theta, x)) / (2 * h),
            "fxx": (d(beta, theta, x + hx).dx - d(beta, theta, x - hx).dx) / (2 * hx),
            "fthetatheta": (d(beta, theta + h, x).dtheta - d(beta, theta - h, x).dtheta)
            / (2 * h),
            "fthetax": (d(beta, theta, x + hx).dtheta - d(beta, theta, x - hx).dtheta)
            / (2 * hx),
        }
        supplied = dict(zip(PARTIAL_KEYS, self.partials(beta, theta, x)))

        for key, estimate in estimates.items():
            # second order partials are compared with differences of first order ones
            tolerance = rtol if key in ("fx", "ftheta", "fbeta") else 10 * rtol
            value = np.asarray(supplied[key])
            scale = np.maximum(np.abs(estimate), 1.0)
            error = np.nanmax(np.abs(value - estimate) / scale)
            LOGGER.debug("custom family: %s finite difference error %g", key, error)
            if not error <= tolerance:
                raise ConfigurationError(
                    f"custom family: partial {key} disagrees with finite differences "
                    f"(relative error {error:.3g})",
                    assumption="(A7)",
                )
