# Standard imports
from dataclasses import dataclass, asdict
import math

# Custom imports
from qpfmaps.core.errors import ConfigurationError


@dataclass(frozen=True)
class Strip:
    """Analysis window [e-, c+] with the expanding interval E = [e-, e+]
    and the contracting interval C = [c-, c+]

    The derivative bounds follow from the steepness alpha and the
    exponent p: alpha_e = 1/alpha_c = alpha^(2/p) and
    alpha_u = 1/alpha_l = alpha^p.

    Attributes:
        s (float): lower bound of the second theta derivative on I0 x C
        S (float): bound of the first theta derivative
    """

    e_minus: float
    e_plus: float
    c_minus: float
    c_plus: float
    alpha: float
    p: float = 3.0
    s: float = 5.0
    S: float = 7.0

    @classmethod
    def from_dict(cls, data: dict, alpha: float):
        """Build a strip; ``e_plus`` may be given as ``r`` with e+ = r / alpha"""
        data = dict(data)
        if "e_plus" not in data:
            if "r" not in data:
                raise ConfigurationError("strip needs either e_plus or r")
            data["e_plus"] = float(data["r"]) / alpha
        data.pop("r", None)
        data.pop("alpha", None)
        return cls(alpha=alpha, **data)

    @property
    def alpha_e(self) -> float:
        return self.alpha ** (2.0 / self.p)

    @property
    def alpha_c(self) -> float:
        return 1.0 / self.alpha_e

    @property
    def alpha_u(self) -> float:
        return self.alpha ** self.p

    @property
    def alpha_l(self) -> float:
        return 1.0 / self.alpha_u

    @property
    def width_C(self) -> float:
        return self.c_plus - self.c_minus

    @property
    def width_E(self) -> float:
        return self.e_plus - self.e_minus

    @property
    def bounds(self) -> tuple:
        return (self.e_minus, self.c_plus)

    def validate(self):
        """Check the ordering invariants of the strip

        Raises:
            ConfigurationError: naming the violated assumption
        """
        if not self.e_minus < self.e_plus < self.c_minus < self.c_plus:
            raise ConfigurationError(
                "ordering e- < e+ < c- < c+ violated "
                f"({self.e_minus}, {self.e_plus}, {self.c_minus}, {self.c_plus})",
                assumption="(A1)-(A3)",
            )
        if not self.alpha > 1:
            raise ConfigurationError(f"alpha must exceed 1, got {self.alpha}", "(A1)-(A3)")
        if not self.p >= math.sqrt(2.0):
            raise ConfigurationError(f"p must be at least sqrt(2), got {self.p}", "(A1)-(A3)")
        if not 0 < self.alpha_l < self.alpha_c < 1 < self.alpha_e < self.alpha_u:
            raise ConfigurationError(
                "ordering 0 < alpha_l < alpha_c < 1 < alpha_e < alpha_u violated",
                assumption="(A3)",
            )
        if not (self.s > 0 and self.S > 0):
            raise ConfigurationError("s and S must be positive", "(A9)/(A11)")
        return self

    def to_dict(self) -> dict:
        out = asdict(self)
        out.update(
            alpha_e=self.alpha_e,
            alpha_c=self.alpha_c,
            alpha_u=self.alpha_u,
            alpha_l=self.alpha_l,
        )
        return out
