# Standard imports
from dataclasses import dataclass, field
from typing import List

# Custom imports
from qpfmaps.core.errors import ConfigurationError
import qpfmaps.commons as cm

LOGGER = cm.logger()

# Number of factors used to evaluate the infinite product b
PRODUCT_TERMS = 128


@dataclass
class Schedule:
    """Return times M_n and growth factors K_n of the critical regions

    K_n = K0 * kappa^n, b_0 = 1 and b_n = (1 - 1/K_{n-1}) b_{n-1}. Only M_0
    is given; the next return times are appended by
    :func:`qpfmaps.core.regions.choose_Mn` once the regions are known.

    Example:
        >>> schedule = Schedule(M=[4], K0=10, kappa=2)
        >>> schedule.b_at(1)
        0.9
    """

    M: List[int] = field(default_factory=lambda: [4])
    K0: int = 32
    kappa: int = 2

    def __post_init__(self):
        if not self.M or self.M[0] < 2:
            raise ConfigurationError(f"M0 must be at least 2, got {self.M[:1]}")
        if self.K0 < 2:
            raise ConfigurationError(f"K0 must be at least 2, got {self.K0}")
        if self.kappa < 2:
            raise ConfigurationError(f"kappa must be at least 2, got {self.kappa}")

    def K_at(self, n: int) -> int:
        return self.K0 * self.kappa ** n

    def b_at(self, n: int) -> float:
        b = 1.0
        for j in range(n):
            b *= 1.0 - 1.0 / self.K_at(j)
        return b

    @property
    def K(self) -> list:
        return [self.K_at(n) for n in range(len(self.M))]

    @property
    def b(self) -> list:
        return [self.b_at(n) for n in range(len(self.M))]

    @property
    def b_inf(self) -> float:
        return self.b_at(PRODUCT_TERMS)

    @property
    def inverse_K_sum(self) -> float:
        """Sum of 1/K_j over all j, that is kappa / (K0 (kappa - 1))"""
        return self.kappa / (self.K0 * (self.kappa - 1.0))

    def alpha_minus(self, strip) -> float:
        b = self.b_inf
        return strip.alpha_c ** b * strip.alpha_u ** (1.0 - b)

    def alpha_plus(self, strip) -> float:
        b = self.b_inf
        return strip.alpha_e ** b * strip.alpha_l ** (1.0 - b)

    def is_admissible(self, strip) -> bool:
        """Sum of 1/K_j <= 1/6 and alpha_- < 1 < alpha_+"""
        return (
            self.inverse_K_sum <= 1.0 / 6.0
            and self.alpha_minus(strip) < 1.0 < self.alpha_plus(strip)
        )

    def window(self, n: int) -> tuple:
        """Integer window [K_{n-1} M_{n-1}, 2 K_{n-1} M_{n-1}] for M_n"""
        if n < 1 or n > len(self.M):
            raise ValueError(f"no window for level {n} with {len(self.M)} known M")
        low = self.K_at(n - 1) * self.M[n - 1]
        return low, 2 * low

    def set_M(self, n: int, value: int):
        """Record M_n, dropping any return time chosen for a deeper level"""
        if n == 0:
            raise ValueError("M0 is fixed by configuration")
        del self.M[n:]
        if len(self.M) != n:
            raise ValueError(f"M_{n - 1} must be known before M_{n}")
        self.M.append(int(value))
        LOGGER.debug("schedule: M_%d = %d", n, value)

    def to_dict(self, strip=None) -> dict:
        out = {
            "M_n": list(self.M),
            "K_n": self.K,
            "kappa": self.kappa,
            "b_n": self.b,
            "b_inf": self.b_inf,
            "inverse_K_sum": self.inverse_K_sum,
        }
        if strip is not None:
            out.update(
                alpha_minus=self.alpha_minus(strip),
                alpha_plus=self.alpha_plus(strip),
                admissible=self.is_admissible(strip),
            )
        return out
