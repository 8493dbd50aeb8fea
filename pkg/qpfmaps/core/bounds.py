# Standard imports
from dataclasses import dataclass, asdict
import math

# Custom imports
import numpy as np

from qpfmaps.core.errors import HypothesisError, OrbitEscapeError
from qpfmaps.core.family.jets import iter_jets_backward
from qpfmaps.core.regions import (
    STRIP_POINTS,
    beta_interval,
    next_region,
    region_at,
    strip_functions,
)
import qpfmaps.commons as cm

LOGGER = cm.logger()

SERIES_CHUNK = 4096
SERIES_MAX_TERMS = 1 << 24


def c_tilde(a: float, rtol: float = 1e-12) -> float:
    """Return (2a / (a - 1)) * sum_{l >= 1} l^2 a^(1 - l)

    The series is summed until the remaining tail is below ``rtol`` times
    the partial sum.

    Examples:
        >>> round(c_tilde(2.0), 9)
        48.0

    Raises:
        HypothesisError: a <= 1, the series diverges
    """
    if not a > 1:
        raise HypothesisError(f"c_tilde needs an argument above 1, got {a}")
    log_a = math.log(a)
    total = 0.0
    for start in range(1, SERIES_MAX_TERMS, SERIES_CHUNK):
        l = np.arange(start, start + SERIES_CHUNK, dtype=float)
        terms = np.exp(2.0 * np.log(l) - (l - 1.0) * log_a)
        total += float(np.sum(terms))
        last = terms[-1]
        # terms decrease geometrically once l > 2 / log a
        ratio = ((l[-1] + 1.0) / l[-1]) ** 2 / a
        if l[-1] > 2.0 / log_a and ratio < 1 and last * ratio / (1.0 - ratio) <= rtol * total:
            break
    else:
        LOGGER.warning("c_tilde(%s): series truncated before reaching rtol", a)
    return 2.0 * a / (a - 1.0) * total


def _exponents(p: float, b: float) -> tuple:
    """Exponents of alpha defining alpha1 and alpha2 for a given b"""
    return 2.0 * b / p - 2.0 * p * (1.0 - b), 2.0 * b / p - 5.0 * (1.0 - b) * p


def c_of_alpha_b(alpha: float, p: float, b: float) -> float:
    """c(alpha, b) = 6 c_tilde(alpha2) + 5 c_tilde(alpha1)"""
    e1, e2 = _exponents(p, b)
    return 6.0 * c_tilde(alpha ** e2) + 5.0 * c_tilde(alpha ** e1)


def nu_bound(strip, b: float) -> float:
    """Lower bound s - c(alpha, b) S^2 alpha2^-1 for the strip curvature"""
    _, e2 = _exponents(strip.p, b)
    return strip.s - c_of_alpha_b(strip.alpha, strip.p, b) * strip.S ** 2 * strip.alpha ** (-e2)


@dataclass
class BoundsReport:
    n: int
    beta: float
    b_n: float
    M_n: int
    H_phi: float
    H_psi: float
    H_phi_bound: float
    H_psi_bound: float
    nu_lower: float
    nu_measured: float
    alpha1: float
    alpha2: float
    c_tilde_1: float
    c_tilde_2: float
    c_of_alpha_b: float
    nu_refined: float
    i0_smallness_ok: bool
    I_next: float
    geometric_bound: float
    strips_in_window: bool = True

    @property
    def heights_ok(self) -> bool:
        return self.H_phi <= self.H_phi_bound and self.H_psi <= self.H_psi_bound

    @property
    def geometric_ok(self) -> bool:
        return not self.geometric_bound < self.I_next

    def to_dict(self) -> dict:
        out = asdict(self)
        out.update(heights_ok=self.heights_ok, geometric_ok=self.geometric_ok)
        return out


def bounds_report(fam, strip, schedule, regions, n: int, rot=None, beta=None, points=STRIP_POINTS) -> BoundsReport:
    """Compare the closed form bounds of level n with their measured values

    Args:
        regions: list holding at least I_0..I_n at one parameter value, or
            None to compute them at ``beta`` (default beta_+(n))
        rot: rotation spec used by the level 0 smallness condition

    Raises:
        HypothesisError: b_n <= 5 p^2 / (2 + 5 p^2) or alpha1, alpha2 <= 1
    """
    b = schedule.b_at(n)
    p = strip.p
    threshold = 5.0 * p ** 2 / (2.0 + 5.0 * p ** 2)
    if not b > threshold:
        raise HypothesisError(f"b_{n} = {b} does not exceed 5p^2/(2+5p^2) = {threshold}")

    e1, e2 = _exponents(p, b)
    alpha1, alpha2 = strip.alpha ** e1, strip.alpha ** e2
    ct1, ct2 = c_tilde(alpha1), c_tilde(alpha2)
    c = 6.0 * ct2 + 5.0 * ct1
    nu_lower = strip.s - strip.S ** 2 * c / alpha2

    b1_squared = schedule.b_at(1) ** 2
    try:
        nu_refined = nu_bound(strip, b1_squared)
    except HypothesisError as e:
        LOGGER.warning("refined curvature bound unavailable: %s", e)
        nu_refined = math.nan

    if regions is None:
        if beta is None:
            beta = beta_interval(fam, strip, n, schedule, points)[1]
        region = region_at(fam, strip, beta, n, schedule, points)
        region0 = region_at(fam, strip, beta, 0, schedule, points)
    else:
        region, region0 = regions[n], regions[0]
        beta = region.beta

    M = schedule.M[n]
    try:
        sample = strip_functions(fam, strip, beta, n, schedule, region, points)
        in_window = True
    except OrbitEscapeError as e:
        LOGGER.warning("level %d: %s, heights measured on the unbounded strips", n, e)
        sample = strip_functions(fam, strip, beta, n, schedule, region, points, check_bounds=False)
        in_window = False
    contraction = strip.alpha_c ** b * strip.alpha_u ** (1.0 - b)
    expansion = strip.alpha_e ** b * strip.alpha_l ** (1.0 - b)

    nu_measured = sample.nu_measured
    H_phi, H_psi = sample.H_phi, sample.H_psi
    I_next = next_region(fam, strip, beta, n, schedule, region, points).arc.length
    if nu_measured > 0:
        geometric = math.sqrt(8.0) * math.sqrt((H_phi + H_psi) / nu_measured)
    else:
        geometric = math.nan

    smallness = True
    if rot is not None:
        horizon = 2 * schedule.K_at(0) * schedule.M[0]
        smallness = 2.0 * region0.arc.length < rot.dio_C * horizon ** (-rot.dio_eta)

    report = BoundsReport(
        n=n,
        beta=float(beta),
        b_n=b,
        M_n=M,
        H_phi=H_phi,
        H_psi=H_psi,
        H_phi_bound=contraction ** M * strip.width_C,
        H_psi_bound=expansion ** (-M) * strip.width_E,
        nu_lower=nu_lower,
        nu_measured=nu_measured,
        alpha1=alpha1,
        alpha2=alpha2,
        c_tilde_1=ct1,
        c_tilde_2=ct2,
        c_of_alpha_b=c,
        nu_refined=nu_refined,
        i0_smallness_ok=bool(smallness),
        I_next=I_next,
        geometric_bound=geometric,
        strips_in_window=in_window,
    )
    LOGGER.info("bounds_report: level %d at beta=%s", n, beta)
    return report


def backward_expansion_audit(fam, strip, schedule, n: int, beta: float, region=None, points: int = 17) -> dict:
    """Check d_x f^-k >= (alpha_c^b alpha_u^(1-b))^-k on f^(M_n - 1)(A_n)

    Start points are the images after M_n - 1 steps of a grid of
    (I_n - (M_n - 1) omega) x C. Backward jets are followed for
    k = 1..M_n - 1 and the worst ratio to the bound is reported in log
    scale (non negative when the bound holds).
    """
    if region is None:
        region = region_at(fam, strip, beta, n, schedule)
    M = schedule.M[n]
    if region.is_empty or M < 2:
        return {"n": n, "beta": beta, "checked": 0, "min_log_margin": math.inf, "holds": True}

    b = schedule.b_at(n)
    log_rate = math.log(strip.alpha_c ** b * strip.alpha_u ** (1.0 - b))
    thetas = region.arc.sample(points)
    xs = np.linspace(strip.c_minus, strip.c_plus, points)
    theta0, x0 = np.meshgrid(thetas - (M - 1) * fam.omega, xs)
    theta0, x0 = theta0.ravel(), x0.ravel()

    x = x0
    for k in range(M - 1):
        x = fam.eval(beta, np.mod(theta0 + k * fam.omega, 1.0), x)
    end = np.mod(theta0 + (M - 1) * fam.omega, 1.0)

    margin, worst_k = math.inf, 0
    with np.errstate(all="ignore"):
        for k, jet in enumerate(iter_jets_backward(fam, beta, end, x, M - 1, strict=False), 1):
            logs = np.log(np.abs(jet.dx)) + k * log_rate
            logs = logs[np.isfinite(logs)]
            if logs.size and logs.min() < margin:
                margin, worst_k = float(logs.min()), k

    return {
        "n": n,
        "beta": float(beta),
        "checked": int(x0.size),
        "min_log_margin": margin,
        "worst_k": worst_k,
        "holds": margin >= -1e-9,
    }
