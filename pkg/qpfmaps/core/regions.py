"""Critical regions of the parameter exclusion argument.

The level 0 region is the sublevel set {theta : f(beta, theta, e+) <= c-}.
Level n + 1 is obtained inside level n from the strips

    phi_n^+-(theta) = f^{M_n}(theta - M_n omega, c+-)
    psi_n^+-(theta) = f^{-M_n}(theta + M_n omega, e+-)

sampled on I_n + omega: it is the set where phi_n^- <= psi_n^+, shifted
back by omega. The admissible parameter interval B(n + 1) is bounded by
the two tangencies phi^- = psi^+ and phi^+ = psi^-.

Everything here works at one parameter value at a time; inductions over
n are sequential.
"""
# Standard imports
from dataclasses import dataclass, field
import math

# Custom imports
import cachetools
import numpy as np
from scipy.optimize import brentq, minimize_scalar

from qpfmaps.core.errors import (
    NonConvexRegionError,
    NotFoundError,
    EmptyIntervalError,
    HypothesisError,
    NoAdmissibleMError,
    OrbitEscapeError,
)
from qpfmaps.core.family import propagate, Jet2
from qpfmaps.core.torus import Arc, arcs_gap, translates, wrap
from qpfmaps.commons import REGION_GRID, BISECTION_TOL
import qpfmaps.commons as cm

LOGGER = cm.logger()

# Number of points sampling a region when strips are evaluated
STRIP_POINTS = 257
# Translates examined at once by the (F) checks
GAP_CHUNK = 1 << 20

_REGION0_CACHE = cachetools.LRUCache(maxsize=4096)
_BOUNDS0_CACHE = cachetools.LRUCache(maxsize=256)
_REGION_CACHE = cachetools.LRUCache(maxsize=4096)


def clear_caches():
    """Forget every memoised region and parameter bound"""
    _REGION0_CACHE.clear()
    _BOUNDS0_CACHE.clear()
    _REGION_CACHE.clear()


@dataclass(frozen=True)
class CriticalRegion:
    level: int
    beta: float
    arc: Arc

    @property
    def is_empty(self) -> bool:
        return self.arc.is_empty

    def to_dict(self) -> dict:
        return {"level": self.level, "beta": self.beta, f"I_{self.level}": self.arc.to_dict()}


def _circle_minimum(func, grid: int):
    """Minimum of a 1-periodic function: grid scan then bounded refinement"""
    thetas = np.arange(grid) / grid
    values = func(thetas)
    i = int(np.argmin(values))
    h = 1.0 / grid
    res = minimize_scalar(
        lambda t: float(func(np.mod(t, 1.0))),
        bounds=(thetas[i] - h, thetas[i] + h),
        method="bounded",
        options={"xatol": 1e-14},
    )
    if res.success and res.fun < values[i]:
        return wrap(res.x), float(res.fun)
    return float(thetas[i]), float(values[i])


def _point_or_small_arc(func, center: float, value: float, reach: float) -> Arc:
    """Arc around an isolated minimum found below or at zero"""
    if value == 0.0:
        return Arc(center, 0.0)
    left = brentq(func, center - reach, center, xtol=1e-15)
    right = brentq(func, center, center + reach, xtol=1e-15)
    return Arc.from_endpoints(left, right)


def critical_region0(fam, strip, beta: float, grid: int = REGION_GRID) -> CriticalRegion:
    """Return I_0 = {theta : f(beta, theta, e+) <= c-}

    The set is scanned on ``grid`` points starting at the maximum of the
    defining function, then each endpoint is refined by root finding.

    Raises:
        NonConvexRegionError: the sublevel set has more than one component
    """
    key = cachetools.keys.hashkey(fam.key(), strip, float(beta), grid)
    if key in _REGION0_CACHE:
        return _REGION0_CACHE[key]

    def level(theta):
        return fam.eval(beta, theta, strip.e_plus) - strip.c_minus

    thetas = np.arange(grid) / grid
    values = level(thetas)
    inside = values <= 0

    if inside.all():
        arc = Arc.full()
    elif not inside.any():
        center, value = _circle_minimum(level, grid)
        if value <= 0:
            arc = _point_or_small_arc(
                lambda t: float(level(np.mod(t, 1.0))), center, value, 1.0 / grid
            )
        else:
            arc = Arc.empty()
    else:
        # Rotate so that the scan starts and ends outside the region
        start = int(np.argmax(values))
        order = np.roll(np.arange(grid), -start)
        mask = inside[order]
        components = int(np.count_nonzero(mask[1:] & ~mask[:-1]))
        if components > 1:
            raise NonConvexRegionError(
                f"I_0 at beta={beta} has {components} components"
            )
        first = int(np.argmax(mask))
        last = grid - 1 - int(np.argmax(mask[::-1]))
        t = thetas[start] + np.arange(grid + 1) / grid
        scalar = lambda u: float(level(np.mod(u, 1.0)))
        left = brentq(scalar, t[first - 1], t[first], xtol=1e-15)
        right = brentq(scalar, t[last], t[last + 1], xtol=1e-15)
        arc = Arc.from_endpoints(left, right)

    region = CriticalRegion(0, float(beta), arc)
    _REGION0_CACHE[key] = region
    return region


def beta_bounds0(fam, strip, grid: int = REGION_GRID) -> tuple:
    """Return the level 0 admissible interval (beta_-(0), beta_+(0))

    beta_+(0) is the smallest beta for which f(beta, theta, c+) reaches e-
    for some theta. beta_-(0) is the largest beta <= beta_+(0) such that
    f(beta, theta, c-) >= e+ for every theta.

    Raises:
        NotFoundError: no sign change on [0, 1]
    """
    key = cachetools.keys.hashkey(fam.key(), strip, grid)
    if key in _BOUNDS0_CACHE:
        return _BOUNDS0_CACHE[key]

    def reach_e_minus(beta):
        _, value = _circle_minimum(lambda t: fam.eval(beta, t, strip.c_plus), grid)
        return value - strip.e_minus

    def above_e_plus(beta):
        _, value = _circle_minimum(lambda t: fam.eval(beta, t, strip.c_minus), grid)
        return value - strip.e_plus

    lo, hi = reach_e_minus(0.0), reach_e_minus(1.0)
    if not (lo > 0 >= hi):
        raise NotFoundError(
            f"{fam.kind}: min f(beta, theta, c+) - e- has no sign change on [0, 1] "
            f"({lo:.6g}, {hi:.6g})"
        )
    beta_plus = 1.0 if hi == 0 else brentq(reach_e_minus, 0.0, 1.0, xtol=BISECTION_TOL)

    if above_e_plus(0.0) < 0:
        raise NotFoundError(f"{fam.kind}: f(0, theta, c-) < e+ for some theta")
    if above_e_plus(beta_plus) >= 0:
        beta_minus = beta_plus
    else:
        beta_minus = brentq(above_e_plus, 0.0, beta_plus, xtol=BISECTION_TOL)

    LOGGER.debug("beta_bounds0: [%.12f, %.12f]", beta_minus, beta_plus)
    _BOUNDS0_CACHE[key] = (beta_minus, beta_plus)
    return beta_minus, beta_plus


@dataclass
class StripSample:
    """The four strip functions at level n sampled on I_n + omega

    Each strip is a :class:`Jet2`; ``x`` is the value and ``dtheta``,
    ``dtheta2`` the first two theta derivatives. Backward strips are
    +-inf where e+- has no preimage.
    """

    level: int
    beta: float
    M: int
    thetas: np.ndarray
    phi_minus: Jet2
    phi_plus: Jet2
    psi_minus: Jet2
    psi_plus: Jet2

    @property
    def is_empty(self) -> bool:
        return self.thetas.size == 0

    @property
    def gap_minus(self):
        """phi^- - psi^+, non positive exactly on the next region"""
        return self.phi_minus.x - self.psi_plus.x

    @property
    def gap_plus(self):
        return self.phi_plus.x - self.psi_minus.x

    @property
    def H_phi(self) -> float:
        if self.is_empty:
            return 0.0
        return float(np.max(self.phi_plus.x - self.phi_minus.x))

    @property
    def H_psi(self) -> float:
        if self.is_empty:
            return 0.0
        with np.errstate(invalid="ignore"):
            height = self.psi_plus.x - self.psi_minus.x
        height = height[np.isfinite(height)]
        return float(np.max(height)) if height.size else math.inf

    @property
    def nu_measured(self) -> float:
        """Grid minimum of the second theta derivative of phi^- - psi^+"""
        if self.is_empty:
            return math.nan
        with np.errstate(invalid="ignore"):
            curvature = self.phi_minus.dtheta2 - self.psi_plus.dtheta2
        curvature = curvature[np.isfinite(curvature)]
        return float(np.min(curvature)) if curvature.size else math.nan

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "beta": self.beta,
            "M_n": self.M,
            "theta": self.thetas.tolist(),
            "phi_minus": np.asarray(self.phi_minus.x).tolist(),
            "phi_plus": np.asarray(self.phi_plus.x).tolist(),
            "psi_minus": np.asarray(self.psi_minus.x).tolist(),
            "psi_plus": np.asarray(self.psi_plus.x).tolist(),
            "H_phi": self.H_phi,
            "H_psi": self.H_psi,
            "nu_measured": self.nu_measured,
        }


def _strips_at(fam, strip, beta, M, thetas, check_bounds=True):
    bounds = strip.bounds if check_bounds else None
    before = thetas - M * fam.omega
    after = thetas + M * fam.omega
    with np.errstate(all="ignore"):
        phi_minus = propagate(fam, beta, before, np.full_like(thetas, strip.c_minus), M, bounds=bounds)
        phi_plus = propagate(fam, beta, before, np.full_like(thetas, strip.c_plus), M, bounds=bounds)
        psi_minus = propagate(
            fam, beta, after, np.full_like(thetas, strip.e_minus), M, backward=True, strict=False
        )
        psi_plus = propagate(
            fam, beta, after, np.full_like(thetas, strip.e_plus), M, backward=True, strict=False
        )
    if check_bounds and not (
        np.all(np.isfinite(phi_minus.x)) and np.all(np.isfinite(phi_plus.x))
    ):
        raise OrbitEscapeError(f"forward strip is not finite at beta={beta}")
    return phi_minus, phi_plus, psi_minus, psi_plus


def strip_functions(
    fam,
    strip,
    beta: float,
    n: int,
    schedule,
    region: CriticalRegion = None,
    points: int = STRIP_POINTS,
    check_bounds: bool = True,
) -> StripSample:
    """Sample phi_n^+-, psi_n^+- and their theta derivatives on I_n + omega

    Args:
        region: I_n at ``beta``; computed with :func:`region_at` if omitted
        check_bounds: raise OrbitEscapeError if a forward orbit leaves
            [e-, c+]

    Raises:
        OrbitEscapeError: beta is outside the admissible set
    """
    if region is None:
        region = region_at(fam, strip, beta, n, schedule, points)
    M = schedule.M[n]
    thetas = region.arc.shift(fam.omega).sample(points)
    jets = _strips_at(fam, strip, beta, M, thetas, check_bounds)
    return StripSample(n, float(beta), M, thetas, *jets)


def _scalar_gap(fam, strip, beta, M, which="minus"):
    """Return u -> (phi^- - psi^+)(u) (or phi^+ - psi^-) as a scalar function"""
    start, end = (strip.c_minus, strip.e_plus) if which == "minus" else (strip.c_plus, strip.e_minus)

    def gap(theta):
        theta = np.asarray([theta], dtype=float)
        with np.errstate(all="ignore"):
            phi = propagate(fam, beta, theta - M * fam.omega, np.full(1, start), M)
            psi = propagate(
                fam, beta, theta + M * fam.omega, np.full(1, end), M, backward=True, strict=False
            )
        return float(phi.x[0] - psi.x[0])

    return gap


def next_region(
    fam,
    strip,
    beta: float,
    n: int,
    schedule,
    region: CriticalRegion = None,
    points: int = STRIP_POINTS,
) -> CriticalRegion:
    """Return I_{n+1} at ``beta`` from the strips of level n

    The result is the sublevel set {phi_n^- <= psi_n^+} on I_n + omega
    shifted back by omega. It is always contained in I_n. If the set
    splits, a warning is logged and its hull is returned.
    """
    if region is None:
        region = region_at(fam, strip, beta, n, schedule, points)
    if region.is_empty:
        return CriticalRegion(n + 1, float(beta), Arc.empty())

    M = schedule.M[n]
    arc = region.arc
    center = arc.center + fam.omega
    offsets = np.linspace(-arc.half_width, arc.half_width, points)
    # orbits of c- may fall through E, they still belong to the sublevel set
    sample = strip_functions(fam, strip, beta, n, schedule, region, points, check_bounds=False)
    values = sample.gap_minus
    inside = values <= 0
    scalar = _scalar_gap(fam, strip, beta, M, "minus")
    along = lambda u: scalar(center + u)

    if not inside.any():
        i = int(np.argmin(values))
        lo = offsets[max(i - 1, 0)]
        hi = offsets[min(i + 1, points - 1)]
        if hi <= lo:
            return CriticalRegion(n + 1, float(beta), Arc.empty())
        res = minimize_scalar(along, bounds=(lo, hi), method="bounded", options={"xatol": 1e-15})
        if not (res.success and res.fun <= 0):
            return CriticalRegion(n + 1, float(beta), Arc.empty())
        if res.fun == 0:
            start = stop = float(res.x)
        else:
            start = brentq(along, lo, res.x, xtol=1e-15) if along(lo) > 0 else lo
            stop = brentq(along, res.x, hi, xtol=1e-15) if along(hi) > 0 else hi
    else:
        components = int(inside[0]) + int(np.count_nonzero(inside[1:] & ~inside[:-1]))
        if components > 1:
            LOGGER.warning(
                "I_%d at beta=%s splits into %d components, using the hull",
                n + 1,
                beta,
                components,
            )
        first = int(np.argmax(inside))
        last = points - 1 - int(np.argmax(inside[::-1]))
        start = offsets[0] if first == 0 else brentq(along, offsets[first - 1], offsets[first], xtol=1e-15)
        stop = offsets[-1] if last == points - 1 else brentq(along, offsets[last], offsets[last + 1], xtol=1e-15)

    start = max(start, -arc.half_width)
    stop = min(stop, arc.half_width)
    half_width = max(0.0, 0.5 * (stop - start))
    candidate = Arc(arc.center + 0.5 * (start + stop), half_width)
    # rounding of the center may push the new arc out of I_n
    for _ in range(32):
        if arc.contains_arc(candidate):
            break
        half_width = max(0.0, half_width - 4.0 * np.spacing(1.0))
        candidate = Arc(candidate.center, half_width)
    else:
        candidate = Arc(arc.center, 0.0)

    LOGGER.debug("next_region: I_%d at beta=%s has length %.3e", n + 1, beta, candidate.length)
    return CriticalRegion(n + 1, float(beta), candidate)


def region_at(fam, strip, beta: float, n: int, schedule, points: int = STRIP_POINTS) -> CriticalRegion:
    """Return I_n at ``beta`` by running the region recursion from level 0"""
    key = cachetools.keys.hashkey(fam.key(), strip, float(beta), n, tuple(schedule.M[:n]), points)
    if key in _REGION_CACHE:
        return _REGION_CACHE[key]
    region = critical_region0(fam, strip, beta)
    for level in range(n):
        region = next_region(fam, strip, beta, level, schedule, region, points)
    _REGION_CACHE[key] = region
    return region


def regions_at(fam, strip, beta: float, n: int, schedule, points: int = STRIP_POINTS) -> list:
    """Return [I_0, ..., I_n] at ``beta``"""
    return [region_at(fam, strip, beta, level, schedule, points) for level in range(n + 1)]


def strip_gap(fam, strip, beta: float, n: int, schedule, which="minus", points=STRIP_POINTS) -> float:
    """Minimum over I_n + omega of phi^- - psi^+ (or phi^+ - psi^-)

    +inf when I_n is empty. Orbits are not bounded here so that the
    function stays defined across the whole bracket of a bisection.
    """
    region = region_at(fam, strip, beta, n, schedule, points)
    if region.is_empty:
        return math.inf
    M = schedule.M[n]
    sample = strip_functions(fam, strip, beta, n, schedule, region, points, check_bounds=False)
    values = sample.gap_minus if which == "minus" else sample.gap_plus
    i = int(np.argmin(values))
    best = float(values[i])
    arc = region.arc
    if arc.half_width == 0:
        return best
    h = 2.0 * arc.half_width / (points - 1)
    u0 = -arc.half_width + i * h
    lo, hi = max(u0 - h, -arc.half_width), min(u0 + h, arc.half_width)
    center = arc.center + fam.omega
    scalar = _scalar_gap(fam, strip, beta, M, which)
    res = minimize_scalar(lambda u: scalar(center + u), bounds=(lo, hi), method="bounded", options={"xatol": 1e-15})
    if res.success:
        best = min(best, float(res.fun))
    return best


def beta_interval(fam, strip, n: int, schedule, points: int = STRIP_POINTS, tol=BISECTION_TOL) -> tuple:
    """Return B(n); B(0) comes from :func:`beta_bounds0`"""
    if n == 0:
        return beta_bounds0(fam, strip)
    return admissible_interval(fam, strip, n - 1, schedule, points=points, tol=tol)


def _last_positive(func, lo, hi, tol, name):
    f_lo, f_hi = func(lo), func(hi)
    if f_lo < 0 or f_hi > 0:
        raise EmptyIntervalError(
            f"{name} has no sign change on [{lo}, {hi}] ({f_lo:.3g}, {f_hi:.3g})"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if func(mid) > 0:
            lo = mid
        else:
            hi = mid
        LOGGER.debug("%s: bracket [%.15f, %.15f]", name, lo, hi)
    return 0.5 * (lo + hi)


def admissible_interval(
    fam,
    strip,
    n: int,
    schedule,
    bracket: tuple = None,
    points: int = STRIP_POINTS,
    tol: float = BISECTION_TOL,
) -> tuple:
    """Return B(n + 1) = (beta_-(n + 1), beta_+(n + 1)) inside B(n)

    beta_-(n + 1) is the tangency min(phi_n^- - psi_n^+) = 0 and
    beta_+(n + 1) the tangency min(phi_n^+ - psi_n^-) = 0, both found by
    bisection in beta to ``tol``.

    Raises:
        EmptyIntervalError: a tangency is not bracketed by B(n)
    """
    lo, hi = bracket or beta_interval(fam, strip, n, schedule, points, tol)

    def lower(beta):
        return strip_gap(fam, strip, beta, n, schedule, "minus", points)

    def upper(beta):
        return strip_gap(fam, strip, beta, n, schedule, "plus", points)

    beta_minus = _last_positive(lower, lo, hi, tol, f"beta_-({n + 1})")
    beta_plus = _last_positive(upper, lo, hi, tol, f"beta_+({n + 1})")
    beta_minus = min(beta_minus, beta_plus)
    LOGGER.info("B(%d) = [%.12f, %.12f]", n + 1, beta_minus, beta_plus)
    return beta_minus, beta_plus


@dataclass
class ArcUnion:
    """Finite union of translates I_j + l omega

    ``parts`` holds one (arc, shifts) pair per level; every translate of
    one level has the same half width.
    """

    omega: float
    parts: list = field(default_factory=list)

    def add(self, arc: Arc, shifts):
        if not arc.is_empty and len(shifts):
            self.parts.append((arc, np.asarray(shifts, dtype=float)))

    @property
    def is_empty(self) -> bool:
        return not self.parts

    def centers(self):
        for arc, shifts in self.parts:
            yield wrap(arc.center + shifts * self.omega), arc.half_width

    def contains(self, theta):
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        out = np.zeros(theta.shape, dtype=bool)
        for centers, half_width in self.centers():
            d = np.abs(np.mod(theta[:, None] - centers[None, :], 1.0))
            out |= np.any(np.minimum(d, 1.0 - d) <= half_width, axis=1)
        return out

    def gap(self, arc: Arc) -> float:
        """Distance between ``arc`` and the union, inf if either is empty"""
        return min(
            (arcs_gap(arc, centers, half_width) for centers, half_width in self.centers()),
            default=math.inf,
        )

    def measure_bound(self) -> float:
        return float(sum(2.0 * arc.half_width * len(shifts) for arc, shifts in self.parts))


def union_of_translates(regions: list, schedule, rot, n: int, low, high) -> ArcUnion:
    """Union over j <= n of I_j + l omega for low(M_j) <= l <= high(M_j)

    An empty union is returned for n < 0.
    """
    union = ArcUnion(rot.omega)
    for j in range(n + 1):
        M = schedule.M[j]
        union.add(regions[j].arc, np.arange(low(M), high(M) + 1))
    return union


def z_minus_set(regions, schedule, rot, n) -> ArcUnion:
    return union_of_translates(regions, schedule, rot, n, lambda M: -(M - 2), lambda M: 0)


def z_plus_set(regions, schedule, rot, n) -> ArcUnion:
    return union_of_translates(regions, schedule, rot, n, lambda M: 1, lambda M: M)


def v_set(regions, schedule, rot, n) -> ArcUnion:
    return union_of_translates(regions, schedule, rot, n, lambda M: 1, lambda M: M + 1)


def w_set(regions, schedule, rot, n) -> ArcUnion:
    return union_of_translates(regions, schedule, rot, n, lambda M: -(M - 1), lambda M: 0)


def return_gap(arc: Arc, rot, horizon: int) -> float:
    """Distance between ``arc`` and its translates arc + k omega, 1 <= k <= horizon"""
    if arc.is_empty:
        return math.inf
    gap = math.inf
    for start in range(1, horizon + 1, GAP_CHUNK):
        ks = np.arange(start, min(start + GAP_CHUNK, horizon + 1))
        gap = min(gap, arcs_gap(arc, translates(arc, rot, ks), arc.half_width))
        if gap == 0:
            break
    return gap


@dataclass
class FReport:
    """Combinatorial conditions (F1), (F1)' and (F2) at levels 0..n

    One row per level j with the exact verdicts, the return gap and the
    Diophantine sufficient bound 2|I_j| < C (2 K_j M_j)^-eta.
    """

    level: int
    rows: list = field(default_factory=list)
    measures: dict = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return all(row["F1"] and row["F1_prime"] and row["F2"] for row in self.rows)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "all_hold": self.all_hold,
            "levels": self.rows,
            "measures": self.measures,
        }


def _f2_holds(arc: Arc, M: int, prior: ArcUnion, rot) -> bool:
    if arc.is_empty or prior.is_empty:
        return True
    back = arc.shift(-(M - 1) * rot.omega)
    forth = arc.shift((M + 1) * rot.omega)
    return prior.gap(back) > 0 and prior.gap(forth) > 0


def check_F_conditions(regions: list, schedule, rot, n: int) -> FReport:
    """Evaluate (F1)_j, (F1)'_j and (F2)_j for j = 0..n with arc arithmetic

    ``regions`` holds I_0..I_n at one parameter value and the schedule
    must know M_0..M_n. Empty regions satisfy every condition.
    """
    report = FReport(level=n)
    for j in range(n + 1):
        arc = regions[j].arc
        M, K = schedule.M[j], schedule.K_at(j)
        horizon = 2 * K * M
        gap = return_gap(arc, rot, horizon)
        bound = rot.dio_C * horizon ** (-rot.dio_eta)
        prior = union_of_translates(regions, schedule, rot, j - 1, lambda m: -(m - 1), lambda m: m + 1)
        report.rows.append(
            {
                "j": j,
                "length": arc.length,
                "horizon": horizon,
                "gap": gap,
                "F1": gap > 0,
                "F1_prime": gap > arc.length,
                "F2": _f2_holds(arc, M, prior, rot),
                "dio_bound": bound,
                "dio_implies_F1_prime": 2.0 * arc.length < bound,
            }
        )

    report.measures = {
        name: builder(regions, schedule, rot, n).measure_bound()
        for name, builder in (
            ("Z_minus", z_minus_set),
            ("Z_plus", z_plus_set),
            ("V", v_set),
            ("W", w_set),
        )
    }
    LOGGER.debug("check_F_conditions: level %d all hold = %s", n, report.all_hold)
    return report


def choose_Mn(regions: list, schedule, rot, n: int) -> int:
    """Return the smallest M_n of the window for which (F2)_n holds

    ``regions`` holds I_0..I_n at beta_+(n); by monotonicity of the regions
    in beta the choice is valid on the whole of B(n).

    Raises:
        HypothesisError: the sum of 1/K_j for j < n exceeds 1/6
        NoAdmissibleMError: no M in [K_{n-1} M_{n-1}, 2 K_{n-1} M_{n-1}]
    """
    inverse_sum = sum(1.0 / schedule.K_at(j) for j in range(n))
    if inverse_sum > 1.0 / 6.0:
        raise HypothesisError(
            f"sum of 1/K_j for j < {n} is {inverse_sum}, it must not exceed 1/6"
        )

    low, high = schedule.window(n)
    arc = regions[n].arc
    prior = union_of_translates(regions, schedule, rot, n - 1, lambda m: -(m - 1), lambda m: m + 1)
    if arc.is_empty or prior.is_empty:
        return low

    candidates = np.arange(low, high + 1)
    for start in range(0, candidates.size, 4096):
        Ms = candidates[start:start + 4096]
        ok = np.ones(Ms.size, dtype=bool)
        for shifts in (-(Ms - 1), Ms + 1):
            moved = wrap(arc.center + shifts * rot.omega)
            for centers, half_width in prior.centers():
                d = np.abs(np.mod(moved[:, None] - centers[None, :], 1.0))
                d = np.minimum(d, 1.0 - d) - arc.half_width - half_width
                ok &= np.min(d, axis=1) > 0
        if ok.any():
            M = int(Ms[np.argmax(ok)])
            LOGGER.debug("choose_Mn: M_%d = %d in [%d, %d]", n, M, low, high)
            return M

    raise NoAdmissibleMError(f"no M_{n} in [{low}, {high}] satisfies (F2)_{n}")


def orbit_counters(fam, strip, beta: float, theta0: float, x0: float, steps: int, region0: Arc = None) -> dict:
    """Count the steps of a forward orbit spent in each part of the strip

    P counts steps with x in C and theta outside I_0, Q steps with x in E
    and theta outside I_0 + omega, ``critical`` steps with theta in I_0.
    """
    if region0 is None:
        region0 = critical_region0(fam, strip, beta).arc
    shifted = region0.shift(fam.omega)
    counters = {"steps": 0, "P": 0, "Q": 0, "critical": 0, "escaped": False}
    theta, x = float(theta0), float(x0)
    for _ in range(steps):
        in_region = bool(region0.contains(theta))
        if strip.c_minus <= x <= strip.c_plus and not in_region:
            counters["P"] += 1
        if strip.e_minus <= x <= strip.e_plus and not shifted.contains(theta):
            counters["Q"] += 1
        counters["critical"] += int(in_region)
        counters["steps"] += 1
        x = float(fam.eval(beta, theta, x))
        theta = wrap(theta + fam.omega)
        if x < strip.e_minus - cm.ESCAPE_EPSILON:
            counters["escaped"] = True
            break
    return counters


def induction(fam, strip, schedule, rot, n_max: int, points: int = STRIP_POINTS) -> list:
    """Run the region induction for levels 0..n_max

    At each level the admissible interval B(n) is located, the regions
    are computed at beta_+(n), M_n is chosen (n >= 1) and the (F)
    conditions are checked. The schedule is extended in place.

    The induction stops at the first level without an admissible M_n; that
    level is recorded with an "error" entry and no (F) report.
    """
    levels = []
    interval = beta_bounds0(fam, strip)
    for n in range(n_max + 1):
        beta = interval[1]
        regions = regions_at(fam, strip, beta, n, schedule, points)
        level = {
            "n": n,
            "beta_minus": interval[0],
            "beta_plus": interval[1],
            f"I_{n}": regions[n].arc.to_dict(),
            "K_n": schedule.K_at(n),
            "b_n": schedule.b_at(n),
        }
        levels.append(level)
        if n >= 1:
            try:
                schedule.set_M(n, choose_Mn(regions, schedule, rot, n))
            except NoAdmissibleMError as e:
                LOGGER.warning("level %d: %s", n, e)
                level.update(M_n=None, error=str(e))
                break
        level.update(M_n=schedule.M[n], F=check_F_conditions(regions, schedule, rot, n).to_dict())
        LOGGER.info("level %d: B = [%.12f, %.12f], |I| = %.3e", n, *interval, regions[n].arc.length)
        if n < n_max:
            interval = admissible_interval(fam, strip, n, schedule, bracket=interval, points=points)
    return levels
