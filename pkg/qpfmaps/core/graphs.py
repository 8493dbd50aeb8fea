"""Invariant graphs by pullback and pushforward iteration.

Every grid value is an exact finite orbit: the attractor at theta is
f^N(theta - N omega, c+) and the repeller is f^-N(theta + N omega, e-).
No interpolation takes place while iterating. The base angles of step k
are always computed as theta -+ k omega from the grid, so two runs with
different N share their last steps exactly.
"""
# Standard imports
from dataclasses import dataclass
import math

# Custom imports
import numpy as np
from joblib import Parallel, delayed, cpu_count

from qpfmaps.core.errors import EscapeFlagError, OrderingError, OrbitEscapeError
from qpfmaps.commons import ESCAPE_EPSILON, DEFAULT_G, DEFAULT_N
import qpfmaps.commons as cm

LOGGER = cm.logger()

FORWARD = "forward"
BACKWARD = "backward"
# Tolerance of the attractor above repeller ordering
ORDER_TOLERANCE = 1e-9


@dataclass
class GraphSample:
    """Values of an invariant graph on a uniform circle grid

    ``escaped`` flags the grid points whose orbit left [e-, c+] (or had
    no preimage for a backward graph); their values are NaN.
    """

    thetas: np.ndarray
    values: np.ndarray
    direction: str
    iterations: int
    beta: float
    escaped: np.ndarray = None
    lyapunov: float = None

    def __post_init__(self):
        if self.escaped is None:
            self.escaped = np.zeros(self.values.shape, dtype=bool)

    @property
    def size(self) -> int:
        return self.thetas.size

    @property
    def is_absent(self) -> bool:
        """True if some orbit escaped, i.e. no invariant graph was found"""
        return bool(self.escaped.any())

    def summary(self) -> dict:
        finite = self.values[~self.escaped]
        return {
            "direction": self.direction,
            "beta": self.beta,
            "iterations": self.iterations,
            "G": self.size,
            "escaped": int(self.escaped.sum()),
            "min": float(finite.min()) if finite.size else None,
            "max": float(finite.max()) if finite.size else None,
            "lyapunov": self.lyapunov,
        }


@dataclass(frozen=True)
class PinchStats:
    min_gap: float
    mean_gap: float
    max_gap: float
    argmin_theta: float

    def to_dict(self) -> dict:
        return {
            "min_gap": self.min_gap,
            "mean_gap": self.mean_gap,
            "max_gap": self.max_gap,
            "argmin_theta": self.argmin_theta,
        }


def circle_grid(G: int) -> np.ndarray:
    return np.arange(G, dtype=float) / G


def _pullback_chunk(fam, beta, thetas, N, start, lower, early_exit):
    x = np.full(thetas.shape, start, dtype=float)
    escaped = np.zeros(thetas.shape, dtype=bool)
    for k in range(N, 0, -1):
        x = fam.eval(beta, np.mod(thetas - k * fam.omega, 1.0), x)
        escaped |= x < lower
        if early_exit and escaped.any():
            break
    return x, escaped


def _pushforward_chunk(fam, beta, thetas, N, start, upper):
    y = np.full(thetas.shape, start, dtype=float)
    flagged = np.zeros(thetas.shape, dtype=bool)
    with np.errstate(all="ignore"):
        for k in range(N, 0, -1):
            new = fam.inverse_eval(beta, np.mod(thetas + k * fam.omega, 1.0), y, strict=False)
            new = np.atleast_1d(new)
            flagged |= ~np.isfinite(new) | (new > upper)
            y = np.where(flagged, y, new)
    return y, flagged


def _run_chunks(worker, thetas, n_jobs):
    """Split the grid and run ``worker`` on every piece, keeping the order"""
    if n_jobs == 1:
        return worker(thetas)
    pieces = np.array_split(thetas, n_jobs if n_jobs > 0 else cpu_count())
    results = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(worker)(piece) for piece in pieces)
    values = np.concatenate([r[0] for r in results])
    flags = np.concatenate([r[1] for r in results])
    return values, flags


def pullback_attractor(fam, beta, N=DEFAULT_N, G=DEFAULT_G, strip=None, early_exit=False, n_jobs=1) -> GraphSample:
    """Return the N step pullback of the constant graph c+

    Args:
        strip: analysis strip giving c+ and e-; without it the family's
            default (c+ = pi/2, e- = 0) is used
        early_exit (bool): stop as soon as one orbit escapes; the values
            are then meaningless but the escape flags are exact
        n_jobs (int): joblib workers splitting the grid (threads)

    Examples:
        >>> graph = pullback_attractor(ArctanIntro(100), 0.0, N=200, G=64)
        >>> round(float(graph.values[0]), 4)
        1.5644
    """
    c_plus, e_minus = _boundaries(strip)
    if N < 0 or G < 2:
        raise ValueError(f"pullback needs N >= 0 and G >= 2, got N={N}, G={G}")
    thetas = circle_grid(G)
    lower = e_minus - ESCAPE_EPSILON
    values, escaped = _run_chunks(
        lambda piece: _pullback_chunk(fam, beta, piece, N, c_plus, lower, early_exit),
        thetas,
        n_jobs,
    )
    values = np.where(escaped, np.nan, values)
    if escaped.any():
        LOGGER.debug("pullback_attractor: %d of %d points escaped at beta=%s", escaped.sum(), G, beta)
    return GraphSample(thetas, values, FORWARD, N, float(beta), escaped)


def pushforward_repeller(fam, beta, N=DEFAULT_N, G=DEFAULT_G, strip=None, n_jobs=1) -> GraphSample:
    """Return the N step backward iterate of the constant graph e-

    Points without preimage, or pushed above c+, are flagged.
    """
    c_plus, e_minus = _boundaries(strip)
    if N < 0 or G < 2:
        raise ValueError(f"pushforward needs N >= 0 and G >= 2, got N={N}, G={G}")
    thetas = circle_grid(G)
    upper = c_plus + ESCAPE_EPSILON
    values, flagged = _run_chunks(
        lambda piece: _pushforward_chunk(fam, beta, piece, N, e_minus, upper),
        thetas,
        n_jobs,
    )
    values = np.where(flagged, np.nan, values)
    return GraphSample(thetas, values, BACKWARD, N, float(beta), flagged)


def _boundaries(strip):
    if strip is None:
        return math.pi / 2.0, 0.0
    return strip.c_plus, strip.e_minus


def escapes(fam, beta, N, G, strip=None, n_jobs=1) -> bool:
    """True if the pullback of c+ leaves the strip within N steps"""
    return pullback_attractor(fam, beta, N, G, strip, early_exit=True, n_jobs=n_jobs).is_absent


def lyapunov(fam, beta, graph: GraphSample) -> float:
    """Grid average of log |d_x f| along the graph, stored on the graph

    Raises:
        EscapeFlagError: the graph has escaped points
    """
    if graph.is_absent:
        raise EscapeFlagError(
            f"{graph.direction} graph at beta={graph.beta} has {int(graph.escaped.sum())} escaped points"
        )
    slope = fam.partials(beta, graph.thetas, graph.values).dx
    value = float(np.mean(np.log(np.abs(np.broadcast_to(slope, graph.values.shape)))))
    graph.lyapunov = value
    return value


def pinching(attractor: GraphSample, repeller: GraphSample) -> PinchStats:
    """Gap statistics of attractor - repeller over the common grid

    Raises:
        EscapeFlagError: one of the graphs is absent
        OrderingError: the attractor lies below the repeller somewhere
    """
    if attractor.size != repeller.size or not np.array_equal(attractor.thetas, repeller.thetas):
        raise ValueError("pinching needs graphs sampled on the same grid")
    for graph in (attractor, repeller):
        if graph.is_absent:
            raise EscapeFlagError(f"{graph.direction} graph at beta={graph.beta} is absent")

    gaps = attractor.values - repeller.values
    if gaps.min() < -ORDER_TOLERANCE:
        i = int(np.argmin(gaps))
        raise OrderingError(
            f"attractor below repeller by {-gaps[i]:.3e} at theta={attractor.thetas[i]}"
        )
    gaps = np.maximum(gaps, 0.0)
    i = int(np.argmin(gaps))
    return PinchStats(
        min_gap=float(gaps[i]),
        mean_gap=float(gaps.mean()),
        max_gap=float(gaps.max()),
        argmin_theta=float(attractor.thetas[i]),
    )


def finite_time_exponents(fam, beta, theta, x, n, bounds=None) -> tuple:
    """Return (1/n) log d_x f^n and (1/n) log d_x f^-n at (theta, x)

    The logarithms are accumulated step by step, which equals the log of
    the jet derivative without overflowing for long orbits.

    Raises:
        OrbitEscapeError: the forward orbit leaves ``bounds``
        NoPreimageError: the backward orbit has no preimage
    """
    if n < 1:
        raise ValueError(f"finite time exponents need n >= 1, got {n}")

    forward, y, t = 0.0, float(x), float(theta)
    for _ in range(n):
        p = fam.partials(beta, t, y)
        forward += math.log(abs(float(p.dx)))
        y = float(p.value)
        t = (t + fam.omega) % 1.0
        if bounds is not None and not (bounds[0] - ESCAPE_EPSILON <= y <= bounds[1] + ESCAPE_EPSILON):
            raise OrbitEscapeError(f"forward orbit left {bounds} at beta={beta}")

    backward, y, t = 0.0, float(x), float(theta)
    for _ in range(n):
        y = float(fam.inverse_eval(beta, t, y))
        t = (t - fam.omega) % 1.0
        backward -= math.log(abs(float(fam.partials(beta, t, y).dx)))

    return forward / n, backward / n


def invariance_residual(fam, beta, graph: GraphSample) -> float:
    """max |f(theta, phi(theta)) - phi(theta + omega)| with periodic linear interpolation"""
    if graph.is_absent:
        raise EscapeFlagError(f"{graph.direction} graph at beta={graph.beta} is absent")
    image = fam.eval(beta, graph.thetas, graph.values)
    shifted = np.interp(np.mod(graph.thetas + fam.omega, 1.0), graph.thetas, graph.values, period=1.0)
    return float(np.max(np.abs(image - shifted)))
