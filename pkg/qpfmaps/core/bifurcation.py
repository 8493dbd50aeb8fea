# Standard imports
from dataclasses import dataclass, field
import math

# Custom imports
import numpy as np
import progressbar
from joblib import Parallel, delayed

from qpfmaps.core.errors import (
    AnalysisError,
    OrderingError,
    PredicateConstantError,
    ProbeRangeError,
)
from qpfmaps.core.graphs import (
    escapes,
    finite_time_exponents,
    lyapunov,
    pinching,
    pullback_attractor,
    pushforward_repeller,
)
from qpfmaps.core.regions import beta_bounds0
from qpfmaps.commons import (
    DEFAULT_G,
    DEFAULT_N,
    DEFAULT_N_MAX,
    LYAPUNOV_DELTA,
    PINCH_EPSILON_FACTOR,
    PROBE_FACTOR,
)
import qpfmaps.commons as cm

LOGGER = cm.logger()

SMOOTH = "Smooth"
NON_SMOOTH = "NonSmooth"
UNDETERMINED = "Undetermined"

# Orbit length of the sink-source candidate exponents
SINK_SOURCE_STEPS = 16
# Shortest orbit tried by the sink-source search
SINK_SOURCE_MIN_STEPS = 4
# Fibre points scanned between the graphs
SINK_SOURCE_POINTS = 64


def sink_source_search(
    fam, beta, theta, lower, upper, steps=SINK_SOURCE_STEPS, points=SINK_SOURCE_POINTS
) -> dict:
    """Look for a point of the fibre over theta with both exponents positive

    The fibre segment strictly between ``lower`` (repeller) and ``upper``
    (attractor) is scanned for orbit lengths doubling from
    SINK_SOURCE_MIN_STEPS up to ``steps``. The kept point is the longest
    orbit with both exponents positive, else the best min(forward, backward)
    seen; ``ok`` is False when no point qualifies.
    """
    lengths = []
    n = min(SINK_SOURCE_MIN_STEPS, steps)
    while n < steps:
        lengths.append(n)
        n *= 2
    lengths.append(steps)

    lower, upper = sorted((float(lower), float(upper)))
    xs = np.linspace(lower, upper, points + 2)[1:-1]
    if upper <= lower:
        xs = np.array([lower])

    best, best_key, errors = None, None, 0
    for n in lengths:
        for x in xs:
            try:
                forward, backward = finite_time_exponents(fam, beta, theta, x, n)
            except AnalysisError:
                errors += 1
                continue
            ok = forward > 0 and backward > 0
            key = (ok, n if ok else 0, min(forward, backward))
            if best_key is None or key > best_key:
                best_key = key
                best = {
                    "theta": float(theta),
                    "x": float(x),
                    "steps": n,
                    "forward": forward,
                    "backward": backward,
                    "ok": ok,
                }

    if best is None:
        LOGGER.warning("sink-source search: no orbit of the fibre over %s is defined", theta)
        return {"theta": float(theta), "steps": steps, "ok": False, "error": "no defined orbit"}
    if errors:
        LOGGER.debug("sink-source search: %d orbits left the domain", errors)
    LOGGER.info(
        "sink-source search at theta=%s: x=%s n=%d forward=%.4g backward=%.4g ok=%s",
        theta, best["x"], best["steps"], best["forward"], best["backward"], best["ok"],
    )
    return best


@dataclass
class BifurcationResult:
    """Critical parameter with the evidence used to label the bifurcation

    The labels come from heuristic thresholds which are reported in
    ``thresholds``.
    """

    beta_c: float
    classification: str = UNDETERMINED
    evidence: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "beta_c": self.beta_c,
            "classification": self.classification,
            "evidence": self.evidence,
            "thresholds": dict(self.thresholds, heuristic=True),
        }


def bisect_beta_c(
    fam,
    strip,
    tol=1e-5,
    N_max=DEFAULT_N_MAX,
    G=DEFAULT_G,
    bracket=None,
    n_jobs=1,
    progress=False,
) -> float:
    """Locate beta_c by bisection on "the pullback of c+ escapes within N_max steps"

    The bracket defaults to B(0). Its lower end must not escape and its
    upper end must; this holds at every iteration.

    Raises:
        PredicateConstantError: the predicate has the same value at both ends
    """
    lo, hi = bracket or beta_bounds0(fam, strip)
    if escapes(fam, lo, N_max, G, strip, n_jobs):
        raise PredicateConstantError(f"pullback already escapes at the lower end beta={lo}")
    if not escapes(fam, hi, N_max, G, strip, n_jobs):
        raise PredicateConstantError(f"pullback does not escape at the upper end beta={hi}")

    steps = max(0, math.ceil(math.log2((hi - lo) / tol))) if hi - lo > tol else 0
    iterator = range(steps)
    if progress and steps:
        iterator = progressbar.progressbar(iterator, max_value=steps, redirect_stdout=True)

    for _ in iterator:
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if escapes(fam, mid, N_max, G, strip, n_jobs):
            hi = mid
        else:
            lo = mid
        LOGGER.debug("bisect_beta_c: bracket [%.10f, %.10f]", lo, hi)

    beta_c = 0.5 * (lo + hi)
    LOGGER.info("bisect_beta_c: beta_c = %.10f", beta_c)
    return beta_c


def _label(lyap_plus, lyap_minus, pinch, delta, eps_pinch) -> str:
    if (
        lyap_plus < -delta
        and lyap_minus > delta
        and pinch.min_gap < eps_pinch < pinch.max_gap
    ):
        return NON_SMOOTH
    if abs(lyap_plus) < delta and abs(lyap_minus) < delta:
        return SMOOTH
    return UNDETERMINED


def classify(
    fam,
    strip,
    beta_c,
    delta_probe=None,
    N=DEFAULT_N,
    G=DEFAULT_G,
    delta=LYAPUNOV_DELTA,
    eps_pinch=None,
    sink_steps=SINK_SOURCE_STEPS,
    n_jobs=1,
) -> BifurcationResult:
    """Label the bifurcation at beta_c from both graphs at beta_c - delta_probe

    NonSmooth needs lambda(attractor) < -delta, lambda(repeller) > delta
    and min gap < eps_pinch < max gap. Smooth needs both exponents within
    delta of 0. Anything else is Undetermined.

    The sink-source candidate is searched between the graphs at the angle
    of minimal gap, see sink_source_search.

    Raises:
        ProbeRangeError: beta_c - delta_probe is below beta_-(0)
        EscapeFlagError: a graph is absent at the probe
    """
    lo, hi = beta_bounds0(fam, strip)
    if delta_probe is None:
        delta_probe = PROBE_FACTOR * (hi - lo)
    if eps_pinch is None:
        eps_pinch = PINCH_EPSILON_FACTOR * (strip.c_plus - strip.e_minus)
    beta = beta_c - delta_probe
    if beta < lo:
        raise ProbeRangeError(
            f"probe beta_c - {delta_probe} = {beta} is below beta_-(0) = {lo}"
        )

    attractor = pullback_attractor(fam, beta, N, G, strip, n_jobs=n_jobs)
    repeller = pushforward_repeller(fam, beta, N, G, strip, n_jobs=n_jobs)
    lyap_plus = lyapunov(fam, beta, attractor)
    lyap_minus = lyapunov(fam, beta, repeller)
    pinch = pinching(attractor, repeller)

    i = int(np.argmin(np.abs(attractor.thetas - pinch.argmin_theta)))
    sink_source = sink_source_search(
        fam,
        beta,
        float(attractor.thetas[i]),
        repeller.values[i],
        attractor.values[i],
        steps=sink_steps,
    )

    result = BifurcationResult(
        beta_c=float(beta_c),
        classification=_label(lyap_plus, lyap_minus, pinch, delta, eps_pinch),
        evidence={
            "probe_beta": beta,
            "lyap_attractor_near_bc": lyap_plus,
            "lyap_repeller_near_bc": lyap_minus,
            "pinch": pinch.to_dict(),
            "sink_source": sink_source,
        },
        thresholds={"delta": delta, "eps_pinch": eps_pinch, "delta_probe": delta_probe},
    )
    LOGGER.info("classify: %s at beta_c=%s", result.classification, beta_c)
    return result


def sweep_row(fam, strip, beta, N, G) -> dict:
    """One row of a parameter sweep; escape is a flag, never an error"""
    attractor = pullback_attractor(fam, beta, N, G, strip)
    repeller = pushforward_repeller(fam, beta, N, G, strip)
    row = {
        "beta": float(beta),
        "lyap_plus": math.nan,
        "lyap_minus": math.nan,
        "min_gap": math.nan,
        "escaped": attractor.is_absent or repeller.is_absent,
    }
    if row["escaped"]:
        return row
    row["lyap_plus"] = lyapunov(fam, beta, attractor)
    row["lyap_minus"] = lyapunov(fam, beta, repeller)
    try:
        row["min_gap"] = pinching(attractor, repeller).min_gap
    except OrderingError as e:
        LOGGER.warning("sweep: %s", e)
    return row


def sweep(fam, strip, betas, N=DEFAULT_N, G=DEFAULT_G, n_jobs=1, progress=False) -> list:
    """Evaluate :func:`sweep_row` on every beta, rows in input order

    A warning is logged when min_gap increases along the sweep.
    """
    betas = [float(b) for b in betas]
    if n_jobs == 1:
        iterator = betas
        if progress:
            iterator = progressbar.progressbar(betas, redirect_stdout=True)
        rows = [sweep_row(fam, strip, beta, N, G) for beta in iterator]
    else:
        rows = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(sweep_row)(fam, strip, beta, N, G) for beta in betas
        )
    if not gaps_non_increasing(rows):
        LOGGER.warning("sweep: min_gap is not non-increasing in beta")
    return rows


def gaps_non_increasing(rows) -> bool:
    """True if min_gap never increases along rows with both graphs present"""
    ordered = sorted((r for r in rows if not r["escaped"] and not math.isnan(r["min_gap"])), key=lambda r: r["beta"])
    gaps = [r["min_gap"] for r in ordered]
    return all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))


def figure_data(fam, strip, beta, N=DEFAULT_N, G=DEFAULT_G, n_jobs=1) -> tuple:
    """Attractor, repeller and pinch statistics at one beta

    The pinch statistics are None when a graph is absent; Lyapunov
    exponents are filled on the graphs that are present.
    """
    attractor = pullback_attractor(fam, beta, N, G, strip, n_jobs=n_jobs)
    repeller = pushforward_repeller(fam, beta, N, G, strip, n_jobs=n_jobs)
    for graph in (attractor, repeller):
        if not graph.is_absent:
            lyapunov(fam, beta, graph)
    if attractor.is_absent or repeller.is_absent:
        return attractor, repeller, None
    return attractor, repeller, pinching(attractor, repeller)
