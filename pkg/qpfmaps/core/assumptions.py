"""Grid verification of the hypotheses (A1)..(A16) of a family on a strip.

Every check is reduced to a margin which is positive (or non negative for
the closed conditions) when the inequality holds at every grid point. The
point realising the smallest margin is kept as a witness.

Grids are scanned one parameter value at a time so memory stays bounded
by a single theta x x mesh.
"""
# Standard imports
from dataclasses import dataclass, field, asdict
import math

# Custom imports
import numpy as np

from qpfmaps.core.errors import NonConvexRegionError, NotFoundError
from qpfmaps.core.family import Partials
from qpfmaps.core.regions import beta_bounds0, critical_region0
from qpfmaps.core.torus import diophantine_margin
from qpfmaps.commons import DEFAULT_THETA_GRID, DEFAULT_X_GRID, DEFAULT_BETA_GRID
import qpfmaps.commons as cm

LOGGER = cm.logger()

# Relative change below which a refined scan is considered stable
STABLE_MARGIN = 0.01
# Relative tolerance of the finite difference consistency check
FD_RTOL = 1e-4
FD_SAMPLES = 64


@dataclass
class AssumptionCheck:
    name: str
    passed: bool
    margin: float
    witness: dict = field(default_factory=dict)
    detail: str = ""
    informational: bool = False


@dataclass
class AssumptionReport:
    checks: list
    grid: dict

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks if not check.informational)

    @property
    def failed(self) -> list:
        return [c.name for c in self.checks if not c.passed and not c.informational]

    def __getitem__(self, name) -> AssumptionCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "failed": self.failed,
            "grid": self.grid,
            "checks": [asdict(check) for check in self.checks],
        }


class _Tracker:
    """Running minimum of a margin over several meshes"""

    def __init__(self, name, detail, strict=True, informational=False):
        self.name = name
        self.detail = detail
        self.strict = strict
        self.informational = informational
        self.margin = math.inf
        self.witness = {}
        self.notes = []

    def update(self, margins, beta, thetas, xs=None):
        margins = np.asarray(margins, dtype=float)
        if margins.size == 0 or np.all(np.isnan(margins)):
            return
        index = np.unravel_index(np.nanargmin(margins), margins.shape)
        value = float(margins[index])
        if value < self.margin:
            self.margin = value
            self.witness = {"beta": float(beta), "theta": float(np.ravel(thetas)[index[0]])}
            if xs is not None and len(index) > 1:
                self.witness["x"] = float(np.ravel(xs)[index[1]])

    def fail(self, note, beta=None):
        self.margin = min(self.margin, -1.0)
        self.notes.append(note)
        if beta is not None:
            self.witness = {"beta": float(beta)}

    def result(self) -> AssumptionCheck:
        if self.margin == math.inf:
            passed = True
        else:
            passed = self.margin > 0 if self.strict else self.margin >= 0
        detail = "; ".join([self.detail] + self.notes)
        return AssumptionCheck(self.name, bool(passed), self.margin, self.witness, detail, self.informational)


def _mesh_partials(fam, beta, thetas, xs) -> Partials:
    theta, x = thetas[:, None], xs[None, :]
    p = fam.partials(beta, theta, x)
    shape = (thetas.size, xs.size)
    return Partials(*(np.broadcast_to(np.asarray(v, dtype=float), shape) for v in p))


def _finite_difference_check(fam, strip, tracker, seed=0, h=1e-6):
    rng = np.random.default_rng(seed)
    beta = rng.uniform(0.0, 1.0, FD_SAMPLES)
    theta = rng.uniform(0.0, 1.0, FD_SAMPLES)
    x = rng.uniform(strip.e_minus, strip.c_plus, FD_SAMPLES)
    p = fam.partials(beta, theta, x)
    numeric = {
        "dx": (fam.eval(beta, theta, x + h) - fam.eval(beta, theta, x - h)) / (2 * h),
        "dtheta": (fam.eval(beta, theta + h, x) - fam.eval(beta, theta - h, x)) / (2 * h),
        "dbeta": (fam.eval(beta + h, theta, x) - fam.eval(beta - h, theta, x)) / (2 * h),
    }
    for key, approx in numeric.items():
        exact = np.broadcast_to(np.asarray(getattr(p, key), dtype=float), approx.shape)
        scale = np.maximum(np.abs(exact), 1.0)
        error = np.abs(exact - approx) / scale
        i = int(np.argmax(error))
        margin = FD_RTOL - float(error[i])
        if margin < tracker.margin:
            tracker.margin = margin
            tracker.witness = {
                "beta": float(beta[i]),
                "theta": float(theta[i]),
                "x": float(x[i]),
                "partial": key,
            }


def _scan(fam, strip, rot, n_theta, n_x, n_beta) -> list:
    ac, ae, au, al = strip.alpha_c, strip.alpha_e, strip.alpha_u, strip.alpha_l
    S, s = strip.S, strip.s

    t = {
        "A1": _Tracker("(A1)", "d_x f < alpha_c on C"),
        "A2": _Tracker("(A2)", "d_x f > alpha_e on E"),
        "A3": _Tracker("(A3)", "alpha_l < d_x f < alpha_u on [e-, c+]"),
        "A4": _Tracker("(A4)", "f(c+) <= c+ and f(e-) <= e-", strict=False),
        "A5": _Tracker("(A5)", "f_0(c-) >= c- for all theta, f_1(c+) <= e- for some theta", strict=False),
        "A6": _Tracker("(A6)", "d_beta f <= 0 on the strip (weak form)", strict=False),
        "A7": _Tracker("(A7)", "partials agree with central differences"),
        "A8": _Tracker("(A8)", "f([e+, c+]) in C off I_0", strict=False),
        "A9": _Tracker("(A9)", "d_theta^2 f > s on I_0 x C"),
        "A10": _Tracker("(A10)", "I_0 is one closed arc growing with beta"),
        "A11": _Tracker("(A11)", "|d_theta f| < S"),
        "A12": _Tracker("(A12)", "|d_theta^2 f| < S^2"),
        "A13": _Tracker("(A13)", "|d_theta d_x f| < S alpha_c on C, < S alpha_u^2 below c-"),
        "A14": _Tracker("(A14)", "|d_x^2 f| < alpha_c on C, < alpha_u^2 below c-"),
        "A15": _Tracker("(A15)", "|d_y^2 f^-1| < 1/alpha_e off I_0 + omega on E"),
        "A16": _Tracker("(A16)", "|d_theta d_y f^-1| < S/alpha_e off I_0 + omega on E"),
        "concave": _Tracker("concave", "d_x^2 f <= 0 on [max(e-, 0), c+]", strict=False, informational=True),
    }

    thetas = np.arange(n_theta) / n_theta
    xs_C = np.linspace(strip.c_minus, strip.c_plus, n_x)
    xs_E = np.linspace(strip.e_minus, strip.e_plus, n_x)
    xs_S = np.linspace(strip.e_minus, strip.c_plus, n_x)
    xs_L = np.linspace(strip.e_minus, strip.c_minus, n_x, endpoint=False)
    xs_up = np.linspace(strip.e_plus, strip.c_plus, n_x)
    concave_mask = xs_S >= max(strip.e_minus, 0.0)

    with np.errstate(all="ignore"):
        for beta in np.linspace(0.0, 1.0, n_beta):
            p = _mesh_partials(fam, beta, thetas, xs_C)
            t["A1"].update(ac - p.dx, beta, thetas, xs_C)
            t["A13"].update(S * ac - np.abs(p.dthetax), beta, thetas, xs_C)
            t["A14"].update(ac - np.abs(p.dxx), beta, thetas, xs_C)

            p = _mesh_partials(fam, beta, thetas, xs_E)
            t["A2"].update(p.dx - ae, beta, thetas, xs_E)

            p = _mesh_partials(fam, beta, thetas, xs_L)
            t["A13"].update(S * au ** 2 - np.abs(p.dthetax), beta, thetas, xs_L)
            t["A14"].update(au ** 2 - np.abs(p.dxx), beta, thetas, xs_L)

            p = _mesh_partials(fam, beta, thetas, xs_S)
            t["A3"].update(np.minimum(p.dx - al, au - p.dx), beta, thetas, xs_S)
            t["A6"].update(-p.dbeta, beta, thetas, xs_S)
            t["A11"].update(S - np.abs(p.dtheta), beta, thetas, xs_S)
            t["A12"].update(S ** 2 - np.abs(p.dthetatheta), beta, thetas, xs_S)
            t["concave"].update(np.where(concave_mask, -p.dxx, np.nan), beta, thetas, xs_S)

            t["A4"].update(
                np.minimum(
                    strip.c_plus - fam.eval(beta, thetas, strip.c_plus),
                    strip.e_minus - fam.eval(beta, thetas, strip.e_minus),
                ),
                beta,
                thetas,
            )

        low = fam.eval(0.0, thetas, strip.c_minus) - strip.c_minus
        reach = strip.e_minus - fam.eval(1.0, thetas, strip.c_plus)
        t["A5"].update(low, 0.0, thetas)
        if np.max(reach) < t["A5"].margin:
            t["A5"].margin = float(np.max(reach))
            t["A5"].witness = {"beta": 1.0, "theta": float(thetas[int(np.argmax(reach))])}

        _finite_difference_check(fam, strip, t["A7"])

        try:
            beta_minus, beta_plus = beta_bounds0(fam, strip)
        except NotFoundError as e:
            for key in ("A8", "A9", "A10", "A15", "A16"):
                t[key].fail(f"B(0) unavailable: {e}")
            beta_minus = beta_plus = None

        if beta_minus is not None:
            previous = None
            for beta in np.linspace(beta_minus, beta_plus, n_beta):
                try:
                    region = critical_region0(fam, strip, beta).arc
                except NonConvexRegionError as e:
                    t["A10"].fail(str(e), beta)
                    previous = None
                    continue
                if previous is not None and not region.contains_arc(previous):
                    t["A10"].fail(f"I_0 shrinks at beta={beta}", beta)
                previous = region

                outside = ~region.contains(thetas)
                values = fam.eval(beta, thetas[outside][:, None], xs_up[None, :])
                t["A8"].update(
                    np.minimum(values - strip.c_minus, strip.c_plus - values),
                    beta,
                    thetas[outside],
                    xs_up,
                )

                inside = region.sample(max(n_theta // 32, 8))
                if inside.size:
                    p = _mesh_partials(fam, beta, inside, xs_C)
                    t["A9"].update(p.dthetatheta - s, beta, inside, xs_C)

                shifted = thetas[~region.shift(fam.omega).contains(thetas)]
                g = fam.inverse_partials(beta, shifted[:, None], xs_E[None, :], strict=False)
                finite = np.isfinite(np.broadcast_to(g.value, (shifted.size, xs_E.size)))
                g_yy = np.broadcast_to(g.dxx, finite.shape)
                g_ty = np.broadcast_to(g.dthetax, finite.shape)
                t["A15"].update(np.where(finite, 1.0 / ae - np.abs(g_yy), np.nan), beta, shifted, xs_E)
                t["A16"].update(np.where(finite, S / ae - np.abs(g_ty), np.nan), beta, shifted, xs_E)

    if t["A6"].margin == 0:
        t["A6"].notes.append("d_beta f vanishes at the witness, decrease is not strict there")
        LOGGER.warning("(A6) only holds in its weak form at %s", t["A6"].witness)

    checks = [tracker.result() for tracker in t.values()]
    if rot is not None:
        margin = diophantine_margin(rot) - rot.dio_C
        checks.append(
            AssumptionCheck(
                "rotation",
                margin >= 0,
                margin,
                {"omega": rot.omega, "horizon": rot.check_horizon},
                "d(k omega, 0) k^eta >= C up to the horizon",
                informational=True,
            )
        )
    return checks


def _stable(before: list, after: list) -> bool:
    for a, b in zip(before, after):
        if a.passed != b.passed:
            return False
        if math.isfinite(a.margin) and math.isfinite(b.margin):
            if abs(a.margin - b.margin) > STABLE_MARGIN * max(abs(a.margin), 1e-12):
                return False
    return True


def verify_assumptions(fam, strip, rot=None, grid=None, max_refinements=1) -> AssumptionReport:
    """Check (A1)..(A16) on grids and return a report with witnesses

    Args:
        grid (tuple): (theta, x, beta) resolutions, by default
            (2048, 512, 64)
        max_refinements (int): how many times theta and x resolutions may
            be doubled until every margin changes by less than 1%

    Raises:
        ConfigurationError: the strip itself is invalid
    """
    strip.validate()
    n_theta, n_x, n_beta = grid or (DEFAULT_THETA_GRID, DEFAULT_X_GRID, DEFAULT_BETA_GRID)

    checks = _scan(fam, strip, rot, n_theta, n_x, n_beta)
    for _ in range(max_refinements):
        n_theta, n_x = 2 * n_theta, 2 * n_x
        refined = _scan(fam, strip, rot, n_theta, n_x, n_beta)
        stable = _stable(checks, refined)
        checks = refined
        if stable:
            break

    report = AssumptionReport(checks, {"theta": n_theta, "x": n_x, "beta": n_beta})
    if report.all_passed:
        LOGGER.info("verify_assumptions: every assumption holds for %s", fam)
    else:
        LOGGER.info("verify_assumptions: %s failed for %s", ", ".join(report.failed), fam)
    return report
