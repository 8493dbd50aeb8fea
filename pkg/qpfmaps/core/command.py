"""Design pattern "COMMANDS" behind the command line.

Each subcommand of ``qpfmaps-cli`` corresponds to a <name>_cmd() function
taking a validated :class:`~qpfmaps.core.config.RunConfig`. Output files
are written in ``config.output["out"]``.

Each command returns a dict with at least:

    - ``success`` (bool)
    - ``exit_code`` (int): 0 on success, 1 when an analysis level
      condition fails
    - ``files`` (list): paths written by the command

Library errors are not caught here; the command line maps
:class:`ConfigurationError` to exit code 2 and :class:`AnalysisError`
to exit code 1.

Example:

    >>> config = load_config("figure1", out="/tmp/run")
    >>> result = bisect_cmd(config)
    >>> print(result["result"]["classification"])
"""
# Standard imports
import json
import os

# Custom imports
import numpy as np

from qpfmaps.core.assumptions import verify_assumptions
from qpfmaps.core.bifurcation import bisect_beta_c, classify, figure_data, sweep
from qpfmaps.core.bounds import backward_expansion_audit, bounds_report
from qpfmaps.core.config import DEFAULTS, merge
from qpfmaps.core.errors import HypothesisError
from qpfmaps.core.regions import induction
from qpfmaps.core.writer import BinaryGraphWriter, CsvWriter, JsonWriter, PngWriter
import qpfmaps.commons as cm

LOGGER = cm.logger()


def _output_path(config, filename: str) -> str:
    directory = config.output["out"]
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, filename)


def _header(config, command: str) -> dict:
    return {
        "command": command,
        "config": config.name,
        "family": config.family.to_dict(),
        "strip": config.strip.to_dict(),
        "omega": config.rotation.omega,
    }


def _write_json(config, filename: str, document: dict) -> str:
    path = _output_path(config, filename)
    with open(path, "w", encoding="utf-8") as file:
        JsonWriter(file, document, timestamp=config.output["timestamp"]).save()
    return path


def _write_csv_graph(config, filename: str, graph) -> str:
    path = _output_path(config, filename)
    with open(path, "w", newline="", encoding="utf-8") as file:
        CsvWriter.from_graph(file, graph).save()
    return path


def verify_cmd(config, **kwargs) -> dict:
    """Run the assumption suite on the configured family and strip

    Writes ``verify.json``. Informational entries never fail the command.
    """
    grids = config.grids
    report = verify_assumptions(
        config.family,
        config.strip,
        config.rotation,
        grid=(grids["theta"], grids["x"], grids["beta"]),
        max_refinements=grids["refine"],
    )
    document = _header(config, "verify")
    document["report"] = report.to_dict()
    path = _write_json(config, "verify.json", document)
    return {
        "success": report.all_passed,
        "exit_code": 0 if report.all_passed else 1,
        "report": report,
        "files": [path],
    }


def _graph_files(config, beta, n_jobs, binary=False, png=False) -> dict:
    grids = config.grids
    attractor, repeller, pinch = figure_data(
        config.family, config.strip, beta, grids["N"], grids["G"], n_jobs=n_jobs
    )
    files = [
        _write_csv_graph(config, "attractor.csv", attractor),
        _write_csv_graph(config, "repeller.csv", repeller),
    ]

    if binary:
        for name, graph in (("attractor.qpfg", attractor), ("repeller.qpfg", repeller)):
            path = _output_path(config, name)
            with open(path, "wb") as file:
                BinaryGraphWriter(file, graph).save()
            files.append(path)

    if png:
        path = _output_path(config, "figure.png")
        with open(path, "wb") as file:
            PngWriter(file, attractor, repeller, title=f"{config.family.kind}, beta = {beta}").save()
        files.append(path)

    document = _header(config, "graphs")
    document.update(
        beta=float(beta),
        attractor=attractor.summary(),
        repeller=repeller.summary(),
        escaped=attractor.is_absent or repeller.is_absent,
        pinch=pinch.to_dict() if pinch else None,
    )
    files.append(_write_json(config, "pinch.json", document))

    success = pinch is not None
    if not success:
        LOGGER.warning("no invariant graph pair at beta=%s, see the escape flags", beta)
    return {
        "success": success,
        "exit_code": 0 if success else 1,
        "beta": float(beta),
        "attractor": attractor,
        "repeller": repeller,
        "pinch": pinch,
        "files": files,
    }


def graphs_cmd(config, beta=None, n_jobs=1, **kwargs) -> dict:
    """Write the attractor and repeller tables with their pinch statistics

    Exit code 1 when a graph escaped; ``pinch.json`` then holds the escape
    counts instead of gap statistics.
    """
    return _graph_files(config, config.beta if beta is None else beta, n_jobs)


def figure_cmd(config, beta=None, n_jobs=1, png=None, **kwargs) -> dict:
    """Same as :func:`graphs_cmd` plus the binary graphs and an optional PNG"""
    if png is None:
        png = config.output["png"]
    return _graph_files(config, config.beta if beta is None else beta, n_jobs, binary=True, png=png)


def bisect_cmd(config, n_jobs=1, progress=False, **kwargs) -> dict:
    """Locate beta_c then classify the bifurcation; writes ``bisect.json``"""
    grids, tolerances = config.grids, config.tolerances
    beta_c = bisect_beta_c(
        config.family,
        config.strip,
        tol=tolerances["beta_tol"],
        N_max=grids["N_max"],
        G=grids["G"],
        n_jobs=n_jobs,
        progress=progress,
    )
    result = classify(
        config.family,
        config.strip,
        beta_c,
        delta_probe=tolerances["delta_probe"],
        N=grids["N"],
        G=grids["G"],
        delta=tolerances["delta"],
        eps_pinch=tolerances["eps_pinch"],
        n_jobs=n_jobs,
    )
    document = _header(config, "bisect")
    document.update(result=result.to_dict(), N_max=grids["N_max"], G=grids["G"])
    path = _write_json(config, "bisect.json", document)
    return {"success": True, "exit_code": 0, "result": result, "files": [path]}


def regions_cmd(config, n_max=None, **kwargs) -> dict:
    """Run the region induction and audit the bounds of every level

    Writes ``regions.json``. Exit code 1 when (F1)' fails at some level or
    when the induction stopped for lack of an admissible M_n.
    """
    n_max = config.n_max if n_max is None else n_max
    fam, strip, rot = config.family, config.strip, config.rotation
    schedule = config.make_schedule()
    levels = induction(fam, strip, schedule, rot, n_max)

    for level in levels:
        if "error" in level:
            continue
        n, beta = level["n"], level["beta_plus"]
        try:
            level["bounds"] = bounds_report(fam, strip, schedule, None, n, rot, beta=beta).to_dict()
        except HypothesisError as e:
            LOGGER.warning("level %d: bounds not available: %s", n, e)
            level["bounds"] = {"error": str(e)}
        level["backward_audit"] = backward_expansion_audit(fam, strip, schedule, n, beta)

    reports = [level["F"] for level in levels if "F" in level]
    rows = reports[-1]["levels"] if reports else []
    failed = [row["j"] for row in rows if not row["F1_prime"]]
    if failed:
        LOGGER.warning("(F1)' fails at level(s) %s", failed)
    stopped = [level["n"] for level in levels if "error" in level]
    success = not failed and not stopped

    document = _header(config, "regions")
    document.update(schedule=schedule.to_dict(strip), levels=levels, F1_prime_failed=failed)
    path = _write_json(config, "regions.json", document)
    return {
        "success": success,
        "exit_code": 0 if success else 1,
        "levels": levels,
        "files": [path],
    }


def sweep_cmd(config, start=None, stop=None, num=None, n_jobs=1, progress=False, **kwargs) -> dict:
    """Tabulate both Lyapunov exponents and the minimal gap over a beta range

    Writes ``sweep.csv``; escape is a column, never a failure.
    """
    spec = config.sweep
    start = spec["start"] if start is None else start
    stop = spec["stop"] if stop is None else stop
    num = spec["num"] if num is None else num
    betas = np.linspace(start, stop, num)

    grids = config.grids
    rows = sweep(config.family, config.strip, betas, grids["N"], grids["G"], n_jobs=n_jobs, progress=progress)

    path = _output_path(config, "sweep.csv")
    with open(path, "w", newline="", encoding="utf-8") as file:
        CsvWriter.from_sweep(file, rows).save()
    return {"success": True, "exit_code": 0, "rows": rows, "files": [path]}


def configs_cmd(**kwargs) -> dict:
    """List the packaged configuration documents"""
    rows = []
    for name, path in cm.packaged_configs().items():
        with open(path, encoding="utf-8") as file:
            document = merge(DEFAULTS, json.load(file))
        rows.append(
            {
                "name": name,
                "kind": document["family"]["kind"],
                "alpha": document["family"]["alpha"],
                "description": document.get("description", ""),
            }
        )
    return {"success": True, "exit_code": 0, "configs": rows, "files": []}
