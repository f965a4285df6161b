"""Seeded ensemble execution and file emission."""

from __future__ import annotations

import datetime as _dt
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..diagnostics.scaling import stagnation_detector
from ..errors import ArtifactIOError
from ..strategies import TRACE_COLUMNS, RunTrace, run
from .config import ExperimentConfig
from .plotting import plot_curves

SUMMARY_KEYS = ("seed", "hit", "t_eps", "final_log10_norm_m", "final_log_sigma", "stagnated", "tail_slope")
FLOOR_RTOL = 1e-12


@dataclass
class RunArtifacts:
    seed: int
    trace_csv: Path
    summary_path: Path
    summary: dict
    plot_paths: list[Path] = field(default_factory=list)
    trace: RunTrace | None = field(default=None, repr=False)

    @property
    def final_f(self) -> float:
        return float(self.trace.f_elite[-1]) if self.trace is not None else math.nan


@dataclass
class EnsembleResult:
    config: ExperimentConfig
    runs: list[RunArtifacts]
    failures: dict[int, str]
    summary_path: Path
    plot_path: Path | None
    summary: dict

    @property
    def n_stagnated(self) -> int:
        return sum(1 for r in self.runs if r.summary["stagnated"] is True)

    @property
    def n_hit(self) -> int:
        return sum(1 for r in self.runs if r.summary["hit"])


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


def write_text(path: Path, text: str) -> None:
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ArtifactIOError(f"cannot write: {exc.strerror}", path) from None


def trace_rows(trace: RunTrace, stride: int = 1) -> np.ndarray:
    """Row indices kept by stride thinning; the final row is always kept."""
    idx = np.arange(0, len(trace), stride)
    if idx[-1] != len(trace) - 1:
        idx = np.append(idx, len(trace) - 1)
    return idx


def trace_csv_text(trace: RunTrace, stride: int = 1) -> str:
    """CSV body with a header; floats use shortest round-trip notation."""
    log10_m = trace.log10_norm_m
    lines = [",".join(TRACE_COLUMNS)]
    for k in trace_rows(trace, stride):
        lines.append(",".join((
            str(int(trace.t[k])),
            "1" if trace.success[k] else "0",
            "1" if trace.z_changed_any[k] else "0",
            repr(float(log10_m[k])),
            repr(float(trace.log_sigma[k])),
            repr(float(trace.sigma_d_min[k])),
            repr(float(trace.f_elite[k])),
        )))
    return "\n".join(lines) + "\n"


def write_trace_csv(trace: RunTrace, path, stride: int = 1) -> Path:
    path = Path(path)
    write_text(path, trace_csv_text(trace, stride))
    return path


def read_trace_csv(path) -> dict[str, np.ndarray]:
    path = Path(path)
    try:
        with open(path) as fh:
            header = fh.readline().strip().split(",")
            body = fh.read()
    except OSError as exc:
        raise ArtifactIOError(f"cannot read: {exc.strerror}", path) from None
    if tuple(header) != TRACE_COLUMNS:
        raise ArtifactIOError(f"unexpected header {header}", path)
    if not body.strip():
        return {c: np.empty(0) for c in TRACE_COLUMNS}
    data = np.loadtxt(body.splitlines(), delimiter=",", ndmin=2)
    return {c: data[:, j] for j, c in enumerate(TRACE_COLUMNS)}


def run_summary(trace: RunTrace) -> dict:
    """Fixed-key record for one run; ``stagnated`` is ``None`` for traces under 100 rows."""
    verdict = stagnation_detector(trace) if len(trace) >= 100 else None
    return {
        "seed": trace.seed,
        "hit": trace.hit,
        "t_eps": trace.hit_t,
        "final_log10_norm_m": float(trace.log10_norm_m[-1]),
        "final_log_sigma": float(trace.log_sigma[-1]),
        "stagnated": None if verdict is None else verdict.stagnated,
        "tail_slope": None if verdict is None else verdict.tail_slope,
    }


def summary_text(record: dict, keys=None) -> str:
    keys = list(record) if keys is None else keys
    return "".join(f"{k}: {_fmt(record[k])}\n" for k in keys)


def parse_summary(path) -> dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ArtifactIOError(f"cannot read: {exc.strerror}", path) from None
    out = {}
    for line in text.splitlines():
        if ": " in line:
            k, v = line.split(": ", 1)
            out[k.strip()] = v.strip()
    return out


def _median(values) -> float | None:
    vals = [v for v in values if v is not None]
    return float(np.median(vals)) if vals else None


def run_single(config: ExperimentConfig, seed: int, out_dir: Path, run_index: int = 0) -> RunArtifacts:
    state0 = config.initial_state(seed, run_index)
    trace = run(state0, config.params, config.problem, seed, config.budget,
                epsilon=config.epsilon, run_index=run_index)
    record = run_summary(trace)
    csv_path = write_trace_csv(trace, out_dir / f"trace_seed{seed}.csv", config.trace_stride)
    summary_path = out_dir / f"summary_seed{seed}.txt"
    write_text(summary_path, summary_text(record, SUMMARY_KEYS))
    return RunArtifacts(seed, csv_path, summary_path, record, trace=trace)


def run_experiment(config: ExperimentConfig, out_dir, title: str | None = None,
                   plot: bool = True, keep_traces: bool = True) -> EnsembleResult:
    """Run every seed of ``config`` and write traces, summaries and a plot into ``out_dir``.

    A seed that raises is recorded under ``failures`` and in the ensemble
    summary; the remaining seeds still run.  I/O errors abort with the path.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ArtifactIOError(f"cannot create directory: {exc.strerror}", out_dir) from None

    runs: list[RunArtifacts] = []
    failures: dict[int, str] = {}
    for seed in config.seeds:
        try:
            art = run_single(config, seed, out_dir)
        except ArtifactIOError:
            raise
        except Exception as exc:  # recorded, the ensemble goes on
            failures[seed] = f"{type(exc).__name__}: {exc}"
            continue
        runs.append(art)

    plot_path = None
    if plot and runs:
        curves = [(f"seed {r.seed}", r.trace.t, r.trace.log10_norm_m) for r in runs]
        if title is None:
            p = config.problem
            title = (f"{config.variant.value} on {p.kind.value} (dco={p.dco}, din={p.din}), "
                     f"s={config.s:g}")
        plot_path = plot_curves(out_dir / "log10_norm_m.svg", curves, title)
        for r in runs:
            r.plot_paths.append(plot_path)

    recs = [r.summary for r in runs]
    summary = {
        "seeds": list(config.seeds),
        "sigma_lb": config.sigma_lb,
        "n_runs": len(runs),
        "n_failed": len(failures),
        "n_hit": sum(1 for r in recs if r["hit"]),
        "n_stagnated": sum(1 for r in recs if r["stagnated"] is True),
        "median_t_eps": _median(r["t_eps"] for r in recs),
        "median_final_log10_norm_m": _median(r["final_log10_norm_m"] for r in recs),
        "median_final_log_sigma": _median(r["final_log_sigma"] for r in recs),
        "median_final_f_elite": _median(float(r.trace.f_elite[-1]) for r in runs),
    }
    for seed, msg in failures.items():
        summary[f"failure_seed{seed}"] = msg.replace("\n", " ")
    for key, value in config.to_pairs():
        summary[f"config.{key}"] = value
    summary["created"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")

    summary_path = out_dir / "ensemble_summary.txt"
    write_text(summary_path, summary_text(summary))
    if not keep_traces:
        for r in runs:
            r.trace = None
    return EnsembleResult(config, runs, failures, summary_path, plot_path, summary)


@dataclass(frozen=True)
class FloorCheck:
    ok: bool
    n_rows: int
    n_violations: int
    first_violation_t: int | None
    min_sigma_d: float
    sigma_lb: float


def verify_trace(path, sigma_lb: float | None = None) -> FloorCheck:
    """Check ``sigma_d_min >= sigma_lb * (1 - 1e-12)`` on every row of a trace CSV.

    Without an explicit ``sigma_lb`` the value is read from
    ``ensemble_summary.txt`` next to the trace.
    """
    path = Path(path)
    if sigma_lb is None:
        summary = parse_summary(path.parent / "ensemble_summary.txt")
        if "sigma_lb" not in summary:
            raise ArtifactIOError("summary has no sigma_lb entry", path.parent / "ensemble_summary.txt")
        sigma_lb = float(summary["sigma_lb"])
    cols = read_trace_csv(path)
    sd = cols["sigma_d_min"]
    bad = ~(sd >= sigma_lb * (1.0 - FLOOR_RTOL))
    first = int(cols["t"][bad][0]) if bad.any() else None
    return FloorCheck(
        ok=not bad.any(),
        n_rows=int(sd.shape[0]),
        n_violations=int(bad.sum()),
        first_violation_t=first,
        min_sigma_d=float(sd.min()) if sd.size else math.inf,
        sigma_lb=float(sigma_lb),
    )
