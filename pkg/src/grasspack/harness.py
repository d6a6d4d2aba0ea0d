"""Experiment runner: multi-trial solves, mu sweeps, references, and tables.

Reproduces the standard experimental protocol: for each problem cell derive
a feasibility parameter (from a reference file, from the applicable bound,
from an explicit value, or a sweep over multiples of the bound value), run
independent seeded trials, and aggregate best/average packing diameters and
iteration counts into result rows.

Reporting conventions match the usual packing tables: line and sphere
packings are reported as the minimum angle in degrees, subspace packings
under the chordal and spectral metrics as squared diameters, and
Fubini-Study packings scaled by 2/pi into [0, 1].
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime, timezone

import numpy as np

from .bounds import mu_from_rho, rankin_chordal, rankin_projective, rankin_spectral
from .errors import InitFailure, InvalidInput, NumericalFailure, ParseError, SingularBlock
from .geometry import (
    Field,
    Metric,
    gram,
    max_block_magnitude,
    packing_diameter,
    read_configuration,
)
from .solver import SolveParams, alternate
from .starts import InitParams, initial_configuration

__all__ = [
    "ExperimentSpec",
    "ReferenceTable",
    "ResultRow",
    "run_experiment",
    "compare_reference",
    "evaluate_file",
    "export",
    "write_results_csv",
    "read_results_csv",
]

_SPACES = ("projective", "grassmann", "sphere")
_UNITS = ("degrees", "squared_diameter")

RESULT_FIELDS = (
    "d",
    "K",
    "N",
    "field",
    "metric",
    "mu_target",
    "best_diameter",
    "avg_diameter",
    "error_vs_reference",
    "avg_iterations",
    "trials_failed",
)


@dataclass(frozen=True)
class ResultRow:
    """One aggregated experiment cell, in table reporting units."""

    d: int
    K: int
    N: int
    field: str
    metric: str
    mu_target: float
    best_diameter: float
    avg_diameter: float
    error_vs_reference: float
    avg_iterations: float
    trials_failed: int


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to reproduce a batch of packing experiments."""

    space: str
    field: Field
    metric: Metric
    d_values: tuple
    N_values: tuple
    K_values: tuple = (1,)
    trials: int = 10
    mu_source: str = "rankin_bound"  # reference_file | rankin_bound | explicit
    reference_path: str | None = None
    mu_explicit: float | None = None
    sweep: tuple | None = None  # (min_factor, max_factor, steps)
    max_iterations: int = 5000
    stop_slack: float = 1e-5
    tau: float | None = None
    max_draws: int = 10000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.space not in _SPACES:
            raise InvalidInput(f"space must be one of {_SPACES}, got {self.space!r}")
        if self.space == "sphere":
            if self.metric is not Metric.SPHERE or tuple(self.K_values) != (1,):
                raise InvalidInput("sphere experiments require metric=sphere and K=1")
            if self.field is not Field.REAL:
                raise InvalidInput("sphere experiments are real-valued")
        elif self.space == "projective":
            if tuple(self.K_values) != (1,):
                raise InvalidInput("projective experiments require K=1")
            if self.metric is not Metric.CHORDAL:
                raise InvalidInput("projective experiments use the chordal metric")
        else:
            if self.metric not in (Metric.CHORDAL, Metric.SPECTRAL, Metric.FUBINI_STUDY):
                raise InvalidInput(f"unsupported grassmann metric {self.metric}")
        if self.mu_source not in ("reference_file", "rankin_bound", "explicit"):
            raise InvalidInput(f"unknown mu_source {self.mu_source!r}")
        if self.mu_source == "reference_file" and not self.reference_path:
            raise InvalidInput("mu_source=reference_file needs reference_path")
        if self.mu_source == "explicit" and self.mu_explicit is None:
            raise InvalidInput("mu_source=explicit needs mu_explicit")
        if self.sweep is not None:
            lo, hi, steps = self.sweep
            if not (lo > 0 and hi >= lo and int(steps) >= 1):
                raise InvalidInput(f"bad sweep specification {self.sweep}")
        if self.trials < 1:
            raise InvalidInput("trials must be >= 1")


@dataclass(frozen=True)
class ReferenceTable:
    """Best-known packing values, keyed by (d, K, N)."""

    rows: dict

    @classmethod
    def load(cls, path) -> "ReferenceTable":
        rows = {}
        try:
            fh = open(path, "r", encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot open reference file {path}: {exc}") from exc
        with fh:
            for lineno, line in enumerate(fh, start=1):
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                if lineno == 1 and text.lower().startswith("d,"):
                    continue  # optional header
                parts = [p.strip() for p in text.split(",")]
                if len(parts) != 5:
                    raise ParseError(f"{path}:{lineno}: expected 'd,K,N,value,unit'")
                try:
                    key = (int(parts[0]), int(parts[1]), int(parts[2]))
                    value = float(parts[3])
                except ValueError as exc:
                    raise ParseError(f"{path}:{lineno}: {exc}") from exc
                unit = parts[4]
                if unit not in _UNITS:
                    raise ParseError(f"{path}:{lineno}: unknown unit {unit!r}")
                if key in rows:
                    raise ParseError(f"{path}:{lineno}: duplicate key {key}")
                rows[key] = (value, unit)
        return cls(rows=rows)

    def get(self, d: int, K: int, N: int):
        return self.rows.get((d, K, N))


def _derive_trial_seed(base_seed: int, trial_index: int) -> int:
    words = np.random.SeedSequence([base_seed % 2**63, trial_index]).generate_state(2)
    return int(words[0]) | (int(words[1]) << 32)


def _default_tau(spec: ExperimentSpec, K: int) -> float:
    if spec.tau is not None:
        return spec.tau
    return 0.9 if spec.space in ("projective", "sphere") else math.sqrt(K)


def _mu_cap(metric: Metric, K: int) -> float:
    return math.sqrt(K) if metric is Metric.CHORDAL else 1.0


def _derive_mu(spec: ExperimentSpec, ref: ReferenceTable | None, d: int, K: int, N: int):
    """Feasibility parameter for one cell, or None when a reference row is missing."""
    if spec.mu_source == "explicit":
        return float(spec.mu_explicit)
    if spec.mu_source == "reference_file":
        row = ref.get(d, K, N)
        if row is None:
            return None
        value, unit = row
        if unit == "degrees":
            if K != 1:
                raise InvalidInput(
                    f"reference for cell ({d},{K},{N}) is in degrees but K > 1"
                )
            return math.cos(math.radians(value))
        return mu_from_rho(math.sqrt(value), spec.metric, K)
    # rankin_bound
    if spec.space == "projective":
        bound = rankin_projective(d, N, spec.field).bound_value
        return mu_from_rho(math.sqrt(bound), Metric.CHORDAL, 1)
    if spec.metric is Metric.CHORDAL:
        bound = rankin_chordal(d, K, N, spec.field).bound_value
    elif spec.metric is Metric.SPECTRAL:
        bound = rankin_spectral(d, K, N, spec.field).bound_value
    else:
        raise InvalidInput(
            f"no bound is available for {spec.space}/{spec.metric.value}; "
            "use an explicit mu or a reference file"
        )
    return mu_from_rho(math.sqrt(bound), spec.metric, K)


def _report_value(spec: ExperimentSpec, report) -> float:
    if spec.space == "projective":
        return math.degrees(math.acos(min(1.0, max(0.0, report.mu_achieved))))
    if spec.space == "sphere":
        return math.degrees(math.acos(min(1.0, max(-1.0, report.mu_achieved))))
    if spec.metric is Metric.FUBINI_STUDY:
        return report.final_diameter * 2.0 / math.pi
    return report.final_diameter**2


def _run_trial(spec: ExperimentSpec, d: int, K: int, N: int, mu: float, trial_index: int):
    seed = _derive_trial_seed(spec.seed, trial_index)
    init = InitParams(tau=_default_tau(spec, K), max_draws=spec.max_draws, seed=seed)
    params = SolveParams(
        metric=spec.metric,
        mu=mu,
        d=d,
        K=K,
        N=N,
        max_iterations=spec.max_iterations,
        stop_slack=spec.stop_slack,
    )
    try:
        config = initial_configuration(
            d, K, N, spec.field, init, signed_similarity=(spec.space == "sphere")
        )
        return alternate(gram(config), params)
    except (InitFailure, NumericalFailure, SingularBlock):
        return None


def _effective_workers(requested: int) -> int:
    cap = os.environ.get("GRASSPACK_WORKERS", "")
    workers = max(1, requested)
    if cap.strip():
        workers = min(workers, max(1, int(cap)))
    return workers


def run_experiment(spec: ExperimentSpec) -> list[ResultRow]:
    """Run every (d, K, N) cell of the spec and aggregate per-cell rows.

    Cells whose reference row is missing are reported as warning rows with
    NaN values and every trial counted failed.  Aggregation is independent
    of trial completion order; rows come back sorted by (d, K, N).
    """
    ref = ReferenceTable.load(spec.reference_path) if spec.mu_source == "reference_file" else None
    cells = sorted(
        (d, K, N)
        for d in spec.d_values
        for K in spec.K_values
        for N in spec.N_values
        if K < d or spec.space != "grassmann"
    )
    rows = []
    workers = _effective_workers(spec.workers)
    for d, K, N in cells:
        mu_base = _derive_mu(spec, ref, d, K, N)
        if mu_base is None:
            rows.append(
                ResultRow(
                    d=d, K=K, N=N,
                    field=spec.field.value, metric=spec.metric.value,
                    mu_target=math.nan, best_diameter=math.nan, avg_diameter=math.nan,
                    error_vs_reference=math.nan, avg_iterations=math.nan,
                    trials_failed=spec.trials,
                )
            )
            continue
        if spec.sweep is not None:
            lo, hi, steps = spec.sweep
            factors = np.linspace(lo, hi, int(steps))
            mu_values = [min(mu_base * f, _mu_cap(spec.metric, K)) for f in factors]
        else:
            mu_values = [mu_base]

        tasks = [
            (s * spec.trials + k, mu)
            for s, mu in enumerate(mu_values)
            for k in range(spec.trials)
        ]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                reports = list(
                    pool.map(lambda t: _run_trial(spec, d, K, N, t[1], t[0]), tasks)
                )
        else:
            reports = [_run_trial(spec, d, K, N, mu, idx) for idx, mu in tasks]

        values = [_report_value(spec, r) for r in reports if r is not None]
        iterations = [r.iterations_used for r in reports if r is not None]
        failed = sum(1 for r in reports if r is None)
        rows.append(
            ResultRow(
                d=d, K=K, N=N,
                field=spec.field.value, metric=spec.metric.value,
                mu_target=float(mu_base),
                best_diameter=max(values) if values else math.nan,
                avg_diameter=float(np.mean(values)) if values else math.nan,
                error_vs_reference=math.nan,
                avg_iterations=float(np.mean(iterations)) if iterations else math.nan,
                trials_failed=failed,
            )
        )
    return rows


def _expected_unit(row: ResultRow) -> str:
    if row.metric == Metric.SPHERE.value or row.K == 1:
        return "degrees"
    if row.metric == Metric.FUBINI_STUDY.value:
        return "scaled"  # no reference tables exist in this unit
    return "squared_diameter"


def compare_reference(results: list[ResultRow], ref: ReferenceTable) -> list[ResultRow]:
    """Annotate rows with (reference - achieved) in the row's reporting unit."""
    annotated = []
    for row in results:
        entry = ref.get(row.d, row.K, row.N)
        if entry is None:
            annotated.append(row)
            continue
        value, unit = entry
        if unit != _expected_unit(row):
            raise InvalidInput(
                f"reference unit {unit!r} does not match row unit "
                f"{_expected_unit(row)!r} for cell ({row.d},{row.K},{row.N})"
            )
        annotated.append(replace(row, error_vs_reference=value - row.best_diameter))
    return annotated


def evaluate_file(path) -> dict:
    """Diameters, block magnitudes, and Gram spectrum of a stored configuration."""
    config = read_configuration(path)
    g = gram(config)
    diameters = {
        m.value: packing_diameter(config, m)
        for m in (Metric.CHORDAL, Metric.SPECTRAL, Metric.FUBINI_STUDY, Metric.GEODESIC)
    }
    magnitudes = {
        m.value: max_block_magnitude(g, m)
        for m in (Metric.CHORDAL, Metric.SPECTRAL, Metric.FUBINI_STUDY)
    }
    eigenvalues = np.linalg.eigvalsh(g.entries)
    out = {
        "d": config.d,
        "K": config.K,
        "N": config.N,
        "field": config.field.value,
        "packing_diameters": diameters,
        "max_block_magnitudes": magnitudes,
        "gram_eigenvalues": {"min": float(eigenvalues[0]), "max": float(eigenvalues[-1])},
    }
    if config.K == 1:
        out["min_angle_degrees"] = math.degrees(
            math.acos(min(1.0, max(0.0, magnitudes["chordal"])))
        )
        if config.field is Field.REAL:
            signed = max_block_magnitude(g, Metric.SPHERE)
            out["max_block_magnitudes"]["sphere"] = signed
            out["sphere_min_angle_degrees"] = math.degrees(
                math.acos(min(1.0, max(-1.0, signed)))
            )
    return out


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_results_csv(results: list[ResultRow], path, *, header_note: str = "",
                      timestamp: bool = True) -> None:
    """Write rows at 17 significant digits, with optional commented metadata."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if timestamp:
            fh.write(f"# generated {datetime.now(timezone.utc).isoformat()}\n")
        if header_note:
            fh.write(f"# {header_note}\n")
            fh.write("# avg_iterations counts the step each trial actually stopped at\n")
        writer = csv.writer(fh)
        writer.writerow(RESULT_FIELDS)
        for row in results:
            writer.writerow([_fmt(getattr(row, name)) for name in RESULT_FIELDS])


def read_results_csv(path) -> list[ResultRow]:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(reader, None)
        if header is None or tuple(header) != RESULT_FIELDS:
            raise ParseError(f"{path}: unexpected results header {header}")
        for parts in reader:
            if len(parts) != len(RESULT_FIELDS):
                raise ParseError(f"{path}: malformed row {parts}")
            rows.append(
                ResultRow(
                    d=int(parts[0]), K=int(parts[1]), N=int(parts[2]),
                    field=parts[3], metric=parts[4],
                    mu_target=float(parts[5]), best_diameter=float(parts[6]),
                    avg_diameter=float(parts[7]), error_vs_reference=float(parts[8]),
                    avg_iterations=float(parts[9]), trials_failed=int(parts[10]),
                )
            )
    return rows


def _row_bound(row: ResultRow) -> float:
    field = Field(row.field)
    try:
        if row.metric == Metric.CHORDAL.value and row.K == 1:
            return rankin_projective(row.d, row.N, field).degrees
        if row.metric == Metric.CHORDAL.value:
            return rankin_chordal(row.d, row.K, row.N, field).bound_value
        if row.metric == Metric.SPECTRAL.value:
            return rankin_spectral(row.d, row.K, row.N, field).bound_value
    except InvalidInput:
        return math.nan
    return math.nan


def export(results: list[ResultRow], fmt: str, out_dir=".", *, timestamp: bool = True) -> list:
    """Write results as a CSV table or as per-(d, K) plot-ready series files.

    Plot series carry (N, achieved, bound, reference) with the reference
    reconstructed from the stored error column when present.
    """
    if not results:
        raise InvalidInput("nothing to export")
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if fmt == "csv":
        path = os.path.join(out_dir, "results.csv")
        write_results_csv(results, path, timestamp=timestamp)
        written.append(path)
    elif fmt == "plot_data":
        groups: dict = {}
        for row in results:
            groups.setdefault((row.metric, row.d, row.K), []).append(row)
        for (metric, d, K), rows in sorted(groups.items()):
            path = os.path.join(out_dir, f"plot_{metric}_d{d}_K{K}.csv")
            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["N", "achieved", "bound", "reference"])
                for row in sorted(rows, key=lambda r: r.N):
                    reference = (
                        row.best_diameter + row.error_vs_reference
                        if math.isfinite(row.error_vs_reference)
                        else math.nan
                    )
                    writer.writerow(
                        [row.N, _fmt(row.best_diameter), _fmt(_row_bound(row)), _fmt(reference)]
                    )
            written.append(path)
    else:
        raise InvalidInput(f"unknown export format {fmt!r}")
    return written
