import math
import os

import numpy as np
import pytest

from grasspack.bounds import rankin_projective
from grasspack.errors import InvalidInput, ParseError
from grasspack.geometry import Field, Metric, write_configuration
from grasspack.harness import (
    ExperimentSpec,
    ReferenceTable,
    ResultRow,
    compare_reference,
    evaluate_file,
    export,
    read_results_csv,
    run_experiment,
    write_results_csv,
)
from grasspack.solver import SolveParams, alternate
from grasspack.starts import InitParams, initial_configuration
from grasspack.geometry import Configuration, gram


def _row(**kw):
    base = dict(
        d=3, K=1, N=4, field="real", metric="chordal",
        mu_target=0.5, best_diameter=70.0, avg_diameter=69.0,
        error_vs_reference=math.nan, avg_iterations=100.0, trials_failed=0,
    )
    base.update(kw)
    return ResultRow(**base)


def test_reference_table_load(tmp_path):
    path = tmp_path / "refs.csv"
    path.write_text("d,K,N,value,unit\n3,1,4,70.529,degrees\n4,2,5,1.25,squared_diameter\n")
    ref = ReferenceTable.load(path)
    assert ref.get(3, 1, 4) == (70.529, "degrees")
    assert ref.get(4, 2, 5) == (1.25, "squared_diameter")
    assert ref.get(9, 9, 9) is None


def test_reference_table_duplicate_key(tmp_path):
    path = tmp_path / "refs.csv"
    path.write_text("3,1,4,70.5,degrees\n3,1,4,70.6,degrees\n")
    with pytest.raises(ParseError):
        ReferenceTable.load(path)


def test_reference_table_bad_unit(tmp_path):
    path = tmp_path / "refs.csv"
    path.write_text("3,1,4,70.5,radians\n")
    with pytest.raises(ParseError):
        ReferenceTable.load(path)


def test_run_experiment_small_projective():
    spec = ExperimentSpec(
        space="projective", field=Field.REAL, metric=Metric.CHORDAL,
        d_values=(3,), N_values=(3, 4), trials=3,
        mu_source="rankin_bound", max_iterations=300, seed=1,
    )
    rows = run_experiment(spec)
    assert [(r.d, r.N) for r in rows] == [(3, 3), (3, 4)]
    for row in rows:
        assert row.trials_failed == 0
        assert row.avg_diameter <= row.best_diameter + 1e-12
        bound_deg = rankin_projective(row.d, row.N, Field.REAL).degrees
        assert row.best_diameter <= bound_deg + 1e-3
        assert math.isfinite(row.avg_iterations)


def test_run_experiment_missing_reference_row(tmp_path):
    path = tmp_path / "refs.csv"
    path.write_text("3,1,4,70.529,degrees\n")
    spec = ExperimentSpec(
        space="projective", field=Field.REAL, metric=Metric.CHORDAL,
        d_values=(3,), N_values=(4, 5), trials=2,
        mu_source="reference_file", reference_path=str(path),
        max_iterations=100, seed=2,
    )
    rows = run_experiment(spec)
    ok = {r.N: r for r in rows}
    assert math.isfinite(ok[4].best_diameter)
    assert math.isnan(ok[5].best_diameter)
    assert ok[5].trials_failed == spec.trials


def test_run_experiment_rejects_degrees_reference_for_subspaces(tmp_path):
    path = tmp_path / "refs.csv"
    path.write_text("4,2,3,70.0,degrees\n")
    spec = ExperimentSpec(
        space="grassmann", field=Field.COMPLEX, metric=Metric.CHORDAL,
        d_values=(4,), K_values=(2,), N_values=(3,), trials=1,
        mu_source="reference_file", reference_path=str(path),
        max_iterations=10, seed=0,
    )
    with pytest.raises(InvalidInput):
        run_experiment(spec)


def test_run_experiment_sweep_clamps_mu():
    spec = ExperimentSpec(
        space="grassmann", field=Field.COMPLEX, metric=Metric.SPECTRAL,
        d_values=(4,), K_values=(2,), N_values=(3,), trials=1,
        mu_source="rankin_bound", sweep=(1.0, 2.0, 3),
        max_iterations=50, seed=3,
    )
    rows = run_experiment(spec)
    assert len(rows) == 1
    assert math.isfinite(rows[0].best_diameter)


def test_run_experiment_reproducible_and_worker_independent():
    spec = ExperimentSpec(
        space="projective", field=Field.REAL, metric=Metric.CHORDAL,
        d_values=(3,), N_values=(4,), trials=4,
        mu_source="rankin_bound", max_iterations=120, seed=7,
    )
    rows1 = run_experiment(spec)
    rows2 = run_experiment(spec)
    assert rows1 == rows2
    os.environ["GRASSPACK_WORKERS"] = "2"
    try:
        from dataclasses import replace

        rows3 = run_experiment(replace(spec, workers=4))
    finally:
        del os.environ["GRASSPACK_WORKERS"]
    assert rows3 == rows1


def test_compare_reference_exact_and_subtraction():
    ref = ReferenceTable(rows={(3, 1, 4): (70.0, "degrees"), (3, 1, 14): (38.682, "degrees")})
    rows = [
        _row(N=4, best_diameter=70.0),
        _row(N=14, best_diameter=38.462),
    ]
    out = compare_reference(rows, ref)
    assert out[0].error_vs_reference == pytest.approx(0.0, abs=1e-15)
    assert out[1].error_vs_reference == pytest.approx(38.682 - 38.462, abs=1e-12)
    assert out[1].error_vs_reference == pytest.approx(0.221, abs=2e-3)


def test_compare_reference_unit_mismatch():
    ref = ReferenceTable(rows={(3, 1, 4): (1.5, "squared_diameter")})
    with pytest.raises(InvalidInput):
        compare_reference([_row(N=4)], ref)


def test_evaluate_file_orthonormal_lines(tmp_path):
    config = Configuration(field=Field.REAL, blocks=np.eye(3).reshape(3, 3, 1))
    path = tmp_path / "lines.json"
    write_configuration(config, path)
    out = evaluate_file(path)
    assert out["min_angle_degrees"] == pytest.approx(90.0, abs=1e-9)
    assert out["sphere_min_angle_degrees"] == pytest.approx(90.0, abs=1e-9)
    assert out["packing_diameters"]["chordal"] == pytest.approx(1.0, abs=1e-12)


def test_evaluate_file_roundtrip_matches_report(tmp_path):
    config = initial_configuration(4, 2, 4, Field.COMPLEX, InitParams(tau=math.sqrt(2), seed=5))
    rep = alternate(
        gram(config),
        SolveParams(metric=Metric.CHORDAL, mu=0.8, d=4, K=2, N=4, max_iterations=150),
    )
    path = tmp_path / "solved.json"
    write_configuration(rep.final_config, path)
    out = evaluate_file(path)
    assert out["packing_diameters"]["chordal"] == pytest.approx(rep.final_diameter, abs=1e-9)
    assert out["max_block_magnitudes"]["chordal"] == pytest.approx(rep.mu_achieved, abs=1e-9)


def test_evaluate_file_parse_error(tmp_path):
    path = tmp_path / "garbage.json"
    path.write_text("{{{{")
    with pytest.raises(ParseError):
        evaluate_file(path)


def test_export_csv_two_lines(tmp_path):
    rows = [_row()]
    paths = export(rows, "csv", tmp_path, timestamp=False)
    text = open(paths[0]).read().strip().split("\n")
    assert len(text) == 2
    assert text[0].startswith("d,K,N,field,metric,mu_target")


def test_results_csv_roundtrip_17_digits(tmp_path):
    rows = [
        _row(mu_target=1 / 3, best_diameter=math.sqrt(2), avg_diameter=math.pi / 7,
             avg_iterations=1234.5, error_vs_reference=1e-17),
        _row(N=5, best_diameter=math.nan, avg_diameter=math.nan,
             mu_target=math.nan, avg_iterations=math.nan, trials_failed=3),
    ]
    path = tmp_path / "results.csv"
    write_results_csv(rows, path, timestamp=False)
    back = read_results_csv(path)
    for a, b in zip(back, rows):
        for name in ("mu_target", "best_diameter", "avg_diameter", "avg_iterations"):
            x, y = getattr(a, name), getattr(b, name)
            assert (math.isnan(x) and math.isnan(y)) or x == y
        assert a.trials_failed == b.trials_failed


def test_export_plot_data_series(tmp_path):
    rows = [
        _row(d=4, K=2, N=n, field="complex", metric="chordal",
             best_diameter=1.0 + 1.0 / n, error_vs_reference=0.01)
        for n in range(3, 21)
    ]
    paths = export(rows, "plot_data", tmp_path, timestamp=False)
    assert len(paths) == 1
    lines = open(paths[0]).read().strip().split("\n")
    assert lines[0] == "N,achieved,bound,reference"
    assert len(lines) == 1 + 18
    first = lines[1].split(",")
    assert int(first[0]) == 3
    assert float(first[2]) == pytest.approx(1.5)  # chordal bound (4,2,3)
    assert float(first[3]) == pytest.approx(float(first[1]) + 0.01)


def test_export_nothing():
    with pytest.raises(InvalidInput):
        export([], "csv", ".")


def test_spec_validation():
    with pytest.raises(InvalidInput):
        ExperimentSpec(space="orbit", field=Field.REAL, metric=Metric.CHORDAL,
                       d_values=(3,), N_values=(4,))
    with pytest.raises(InvalidInput):
        ExperimentSpec(space="sphere", field=Field.REAL, metric=Metric.CHORDAL,
                       d_values=(3,), N_values=(4,))
    with pytest.raises(InvalidInput):
        ExperimentSpec(space="grassmann", field=Field.REAL, metric=Metric.GEODESIC,
                       d_values=(3,), K_values=(2,), N_values=(4,))
    with pytest.raises(InvalidInput):
        ExperimentSpec(space="grassmann", field=Field.COMPLEX, metric=Metric.FUBINI_STUDY,
                       d_values=(4,), K_values=(2,), N_values=(4,),
                       mu_source="explicit")  # missing mu_explicit
