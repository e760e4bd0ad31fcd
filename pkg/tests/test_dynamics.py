import csv
import io
import json
import math

import numpy as np
import pytest

from leakage import (
    HarmonicChainSpec,
    ProblemInstance,
    build_harmonic_chain,
    epsilon_of,
    evolution_distance,
    gamma_scaling_sweep,
    herm_eig,
    leakage_at,
    partition_by_intervals,
    run_leakage_experiment,
    solve_bloch_series,
    sw_transform,
    truncation_convergence_study,
)
from leakage.errors import DegenerateSweep, GroupNotPreserved

from conftest import make_instance


def rabi_leakage(t, v=0.05):
    """Two-level closed form: (v / w) |sin(w t)| with w = sqrt(1/4 + v^2)."""
    w = math.sqrt(0.25 + v * v)
    return v / w * abs(math.sin(w * t))


def test_leakage_two_level_closed_form(rabi_instance):
    for t in [0.0, 0.3, 1.0, 3.7, 10.0, 55.5]:
        ref = rabi_leakage(t)
        for k in range(2):
            assert leakage_at(rabi_instance, k, t) == pytest.approx(ref, abs=1e-12)


def test_leakage_index_checked(rabi_instance):
    with pytest.raises(IndexError):
        leakage_at(rabi_instance, 2, 1.0)


def test_experiment_report(rabi_instance):
    times = np.linspace(0.0, 20.0, 201)
    rep = run_leakage_experiment(rabi_instance, times)
    assert rep.per_block_leakage.shape == (2, 201)
    assert rep.per_block_leakage[:, 0].max() < 1e-15
    assert rep.violations == ()
    assert rep.max_leakage <= rep.bounds.epsilon
    ref = np.array([rabi_leakage(t) for t in times])
    assert np.abs(rep.per_block_leakage[0] - ref).max() < 1e-12
    # distance series start at zero and respect their eternal bounds
    assert rep.d_bloch_series is not None and rep.d_sw_series is not None
    assert rep.d_bloch_series[0] < 1e-12
    assert rep.d_sw_series[0] < 1e-12
    assert rep.d_bloch_series.max() <= rep.bounds.epsilon + 1e-9
    assert rep.d_sw_series.max() <= rep.bounds.d_sw_bound + 1e-9


def test_distances_skipped_below_threshold():
    inst = make_instance(51, 6, 2, x=0.3)  # beyond the series radius
    rep = run_leakage_experiment(inst, np.linspace(0.0, 5.0, 11))
    assert rep.d_bloch_series is None and rep.d_sw_series is None
    assert rep.bounds.epsilon is None
    assert rep.violations == ()


def test_report_serialization(rabi_instance):
    times = np.linspace(0.0, 5.0, 6)
    rep = run_leakage_experiment(rabi_instance, times)
    json.dumps(rep.to_json())  # must be plain types throughout
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["t", "k", "leakage", "d_bloch", "d_sw"]
    assert len(rows) == 1 + 6 * 2
    # repr round-trip keeps every float exact
    t0, k0, leak0, db0, ds0 = rows[3]
    j, k = 1, 0
    assert float(t0) == times[j] and int(k0) == k
    assert float(leak0) == rep.per_block_leakage[k, j]
    assert float(db0) == rep.d_bloch_series[j]


def test_evolution_distance_matches_series(rabi_instance):
    sol = solve_bloch_series(rabi_instance)
    sw = sw_transform(rabi_instance, sol)
    times = np.linspace(0.0, 10.0, 21)
    rep = run_leakage_experiment(rabi_instance, times)
    for j in [3, 11, 20]:
        d_sw = evolution_distance(rabi_instance, sw.h_sw, float(times[j]))
        assert d_sw == pytest.approx(rep.d_sw_series[j], abs=1e-11)
        d_bloch = evolution_distance(
            rabi_instance, sol.h_bloch, float(times[j]), similarity=sol.omega
        )
        assert d_bloch == pytest.approx(rep.d_bloch_series[j], abs=1e-11)


def test_leakage_decreases_with_gamma():
    base = make_instance(52, 8, 2, x=0.02)
    times = np.linspace(0.0, 40.0, 161)
    res = gamma_scaling_sweep(base, [10.0, 30.0, 100.0, 300.0], times)
    assert np.all(np.diff(res.max_leakages) < 0)
    assert res.slope == pytest.approx(-1.0, abs=0.3)
    json.dumps(res.to_json())


def test_sweep_threaded_matches_serial():
    base = make_instance(53, 6, 2, x=0.02)
    times = np.linspace(0.0, 20.0, 81)
    gammas = [10.0, 20.0, 40.0, 80.0]
    serial = gamma_scaling_sweep(base, gammas, times, max_workers=1)
    threaded = gamma_scaling_sweep(base, gammas, times, max_workers=4)
    assert np.array_equal(serial.max_leakages, threaded.max_leakages)
    assert serial.slope == threaded.slope


def test_sweep_needs_enough_points():
    base = make_instance(54, 6, 2, x=0.02)
    with pytest.raises(DegenerateSweep):
        gamma_scaling_sweep(base, [10.0, 20.0, 40.0], np.linspace(0.0, 5.0, 11))


def harmonic_builder(cutoff):
    spec = HarmonicChainSpec(n_sites=4, omega=10.0, g=1.0, fock_cutoff=cutoff, v0=0.05)
    h0, v, intervals = build_harmonic_chain(spec)
    part = partition_by_intervals(herm_eig(h0), intervals)
    return ProblemInstance(h0, v, 1.0, part)


def test_truncation_study_runs():
    vals = truncation_convergence_study(harmonic_builder, [3, 5, 7], 10.0, 0)
    assert len(vals) == 3
    assert all(0.0 < v < epsilon_of(0.05 / 6.0) for v in vals)


def test_truncation_study_guards():
    with pytest.raises(ValueError):
        truncation_convergence_study(harmonic_builder, [5, 5], 10.0, 0)
    with pytest.raises(GroupNotPreserved):
        # probing a band that only exists at the larger cutoff
        truncation_convergence_study(harmonic_builder, [3, 5], 10.0, 5)
