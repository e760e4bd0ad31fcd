"""Simulated dynamics: leakage time series, evolution distances, sweeps.

All propagators come from one Hermitian eigendecomposition of H carried
out in the eigenbasis of H0, where the partition projections are
coordinate masks; leakage values are then singular values of off-block
submatrices of the propagator.  The non-Hermitian Bloch generator is
never exponentiated directly; its evolution is obtained through the
similarity with H.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import bounds
from .bloch_solver import BlochSolution, ProblemInstance, solve_bloch_series
from .errors import DegenerateSweep, GroupNotPreserved
from .operator_core import OperatorMatrix, operator_norm
from .schrieffer_wolff import SWSolution, sw_transform

VIOLATION_SLACK = 1e-9


@dataclass(frozen=True)
class LeakageReport:
    """Leakage and distance series over a time grid, with their bounds."""

    times: np.ndarray
    per_block_leakage: np.ndarray      # shape (n_groups, n_times)
    d_bloch_series: np.ndarray | None  # per-time ||e^-itH - e^-itH_Bloch||
    d_sw_series: np.ndarray | None
    bounds: bounds.BoundReport
    max_leakage: float
    violations: tuple

    def to_json(self) -> dict:
        return {
            "times": self.times.tolist(),
            "per_block_leakage": self.per_block_leakage.tolist(),
            "d_bloch": None if self.d_bloch_series is None else self.d_bloch_series.tolist(),
            "d_sw": None if self.d_sw_series is None else self.d_sw_series.tolist(),
            "bounds": self.bounds.to_json(),
            "max_leakage": self.max_leakage,
            "violations": [list(v) for v in self.violations],
        }

    def to_csv(self) -> str:
        """Plot-ready series, columns t, k, leakage, d_bloch, d_sw."""
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["t", "k", "leakage", "d_bloch", "d_sw"])
        for j, t in enumerate(self.times):
            db = "" if self.d_bloch_series is None else repr(float(self.d_bloch_series[j]))
            ds = "" if self.d_sw_series is None else repr(float(self.d_sw_series[j]))
            for k in range(self.per_block_leakage.shape[0]):
                writer.writerow([repr(float(t)), k,
                                 repr(float(self.per_block_leakage[k, j])), db, ds])
        return buf.getvalue()


class _Evolution:
    """Eigendecomposition of H expressed in the H0 eigenbasis."""

    def __init__(self, inst: ProblemInstance):
        u0 = inst.partition.eig.eigenvectors
        h_eig = u0.conj().T @ inst.h.entries @ u0
        h_eig = 0.5 * (h_eig + h_eig.conj().T)
        self.lam, self.s = np.linalg.eigh(h_eig)
        self.dim = inst.dim
        self.groups = [np.asarray(g) for g in inst.partition.groups]
        self.outs = [np.setdiff1d(np.arange(self.dim), g) for g in self.groups]

    def propagator(self, t: float) -> np.ndarray:
        return (self.s * np.exp(-1j * t * self.lam)) @ self.s.conj().T

    def leakage(self, k: int, t: float) -> float:
        block = (self.s[self.outs[k]] * np.exp(-1j * t * self.lam)) @ self.s[
            self.groups[k]
        ].conj().T
        if block.size == 0:
            return 0.0
        return float(np.linalg.svd(block, compute_uv=False)[0])


def leakage_at(inst: ProblemInstance, k: int, t: float) -> float:
    """Leakage out of the k-th spectral component at time t,
    ``||Q_k exp(-i t H) P_k||``."""
    if not 0 <= k < inst.partition.n_groups:
        raise IndexError(f"group index {k} out of range")
    return _Evolution(inst).leakage(k, t)


def evolution_distance(
    inst: ProblemInstance,
    generator: OperatorMatrix,
    t: float,
    similarity: OperatorMatrix | None = None,
) -> float:
    """Operator-norm distance between the true and effective evolutions.

    For a Hermitian generator both sides use spectral propagators.  For
    the non-Hermitian Bloch generator, pass the wave operator as
    ``similarity`` so the effective evolution is computed exactly as
    ``Omega^-1 exp(-i t H) Omega``.
    """
    from .operator_core import herm_eig, invert, unitary_propagator

    e_true = _Evolution(inst)
    u0 = inst.partition.eig.eigenvectors
    true_prop = u0 @ e_true.propagator(t) @ u0.conj().T
    if similarity is not None:
        om = similarity.entries
        om_inv = invert(similarity).entries
        eff = om_inv @ true_prop @ om
    else:
        eff = unitary_propagator(herm_eig(generator), t).entries
    return operator_norm(true_prop - eff)


def run_leakage_experiment(
    inst: ProblemInstance,
    t_grid,
    with_distances: bool = True,
    series_tol: float = 1e-12,
) -> LeakageReport:
    """Leakage of every block over the grid, optionally with the
    Bloch/Schrieffer-Wolff distance series, checked against the bounds.

    Distance series require gamma above the respective thresholds and
    are skipped (None) otherwise; the sharp-bound violation scan runs
    whenever the sharp bound exists.
    """
    times = np.asarray(t_grid, dtype=float)
    evo = _Evolution(inst)
    n_groups = inst.partition.n_groups
    leak = np.zeros((n_groups, times.size))
    for j, t in enumerate(times):
        for k in range(n_groups):
            leak[k, j] = evo.leakage(k, t)

    report = bounds.bound_report(inst.v_norm, inst.gamma, inst.partition.gap)

    d_bloch = d_sw = None
    if with_distances and inst.gamma > report.gamma_threshold_bloch:
        bloch = solve_bloch_series(inst, tol=series_tol)
        omega = bloch.omega.entries
        omega_inv = np.linalg.inv(omega)
        sw = None
        if inst.gamma > report.gamma_threshold_sw:
            sw = sw_transform(inst, bloch)
            w = sw.w.entries
        u0 = inst.partition.eig.eigenvectors
        om_e = u0.conj().T @ omega @ u0       # into the H0 eigenbasis
        om_inv_e = u0.conj().T @ omega_inv @ u0
        if sw is not None:
            w_e = u0.conj().T @ w @ u0
        d_bloch = np.zeros(times.size)
        d_sw = np.zeros(times.size) if sw is not None else None
        for j, t in enumerate(times):
            prop = evo.propagator(t)
            d_bloch[j] = operator_norm(prop - om_inv_e @ prop @ om_e)
            if d_sw is not None:
                d_sw[j] = operator_norm(prop - w_e.conj().T @ prop @ w_e)

    violations = []
    if report.epsilon is not None:
        bad = np.argwhere(leak > report.epsilon + VIOLATION_SLACK)
        violations = [(int(k), float(times[j])) for k, j in bad]

    return LeakageReport(
        times=times,
        per_block_leakage=leak,
        d_bloch_series=d_bloch,
        d_sw_series=d_sw,
        bounds=report,
        max_leakage=float(leak.max()),
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class SweepResult:
    """Per-gamma leakage maxima and the fitted log-log slope."""

    gammas: np.ndarray
    max_leakages: np.ndarray
    slope: float

    def to_json(self) -> dict:
        return {
            "gammas": self.gammas.tolist(),
            "max_leakages": self.max_leakages.tolist(),
            "slope": self.slope,
        }


def gamma_scaling_sweep(template: ProblemInstance, gammas, t_grid, max_workers: int = 1) -> SweepResult:
    """Max leakage versus gamma and the least-squares slope of the
    log-log relation (expected close to -1).

    Sweep points are independent; ``max_workers`` > 1 runs them on a
    thread pool (the heavy lifting is in BLAS, which releases the GIL).
    """
    gam = np.sort(np.asarray(gammas, dtype=float))

    def point(g):
        inst = ProblemInstance(template.h0, template.v, float(g), template.partition)
        return run_leakage_experiment(inst, t_grid, with_distances=False).max_leakage

    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            maxima = list(pool.map(point, gam))
    else:
        maxima = [point(g) for g in gam]
    maxima = np.asarray(maxima)
    usable = maxima > 0
    if usable.sum() < 4:
        raise DegenerateSweep(
            f"only {int(usable.sum())} usable sweep points",
            operation="gamma_scaling_sweep",
        )
    slope = float(np.polyfit(np.log(gam[usable]), np.log(maxima[usable]), 1)[0])
    return SweepResult(gammas=gam, max_leakages=maxima, slope=slope)


def truncation_convergence_study(builder, cutoffs, t_probe: float, k: int):
    """Leakage at ``t_probe`` for a sequence of truncation cutoffs.

    ``builder`` maps a cutoff to a ProblemInstance.  The probed group
    must exist at every cutoff and keep (approximately) the same
    spectral interval; otherwise the truncation has destroyed the band
    under study.
    """
    cut = list(cutoffs)
    if any(b >= a for a, b in zip(cut[1:], cut)):
        raise ValueError("cutoffs must be strictly increasing")
    ref_interval = None
    values = []
    for c in cut:
        inst = builder(c)
        part = inst.partition
        if k >= part.n_groups:
            raise GroupNotPreserved(
                f"cutoff {c} leaves only {part.n_groups} groups, probe was {k}",
                operation="truncation_convergence_study",
            )
        interval = part.component_intervals[k]
        if ref_interval is None:
            ref_interval = interval
        else:
            drift = max(abs(interval[0] - ref_interval[0]), abs(interval[1] - ref_interval[1]))
            if drift > part.gap / 2.0:
                raise GroupNotPreserved(
                    f"group {k} interval moved by {drift:.3g} at cutoff {c}",
                    operation="truncation_convergence_study",
                )
        values.append(leakage_at(inst, k, t_probe))
    return values
