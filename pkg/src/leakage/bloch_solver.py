"""Perturbative solution of the Bloch equations.

The wave operator is expanded as ``Omega = sum_j gamma^-j Omega^(j)``;
each order solves a Sylvester equation ``[H0, X] = Q_k Y P_k`` which, in
the eigenbasis of H0, reduces to entrywise division by eigenvalue
differences.  Truncation is controlled analytically through the Catalan
tail of the majorant series, never by observed term size alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bounds
from .errors import GammaBelowThreshold, NotConverged, ZeroGap
from .operator_core import OperatorMatrix, operator_norm
from .spectral_partition import SpectralPartition, projection

J_MAX_DEFAULT = 64
SERIES_TOL_DEFAULT = 1e-12


@dataclass(frozen=True)
class ProblemInstance:
    """A perturbed Hamiltonian H = gamma * H0 + V with its partition."""

    h0: OperatorMatrix
    v: OperatorMatrix
    gamma: float
    partition: SpectralPartition

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.h0.dim != self.v.dim:
            raise ValueError("H0 and V dimensions differ")
        if self.partition.dim != self.h0.dim:
            raise ValueError("partition dimension does not match H0")

    @property
    def dim(self) -> int:
        return self.h0.dim

    @property
    def v_norm(self) -> float:
        return operator_norm(self.v)

    @property
    def x(self) -> float:
        """Dimensionless bound argument ||V|| / (gamma * eta)."""
        return self.v_norm / (self.gamma * self.partition.gap)

    @property
    def h(self) -> OperatorMatrix:
        return OperatorMatrix(
            self.gamma * self.h0.entries + self.v.entries, hermitian_hint=True
        )


@dataclass(frozen=True)
class BlochSolution:
    """Summed wave operator and per-order data of the Bloch series."""

    omega_terms: tuple          # Omega^(j), j = 0..J, gamma-independent
    omega: OperatorMatrix
    omega_blocks: tuple         # Omega_k = Omega P_k
    h_bloch: OperatorMatrix
    order: int                  # truncation order J
    tail_bound: float
    delta_bound: float

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "tail_bound": self.tail_bound,
            "delta_bound": self.delta_bound,
            "term_norms": [operator_norm(t) for t in self.omega_terms],
            "omega": self.omega.to_json(),
            "h_bloch": self.h_bloch.to_json(),
        }


def _sylvester_eig(lam, group_mask, eta, y_eig):
    """Solve [H0, X] = Q_k Y P_k in the H0 eigenbasis.

    ``X[a, b] = Y[a, b] / (lam[a] - lam[b])`` on the off-block
    (a outside the group, b inside), zero elsewhere.  Divisors below
    eta/2 indicate inconsistent partition data.
    """
    out = ~group_mask
    diffs = lam[out, None] - lam[None, group_mask]
    if diffs.size and np.abs(diffs).min() < eta / 2.0:
        raise ZeroGap(
            f"eigenvalue difference {np.abs(diffs).min():.3e} below eta/2 = {eta / 2:.3e}",
            operation="solve_block_sylvester",
        )
    x = np.zeros_like(y_eig)
    x[np.ix_(out, group_mask)] = y_eig[np.ix_(out, group_mask)] / diffs
    return x


def _group_masks(part: SpectralPartition):
    masks = []
    for g in part.groups:
        m = np.zeros(part.dim, dtype=bool)
        m[g] = True
        masks.append(m)
    return masks


def solve_block_sylvester(part: SpectralPartition, k: int, y: OperatorMatrix) -> OperatorMatrix:
    """Solve [H0, X] = Q_k Y P_k for X = Q_k X P_k.

    Works in the eigenbasis of H0 where the commutator equation is an
    entrywise division by eigenvalue differences.
    """
    u = part.eig.eigenvectors
    y_eig = u.conj().T @ y.entries @ u
    mask = _group_masks(part)[k]
    x_eig = _sylvester_eig(part.eig.eigenvalues, mask, part.gap, y_eig)
    return OperatorMatrix(u @ x_eig @ u.conj().T)


def bloch_recursion_step(inst: ProblemInstance, prior) -> OperatorMatrix:
    """Next series term Omega^(j) from the terms of order < j.

    ``prior`` lists Omega^(0)..Omega^(j-1) in the original basis, with
    Omega^(0) = 1.
    """
    u = inst.partition.eig.eigenvectors
    v_eig = u.conj().T @ inst.v.entries @ u
    prior_eig = [u.conj().T @ p.entries @ u for p in prior]
    masks = _group_masks(inst.partition)
    x_eig = _recursion_step_eig(
        inst.partition.eig.eigenvalues, v_eig, masks, inst.partition.gap, prior_eig
    )
    return OperatorMatrix(u @ x_eig @ u.conj().T)


def _recursion_step_eig(lam, v_eig, masks, eta, prior_eig):
    """One recursion order, everything expressed in the H0 eigenbasis."""
    j = len(prior_eig)
    if j < 1:
        raise ValueError("prior must contain at least Omega^(0) = identity")
    total = np.zeros_like(v_eig)
    for mask in masks:
        # Omega_k^(i) = Omega^(i) P_k: keep only the group's columns
        y_k = -(v_eig @ prior_eig[j - 1][:, mask])
        for i in range(1, j):
            y_k += prior_eig[i][:, mask] @ (v_eig[mask, :] @ prior_eig[j - 1 - i][:, mask])
        y_full = np.zeros_like(v_eig)
        y_full[:, mask] = y_k
        total += _sylvester_eig(lam, mask, eta, y_full)
    return total


def solve_bloch_series(
    inst: ProblemInstance,
    tol: float = SERIES_TOL_DEFAULT,
    j_max: int = J_MAX_DEFAULT,
) -> BlochSolution:
    """Sum the wave-operator series to the analytically required order.

    The truncation order J is the smallest order whose Catalan tail
    ``sum_{j>J} (pi x)^j C_j`` drops below ``tol``; the per-term Catalan
    majorant guarantees this tail bounds the discarded operator mass.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    eta = inst.partition.gap
    v_norm = inst.v_norm
    threshold = bounds.gamma_threshold_bloch(v_norm, eta)
    if inst.gamma <= threshold:
        raise GammaBelowThreshold(
            f"gamma = {inst.gamma:.6g} <= 4 pi ||V|| / eta = {threshold:.6g}",
            operation="solve_bloch_series",
        )
    x = inst.x

    order = None
    for j in range(j_max + 1):
        if bounds.catalan_tail(x, j) < tol:
            order = j
            break
    if order is None:
        raise NotConverged(
            f"Catalan tail still above tol = {tol:.1e} at order {j_max}",
            operation="solve_bloch_series",
        )

    u = inst.partition.eig.eigenvectors
    lam = inst.partition.eig.eigenvalues
    v_eig = u.conj().T @ inst.v.entries @ u
    masks = _group_masks(inst.partition)

    terms_eig = [np.eye(inst.dim, dtype=complex)]
    for _ in range(order):
        terms_eig.append(_recursion_step_eig(lam, v_eig, masks, eta, terms_eig))

    omega_eig = sum(
        t / inst.gamma**j for j, t in enumerate(terms_eig)
    )
    omega = OperatorMatrix(u @ omega_eig @ u.conj().T)
    omega_terms = tuple(OperatorMatrix(u @ t @ u.conj().T) for t in terms_eig)
    omega_blocks = tuple(
        OperatorMatrix(omega.entries @ projection(inst.partition, k).entries)
        for k in range(inst.partition.n_groups)
    )
    return BlochSolution(
        omega_terms=omega_terms,
        omega=omega,
        omega_blocks=omega_blocks,
        h_bloch=_assemble(inst, omega_blocks),
        order=order,
        tail_bound=bounds.catalan_tail(x, order),
        delta_bound=bounds.delta_of(x),
    )


def _assemble(inst: ProblemInstance, omega_blocks) -> OperatorMatrix:
    h = inst.h.entries
    total = np.zeros((inst.dim, inst.dim), dtype=complex)
    for k in range(inst.partition.n_groups):
        p = projection(inst.partition, k).entries
        total += p @ h @ omega_blocks[k].entries
    return OperatorMatrix(total)


def assemble_h_bloch(inst: ProblemInstance, sol: BlochSolution) -> OperatorMatrix:
    """Block-diagonal effective generator sum_k P_k H Omega_k.

    Similar to H through the wave operator, hence isospectral; generally
    non-Hermitian.
    """
    return _assemble(inst, sol.omega_blocks)
