"""Unitary Schrieffer-Wolff transformation built from the Bloch wave operator.

The polar factor ``W = Omega (Omega^dag Omega)^(-1/2)`` is the direct
rotation between the unperturbed spectral subspaces and their perturbed
counterparts; conjugating H with it yields a Hermitian block-diagonal
effective generator.  The perturbed projections are assembled from the
per-block wave operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bounds
from .bloch_solver import BlochSolution, ProblemInstance
from .errors import GammaBelowSWThreshold, SingularBlockGram
from .operator_core import OperatorMatrix, inv_sqrt_psd


@dataclass(frozen=True)
class SWSolution:
    """Unitary W, Hermitian effective generator, perturbed projections."""

    w: OperatorMatrix
    h_sw: OperatorMatrix
    perturbed_projections: tuple

    def to_json(self, partition=None) -> dict:
        from .operator_core import operator_norm
        from .spectral_partition import projection

        out = {
            "w": self.w.to_json(),
            "h_sw": self.h_sw.to_json(),
            "w_minus_identity_norm": operator_norm(
                self.w.entries - np.eye(self.w.dim)
            ),
        }
        if partition is not None:
            out["projection_shifts"] = [
                operator_norm(pt.entries - projection(partition, k).entries)
                for k, pt in enumerate(self.perturbed_projections)
            ]
        return out


def sw_transform(inst: ProblemInstance, bloch: BlochSolution) -> SWSolution:
    """Polar-unitarize the wave operator and conjugate the Hamiltonian.

    Requires gamma above the Schrieffer-Wolff threshold
    ``2 pi / (sqrt(2) - 1) * ||V|| / eta``, equivalently
    delta(x) < sqrt(2) - 1, so the Gram matrix stays safely invertible.
    """
    threshold = bounds.gamma_threshold_sw(inst.v_norm, inst.partition.gap)
    if inst.gamma <= threshold:
        raise GammaBelowSWThreshold(
            f"gamma = {inst.gamma:.6g} <= 2 pi/(sqrt(2)-1) ||V||/eta = {threshold:.6g}",
            operation="sw_transform",
        )
    omega = bloch.omega.entries
    gram = omega.conj().T @ omega
    gram_op = OperatorMatrix(0.5 * (gram + gram.conj().T), hermitian_hint=True)
    root_inv = inv_sqrt_psd(gram_op)
    w = omega @ root_inv.entries
    h = inst.h.entries
    h_sw = w.conj().T @ h @ w
    h_sw = 0.5 * (h_sw + h_sw.conj().T)
    projections = tuple(
        perturbed_projection(inst, bloch, k) for k in range(inst.partition.n_groups)
    )
    return SWSolution(
        w=OperatorMatrix(w),
        h_sw=OperatorMatrix(h_sw, hermitian_hint=True),
        perturbed_projections=projections,
    )


def perturbed_projection(inst: ProblemInstance, bloch: BlochSolution, k: int) -> OperatorMatrix:
    """Spectral projection of H onto the k-th deformed subspace.

    ``P~_k = Omega_k (Omega_k^dag Omega_k)^-1 Omega_k^dag`` with the Gram
    inverse taken on the range of P_k.  Hermitian, idempotent, commutes
    with H, and tends to P_k as gamma grows.
    """
    group = inst.partition.groups[k]
    u = inst.partition.eig.eigenvectors[:, group]
    # columns of Omega_k in the subspace basis: dim x |group|
    cols = bloch.omega.entries @ u
    gram = cols.conj().T @ cols
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularBlockGram(
            f"block Gram matrix for group {k} has condition {cond:.3e}",
            operation="perturbed_projection",
        )
    p = cols @ np.linalg.solve(gram, cols.conj().T)
    return OperatorMatrix(0.5 * (p + p.conj().T), hermitian_hint=True)
