"""Dense complex matrix engine.

Hermitian eigendecomposition, operator norms, matrix functions and the
residual utilities every other module builds on.  All matrices are dense
complex arrays wrapped in :class:`OperatorMatrix`; dimensions at desk
scale (up to a few thousand) so exact factorizations (SVD, eigh) are
always affordable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonHermitianInput, NotPositiveDefinite, SingularMatrix

HERMITICITY_RTOL = 1e-12
PSD_FLOOR = 1e-12
COND_MAX = 1e12


@dataclass(frozen=True)
class OperatorMatrix:
    """Square complex matrix with an optional Hermiticity promise.

    The ``hermitian_hint`` flag is verified at construction time:
    ``max |M - M^dag|`` entrywise must not exceed ``1e-12 * max|M|``.
    """

    entries: np.ndarray
    hermitian_hint: bool = False

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"entries must be a square matrix, got shape {m.shape}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        if self.hermitian_hint:
            scale = np.abs(m).max()
            dev = np.abs(m - m.conj().T).max()
            if dev > HERMITICITY_RTOL * max(scale, 1e-300):
                raise NonHermitianInput(
                    f"hermitian_hint set but max|M - M^dag| = {dev:.3e} "
                    f"exceeds {HERMITICITY_RTOL:.0e} * max|M| = {HERMITICITY_RTOL * scale:.3e}"
                )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @staticmethod
    def identity(dim: int) -> "OperatorMatrix":
        return OperatorMatrix(np.eye(dim, dtype=complex), hermitian_hint=True)

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, hermitian_hint=self.hermitian_hint)

    def to_json(self) -> dict:
        """Repo-wide matrix encoding: row-major ``[re, im]`` pairs."""
        n = self.dim
        flat = self.entries.reshape(-1)
        return {"dim": n, "entries": [[float(z.real), float(z.imag)] for z in flat]}

    @staticmethod
    def from_json(obj: dict, hermitian_hint: bool = False) -> "OperatorMatrix":
        n = int(obj["dim"])
        flat = np.array([complex(re, im) for re, im in obj["entries"]])
        if flat.size != n * n:
            raise ValueError(f"expected {n * n} entries, got {flat.size}")
        return OperatorMatrix(flat.reshape(n, n), hermitian_hint=hermitian_hint)


@dataclass(frozen=True)
class HermitianEigenSystem:
    """Eigendecomposition M = U diag(lambda) U^dag with ascending eigenvalues."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source_dim: int = field(default=0)

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float).copy()
        u = np.asarray(self.eigenvectors, dtype=complex).copy()
        lam.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "eigenvectors", u)
        if self.source_dim == 0:
            object.__setattr__(self, "source_dim", lam.size)


def operator_norm(m) -> float:
    """Largest singular value of ``m`` (OperatorMatrix or array)."""
    a = m.entries if isinstance(m, OperatorMatrix) else np.asarray(m, dtype=complex)
    if not np.any(a):
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def herm_eig(m: OperatorMatrix) -> HermitianEigenSystem:
    """Spectral decomposition of a Hermitian matrix.

    Requires ``hermitian_hint`` (the hint was verified at construction).
    """
    if not m.hermitian_hint:
        # re-run the check so callers holding a plain matrix get a clear error
        dev = np.abs(m.entries - m.entries.conj().T).max()
        scale = max(np.abs(m.entries).max(), 1e-300)
        if dev > HERMITICITY_RTOL * scale:
            raise NonHermitianInput(
                f"max|M - M^dag| = {dev:.3e} too large for a Hermitian input",
                operation="herm_eig",
            )
    lam, u = np.linalg.eigh(m.entries)
    return HermitianEigenSystem(lam, u, m.dim)


def unitary_propagator(eig: HermitianEigenSystem, t: float) -> OperatorMatrix:
    """Evolution operator ``U exp(-i t Lambda) U^dag``."""
    if not np.isfinite(t):
        raise ValueError("propagation time must be finite")
    u = eig.eigenvectors
    phases = np.exp(-1j * t * eig.eigenvalues)
    return OperatorMatrix((u * phases) @ u.conj().T)


def inv_sqrt_psd(m: OperatorMatrix, psd_floor: float = PSD_FLOOR) -> OperatorMatrix:
    """Inverse square root of a Hermitian positive definite matrix."""
    eig = herm_eig(m)
    lam_min = eig.eigenvalues.min()
    if lam_min <= psd_floor:
        raise NotPositiveDefinite(
            f"smallest eigenvalue {lam_min:.3e} <= floor {psd_floor:.0e}",
            operation="inv_sqrt_psd",
        )
    u = eig.eigenvectors
    r = (u * eig.eigenvalues ** -0.5) @ u.conj().T
    # symmetrize away roundoff so the result carries the Hermitian promise
    r = 0.5 * (r + r.conj().T)
    return OperatorMatrix(r, hermitian_hint=True)


def invert(m: OperatorMatrix, cond_max: float = COND_MAX) -> OperatorMatrix:
    """Inverse via SVD with an explicit condition-number guard."""
    u, s, vh = np.linalg.svd(m.entries)
    if s[-1] == 0.0 or s[0] / s[-1] > cond_max:
        raise SingularMatrix(
            f"condition number {s[0] / max(s[-1], 1e-300):.3e} exceeds {cond_max:.0e}",
            operation="invert",
        )
    return OperatorMatrix((vh.conj().T / s) @ u.conj().T)
