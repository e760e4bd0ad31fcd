"""Built-in physical models.

Three systems exercise the bound machinery: a tight-binding ring with a
three-site unit cell and diagonal disorder, a Fock-truncated chain of
coupled oscillators with a band-coupling ladder perturbation, and the
transmon band structure treated at the level of its asymptotic formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonpositiveBandgap
from .operator_core import OperatorMatrix, operator_norm
from .rng import substream


@dataclass(frozen=True)
class ChainSpec:
    """Tight-binding ring of ``n_cells`` three-site unit cells.

    ``disorder_strength`` is the exact target operator norm of the
    diagonal disorder; the raw uniform draw is rescaled to hit it.
    """

    n_cells: int
    g1: float = 1.0
    g2: float = 1.5
    g3: float = 2.0
    disorder_strength: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.n_cells < 2:
            raise ValueError("need at least two unit cells")
        if self.disorder_strength < 0:
            raise ValueError("disorder_strength must be nonnegative")


@dataclass(frozen=True)
class HarmonicChainSpec:
    """Open chain of oscillators, one global Fock ladder per site sector.

    Basis states carry a Fock level k = 0..fock_cutoff and a site index;
    the dimension is ``(fock_cutoff + 1) * n_sites``.
    """

    n_sites: int
    omega: float = 10.0
    g: float = 1.0
    fock_cutoff: int = 3
    v0: float = 0.0

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("need at least two sites")
        if self.fock_cutoff < 2:
            raise ValueError("fock_cutoff must be at least 2")
        if self.omega <= 0 or self.g < 0 or self.v0 < 0:
            raise ValueError("omega must be positive, g and v0 nonnegative")


@dataclass(frozen=True)
class TransmonSpec:
    """Josephson-junction parameters in units of the charge energy."""

    ej_over_ec: float
    transparency_d: float

    def __post_init__(self):
        if self.ej_over_ec <= 0:
            raise ValueError("ej_over_ec must be positive")
        if not 0.0 < self.transparency_d < 1.0:
            raise ValueError("transparency_d must lie in (0, 1)")


def build_chain(spec: ChainSpec):
    """Hamiltonian pair (H0, V) for the disordered tight-binding ring.

    H0 couples site 3j to 3j+1 with g1, 3j+1 to 3j+2 with g2 and 3j+2 to
    3j+3 with g3, wrapping periodically.  V is diagonal disorder drawn
    uniformly from [-1, 1] and rescaled so its norm equals
    ``disorder_strength`` exactly.
    """
    d = 3 * spec.n_cells
    h0 = np.zeros((d, d))
    for j in range(spec.n_cells):
        h0[3 * j, 3 * j + 1] = spec.g1
        h0[3 * j + 1, 3 * j + 2] = spec.g2
        h0[3 * j + 2, (3 * j + 3) % d] = spec.g3
    h0 = h0 + h0.T
    rng = substream(spec.seed, "chain-disorder")
    r = rng.uniform(-1.0, 1.0, size=d)
    if spec.disorder_strength > 0:
        r *= spec.disorder_strength / np.abs(r).max()
    else:
        r = np.zeros(d)
    return (
        OperatorMatrix(h0, hermitian_hint=True),
        OperatorMatrix(np.diag(r), hermitian_hint=True),
    )


def chain_dispersion(k: float, g1: float, g2: float, g3: float):
    """Three band energies at quasi-momentum ``k``, ascending.

    Roots of the depressed cubic ``E^3 - E (g1^2+g2^2+g3^2)
    - 2 g1 g2 g3 cos k = 0``, evaluated with the trigonometric formula
    (the discriminant is nonpositive, so all roots are real).
    """
    p = -(g1 * g1 + g2 * g2 + g3 * g3)
    q = -2.0 * g1 * g2 * g3 * math.cos(k)
    if p == 0.0:
        root = -np.cbrt(q)
        return np.array([root, root, root])
    amp = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (amp * p)  # = 3q/p * sqrt(-3/p) / 3
    arg = min(1.0, max(-1.0, arg))
    phi = math.acos(arg)
    roots = amp * np.cos((phi - 2.0 * math.pi * np.arange(3)) / 3.0)
    return np.sort(roots)


def build_harmonic_chain(spec: HarmonicChainSpec):
    """Hamiltonian pair (H0, V) and band intervals for the oscillator chain.

    H0 has one hopping block per Fock level: diagonal omega*(k + 1/2)
    with nearest-neighbor coupling -g on the open chain.  V couples
    adjacent Fock levels site-diagonally with strength v0/2; its norm
    approaches v0 from below as the cutoff grows.

    Returns ``(h0, v, intervals)`` where ``intervals`` are per-band
    windows usable with ``partition_by_intervals``.
    """
    n, cutoff = spec.n_sites, spec.fock_cutoff
    dim = (cutoff + 1) * n

    def idx(k, i):
        return k * n + i

    h0 = np.zeros((dim, dim))
    for k in range(cutoff + 1):
        for i in range(n):
            h0[idx(k, i), idx(k, i)] = spec.omega * (k + 0.5)
        for i in range(n - 1):
            h0[idx(k, i), idx(k, i + 1)] = -spec.g
            h0[idx(k, i + 1), idx(k, i)] = -spec.g
    v = np.zeros((dim, dim))
    for k in range(cutoff):
        for i in range(n):
            v[idx(k, i), idx(k + 1, i)] = spec.v0 / 2.0
            v[idx(k + 1, i), idx(k, i)] = spec.v0 / 2.0
    intervals = [
        (spec.omega * (k + 0.5) - 2.0 * spec.g, spec.omega * (k + 0.5) + 2.0 * spec.g)
        for k in range(cutoff + 1)
    ]
    return (
        OperatorMatrix(h0, hermitian_hint=True),
        OperatorMatrix(v, hermitian_hint=True),
        intervals,
    )


def harmonic_chain_v_norm(spec: HarmonicChainSpec) -> float:
    """Actual norm of the constructed ladder perturbation.

    Closed form ``v0 * cos(pi / (fock_cutoff + 2))``: the ladder is a
    tridiagonal 0/1 matrix on cutoff+1 levels, identity over sites.
    """
    return spec.v0 * math.cos(math.pi / (spec.fock_cutoff + 2))


def transmon_bandgap(k: int, ej_over_ec: float) -> float:
    """Asymptotic k-th bandgap of the cosine-potential band structure,
    in units of the charge energy.

    Evaluates the four explicit terms of the large-``E_J/E_C`` expansion
    (the higher-order remainder is dropped); accuracy degrades for large
    band index k.
    """
    if k < 0:
        raise ValueError("band index must be nonnegative")
    z = math.sqrt(ej_over_ec / 2.0)
    term0 = 4.0 * z - 1.0 - k
    term1 = (
        3.0 / 32.0 + 3.0 / 32.0 * (2 * k + 1) + (3 * k * k + 3 * k + 1) / 16.0
    ) / z
    term2 = (
        3.0 / 256.0
        + (2 * k + 1) / 16.0
        + 5.0 / 128.0 * (3 * k * k + 3 * k + 1)
        + 5.0 / 256.0 * (4 * k**3 + 5 * k * k + 4 * k + 1)
    ) / (z * z)
    gap = term0 - term1 - term2
    if gap <= 0:
        raise NonpositiveBandgap(
            f"asymptotic bandgap {gap:.6g} not positive at k={k}, "
            f"ej_over_ec={ej_over_ec}",
            operation="transmon_bandgap",
        )
    return gap


def transmon_perturbation_norm(ej_over_ec: float, transparency_d: float) -> float:
    """Norm bound on the beyond-cosine barrier terms, in charge-energy units.

    ``E_J/E_C * D / (8 (1 - D/2))`` for transmission coefficient D.
    """
    d = transparency_d
    return ej_over_ec * d / (8.0 * (1.0 - d / 2.0))
