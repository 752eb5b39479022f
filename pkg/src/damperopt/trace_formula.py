"""Explicit trace of the weighted Lyapunov solution for rank-one damping.

For a damper c with viscosity v and a diagonal weighting Z the weighted trace
of the solution of A^T X + X A = -I is exactly a/v + b*v; the optimal
viscosity sqrt(a/b) and optimal trace 2 sqrt(ab) follow for free. Two
weighting conventions are supported and they differ in substance:

* energy: Z = diag(z, z) over both phase blocks (z an indicator band);
  a = sum 2 z_k / c_k^2 and b carries the full four-term coupling numerator
  with a doubled squared-sum term.
* displacement: Z = diag(z, 0) weights the position block only
  (z = 1/om_k^2 on the band, the diagonal form of K^{-1} in modal
  coordinates); a = sum z_k / c_k^2 and b carries the reduced numerator
  2 om_k^2 c_j^2 + om_k^2 c_k^2 with an unscaled squared-sum term.

Both closed forms are pinned against the dense Lyapunov oracle in the tests.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .models import ModalModel, DamperVector, ModelKind


class Criterion(enum.Enum):
    ENERGY = "energy"
    DISPLACEMENT = "displacement"


_EMPTY = np.empty(0)


@lru_cache(maxsize=16)
def _chain_half_sin_table(n: int) -> np.ndarray:
    # sin(m pi / (2(n+1))) for m = 0..2n; feeds the cancellation-free
    # product form om_k^2 - om_j^2 = 4 sin((k+j)t) sin((k-j)t)
    tab = np.sin(np.arange(2 * n + 1) * (np.pi / (2.0 * (n + 1))))
    tab.flags.writeable = False
    return tab


@dataclass
class SpectralWeights:
    """Diagonal weights selecting the frequency band to calm."""

    z: np.ndarray            # length n, nonzero exactly on the band
    band_offset: int         # i: weighted modes are i+1 .. i+s (1-based)
    band_count: int          # s
    criterion: Criterion

    def __post_init__(self):
        if self.band_offset < 0 or self.band_count < 1:
            raise ValueError("band offset must be >= 0 and count >= 1")
        if self.band_offset + self.band_count > self.z.shape[0]:
            raise ValueError(
                f"band ({self.band_offset}, {self.band_count}) exceeds "
                f"dimension {self.z.shape[0]}")
        self.z.flags.writeable = False

    @property
    def n(self) -> int:
        return self.z.shape[0]

    def band_indices(self) -> np.ndarray:
        return np.arange(self.band_offset, self.band_offset + self.band_count,
                         dtype=np.int64)

    def full_diagonal(self) -> np.ndarray:
        """Diagonal of the 2n x 2n weighting matrix for the phase system."""
        if self.criterion is Criterion.ENERGY:
            return np.concatenate([self.z, self.z])
        return np.concatenate([self.z, np.zeros_like(self.z)])


def energy_weights(i: int, s: int, model: ModalModel) -> SpectralWeights:
    """Indicator weights on modes i+1 .. i+s."""
    z = np.zeros(model.n)
    if i < 0 or s < 1 or i + s > model.n:
        raise ValueError(f"band ({i}, {s}) invalid for dimension {model.n}")
    z[i:i + s] = 1.0
    return SpectralWeights(z=z, band_offset=i, band_count=s,
                           criterion=Criterion.ENERGY)


def displacement_weights(i: int, s: int, model: ModalModel) -> SpectralWeights:
    """Weights 1/om_k^2 on modes i+1 .. i+s (position-block only)."""
    if i < 0 or s < 1 or i + s > model.n:
        raise ValueError(f"band ({i}, {s}) invalid for dimension {model.n}")
    z = np.zeros(model.n)
    z[i:i + s] = 1.0 / model.omegas[i:i + s] ** 2
    return SpectralWeights(z=z, band_offset=i, band_count=s,
                           criterion=Criterion.DISPLACEMENT)


@dataclass
class TraceCoefficients:
    """trace(v) = a/v + b*v with b = b1 + b2 + b3; finite=False marks an
    inadmissible damper (some weighted mode undamped)."""

    a: float
    b1: float
    b2: float
    b3: float
    b: float
    finite: bool


def trace_coefficients(model: ModalModel, damper: DamperVector,
                       weights: SpectralWeights,
                       grouped: bool | None = None) -> TraceCoefficients:
    """Closed-form coefficients for the weighted trace at one damper position.

    grouped selects the chain-specific product-form denominators; by default
    chains use them and spectral models use raw om^2 differences. Both
    groupings agree to ~1e-10 on chains (asserted in the tests).
    """
    if damper.n != model.n or weights.n != model.n:
        raise ValueError("model, damper and weights dimensions must agree")
    if grouped is None:
        grouped = model.kind is ModelKind.CHAIN
    if grouped and model.kind is not ModelKind.CHAIN:
        raise ValueError("grouped denominators only apply to chain models")
    band = weights.band_indices()
    zvals = np.ascontiguousarray(weights.z[band])
    om2 = model.omegas ** 2
    c2 = damper.squared()
    code = _kernels.ENERGY if weights.criterion is Criterion.ENERGY \
        else _kernels.DISPLACEMENT
    sin_half = _chain_half_sin_table(model.n) if grouped else _EMPTY
    a, b1, b2, b3, finite = _kernels._coeffs_core(
        om2, band, zvals, c2, code, grouped, sin_half)
    if not finite:
        inf = math.inf
        return TraceCoefficients(a=inf, b1=inf, b2=inf, b3=inf, b=inf,
                                 finite=False)
    return TraceCoefficients(a=a, b1=b1, b2=b2, b3=b3, b=b1 + b2 + b3,
                             finite=True)


def trace_at(coeffs: TraceCoefficients, v: float) -> float:
    """a/v + b*v; +inf for an inadmissible position."""
    if v <= 0:
        raise ValueError(f"viscosity must be positive, got {v}")
    if not coeffs.finite:
        return math.inf
    return coeffs.a / v + coeffs.b * v


def optimal_viscosity(coeffs: TraceCoefficients) -> float:
    if not coeffs.finite:
        return math.inf
    return math.sqrt(coeffs.a / coeffs.b)


def optimal_trace(coeffs: TraceCoefficients) -> float:
    if not coeffs.finite:
        return math.inf
    return 2.0 * math.sqrt(coeffs.a * coeffs.b)


def one_dof_closed_forms(m: float, k: float, c: float,
                         criterion: Criterion) -> tuple[float, float]:
    """(trace at damping c, optimal damping) for the single oscillator
    m x'' + c x' + k x = 0.

    Energy: trace = 2m/c + c/(2k), optimum at c = 2 sqrt(mk).
    Displacement: trace = m/(kc) + c/(2k^2), optimum at c = sqrt(2) sqrt(mk).
    """
    if m <= 0 or k <= 0 or c <= 0:
        raise ValueError(f"m, k, c must all be positive, got {(m, k, c)}")
    if criterion is Criterion.ENERGY:
        return 2.0 * m / c + c / (2.0 * k), 2.0 * math.sqrt(m * k)
    return m / (k * c) + c / (2.0 * k * k), math.sqrt(2.0) * math.sqrt(m * k)
