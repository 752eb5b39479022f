"""Closed-form 1-D vibrational models in modal coordinates.

Three model families share the same rank-one damping machinery: the n-mass
spring chain (discretized string), the spectral string, and the spectral rod.
All carry ascending undamped eigenfrequencies; dampers are modal vectors c so
that the damping matrix is v * c c^T.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# Entries smaller than this are treated as exact zeros: downstream formulas
# divide by c_k^2, so the undamped-mode set must be explicit, not discovered
# through overflow.
ZERO_ENTRY_THRESHOLD = 1e-300

# A damper position whose mode argument k*y is within this distance of an
# integer sits at a node of that mode; the entry is snapped to exactly 0.
NODE_SNAP_TOL = 1e-9


class ModelKind(enum.Enum):
    CHAIN = "chain"
    STRING = "string"
    ROD = "rod"


@dataclass
class ModalModel:
    """A vibrational system in modal coordinates."""

    n: int
    omegas: np.ndarray  # strictly ascending, all > 0
    kind: ModelKind
    rod_a0: float | None = None
    rod_k0: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"model dimension must be >= 1, got {self.n}")
        if self.omegas.shape != (self.n,):
            raise ValueError("omegas length must equal n")
        if not np.all(self.omegas > 0):
            raise ValueError("all eigenfrequencies must be positive")
        if not np.all(np.diff(self.omegas) > 0):
            raise ValueError("eigenfrequencies must be strictly increasing")
        self.omegas.flags.writeable = False


@dataclass
class DamperVector:
    """Modal damping direction c (damping matrix is v * c c^T)."""

    entries: np.ndarray
    position_label: float
    zero_modes: np.ndarray = field(default=None)  # bool mask of undamped modes

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.float64)
        mask = np.abs(entries) < ZERO_ENTRY_THRESHOLD
        entries = entries.copy()
        entries[mask] = 0.0
        entries.flags.writeable = False
        mask.flags.writeable = False
        self.entries = entries
        self.zero_modes = mask

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def squared(self) -> np.ndarray:
        return self.entries * self.entries


@dataclass
class ChainMatrices:
    """Full mass/stiffness matrices of the uniform chain (eigen-oracle input)."""

    n: int
    mass: np.ndarray
    stiffness: np.ndarray


def chain_model(n: int) -> ModalModel:
    """Uniform n-mass chain; omega_l = 2 sin(l pi / (2(n+1)))."""
    if n < 1:
        raise ValueError(f"chain dimension must be >= 1, got {n}")
    l = np.arange(1, n + 1)
    omegas = 2.0 * np.sin(l * np.pi / (2.0 * (n + 1)))
    return ModalModel(n=n, omegas=omegas, kind=ModelKind.CHAIN)


def string_model(n_modes: int) -> ModalModel:
    """Spectral truncation of the fixed-fixed string; omega_k = k pi."""
    if n_modes < 1:
        raise ValueError(f"mode count must be >= 1, got {n_modes}")
    k = np.arange(1, n_modes + 1)
    return ModalModel(n=n_modes, omegas=k * np.pi, kind=ModelKind.STRING)


def rod_model(n_modes: int, a0: float = 1.0, k0: float = 1.0) -> ModalModel:
    """Spectral rod; omega_k = k pi sqrt(k^2 pi^2 a0 + k0)."""
    if n_modes < 1:
        raise ValueError(f"mode count must be >= 1, got {n_modes}")
    if a0 < 0 or k0 <= 0:
        raise ValueError(f"rod parameters need a0 >= 0 and k0 > 0, got a0={a0}, k0={k0}")
    k = np.arange(1, n_modes + 1)
    omegas = k * np.pi * np.sqrt((k * np.pi) ** 2 * a0 + k0)
    return ModalModel(n=n_modes, omegas=omegas, kind=ModelKind.ROD,
                      rod_a0=a0, rod_k0=k0)


@lru_cache(maxsize=16)
def _chain_sin_table(n: int) -> np.ndarray:
    """sin(pi*m/(n+1)) for m = 0..2n+1, with reflections copied bit-exactly.

    Damper entries sin(j*k*pi/(n+1)) are periodic in j*k with period 2(n+1),
    so one table serves every position; mirrored construction makes positions
    k and n+1-k produce entrywise +-identical vectors and puts exact zeros at
    nodes (j*k divisible by n+1).
    """
    np1 = n + 1
    tab = np.empty(2 * np1)
    for m in range(np1 // 2 + 1):
        v = math.sin(math.pi * m / np1)
        tab[m] = v
        tab[np1 - m] = v
        tab[np1 + m] = -v
        if m >= 1:
            tab[2 * np1 - m] = -v
    tab.flags.writeable = False
    return tab


def chain_damper(k: int, n: int) -> DamperVector:
    """Damper at mass k of the n-chain: entries are the k-th eigenvector."""
    if not 1 <= k <= n:
        raise ValueError(f"position index must be in [1, {n}], got {k}")
    tab = _chain_sin_table(n)
    j = np.arange(1, n + 1, dtype=np.int64)
    m = (j * k) % (2 * (n + 1))
    entries = math.sqrt(2.0 / (n + 1)) * tab[m]
    return DamperVector(entries=entries, position_label=k / n)


def chain_damper_continuous(z: float, n: int) -> DamperVector:
    """Chain damper with the discrete position made continuous, 0 < z <= 1.

    At z = k/n this reproduces chain_damper(k, n) exactly; z*n within
    NODE_SNAP_TOL of an integer is routed through the integer path.
    """
    if not 0.0 < z <= 1.0:
        raise ValueError(f"position must be in (0, 1], got {z}")
    t = z * n
    r = round(t)
    if abs(t - r) <= NODE_SNAP_TOL and 1 <= r <= n:
        d = chain_damper(int(r), n)
        return DamperVector(entries=d.entries, position_label=z)
    j = np.arange(1, n + 1)
    entries = math.sqrt(2.0 / (n + 1)) * np.sin(j * z * n * np.pi / (n + 1))
    return DamperVector(entries=entries, position_label=z)


def string_damper(y: float, n_modes: int) -> DamperVector:
    """Point damper at 0 < y < 1 on the string/rod: entries sin(k pi y)/sqrt(2).

    Modes whose argument k*y falls within NODE_SNAP_TOL of an integer sit at
    a node and get an exact zero entry.
    """
    if not 0.0 < y < 1.0:
        raise ValueError(f"damper position must be in (0, 1), got {y}")
    k = np.arange(1, n_modes + 1)
    t = k * y
    at_node = np.abs(t - np.round(t)) < NODE_SNAP_TOL
    entries = np.where(at_node, 0.0, np.sin(np.pi * t) / math.sqrt(2.0))
    return DamperVector(entries=entries, position_label=y)


def damper_norm_closed_form(y: float, n: int) -> float:
    """Squared norm of the string damper via the finite geometric sum.

    ||c(y)||^2 = n/4 - Re(sum_{k<=n} e^{2 k pi i y})/4 = sum (1/2) sin^2(k pi y).
    """
    if not 0.0 < y < 1.0:
        raise ValueError(f"damper position must be in (0, 1), got {y}")
    w = complex(math.cos(2 * math.pi * y), math.sin(2 * math.pi * y))
    geo = w * (1.0 - w**n) / (1.0 - w)
    return n / 4.0 - geo.real / 4.0


def assemble_chain_matrices(n: int) -> ChainMatrices:
    """Identity mass and tridiagonal (-1, 2, -1) stiffness of the chain."""
    if n < 1:
        raise ValueError(f"chain dimension must be >= 1, got {n}")
    stiffness = np.zeros((n, n))
    np.fill_diagonal(stiffness, 2.0)
    idx = np.arange(n - 1)
    stiffness[idx, idx + 1] = -1.0
    stiffness[idx + 1, idx] = -1.0
    return ChainMatrices(n=n, mass=np.eye(n), stiffness=stiffness)


def chain_eigenvector_matrix(n: int) -> np.ndarray:
    """Q with q_rl = sqrt(2/(n+1)) sin(r l pi/(n+1)); symmetric and orthogonal."""
    tab = _chain_sin_table(n)
    idx = np.arange(1, n + 1, dtype=np.int64)
    m = (idx[:, None] * idx[None, :]) % (2 * (n + 1))
    return math.sqrt(2.0 / (n + 1)) * tab[m]


def _negative_pivots(x: float, n: int) -> int:
    # Sturm/LDL^T pivot count for tridiag(-1, 2, -1) - x I: the number of
    # negative pivots equals the number of eigenvalues below x.
    count = 0
    d = 2.0 - x
    if d == 0.0:
        d = -1e-300
    if d < 0:
        count += 1
    for _ in range(n - 1):
        d = (2.0 - x) - 1.0 / d
        if d == 0.0:
            d = -1e-300
        if d < 0:
            count += 1
    return count


def sturm_chain_eigenvalues(n: int, tol: float = 1e-12) -> np.ndarray:
    """Eigenvalues of the chain stiffness by Sturm-sequence bisection.

    Self-contained oracle, deliberately independent of both the closed-form
    spectrum and library eigensolvers.
    """
    eigs = np.empty(n)
    for i in range(1, n + 1):
        lo, hi = 0.0, 4.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _negative_pivots(mid, n) >= i:
                hi = mid
            else:
                lo = mid
        eigs[i - 1] = 0.5 * (lo + hi)
    return eigs
