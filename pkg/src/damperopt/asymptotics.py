"""Dimension-free limits of the trace coefficients for the chain.

At a fixed relative position p the energy coefficients a(n), b(n) grow
linearly in n and the displacement ones cubically; the slopes (and two upper
bounds that replace slopes for the coupling terms) have closed forms in p and
the band size s. Positions where sin(pi k p) = 0 for a weighted mode k put
the damper on a node; the affected quantities are infinite there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .trace_formula import Criterion
from .positions import scaling_ratios

NODE_TOL = 1e-9


def _is_node(p: float, k: int) -> bool:
    t = k * p
    return abs(t - round(t)) < NODE_TOL


def energy_a_slope(p: float, s: int) -> float:
    """Limit of a(n)/n for the energy band 1..s: sum csc^2(pi k p).

    Infinite at node positions (some weighted mode undamped in the limit).
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"relative position must be in (0, 1), got {p}")
    if s < 1:
        raise ValueError(f"band size must be >= 1, got {s}")
    total = 0.0
    for k in range(1, s + 1):
        if _is_node(p, k):
            return math.inf
        total += 1.0 / math.sin(math.pi * k * p) ** 2
    return total


def energy_b1_slope(p: float, s: int) -> float:
    """Limit of b1(n)/n for the energy band 1..s: sum 2 sin^2(pi k p)/(pi^2 k^2)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"relative position must be in (0, 1), got {p}")
    if s < 1:
        raise ValueError(f"band size must be >= 1, got {s}")
    return math.fsum(
        2.0 * math.sin(math.pi * k * p) ** 2 / (math.pi * k) ** 2
        for k in range(1, s + 1))


def b2_tail_sum(k: int, tol: float = 1e-6) -> float:
    """(4/pi^2) sum over j != k of (j^2 + 2k^2) / ((j-k)^2 (j+k)^2).

    Direct summation to J = max(1e6, 1e4 k) plus the exact harmonic-segment
    tail of the 1/(j^2-k^2) part; the remaining quartic tail is bounded below
    tol (J doubles until it is). Bounds b2(n)/n mode-by-mode; increases to 1.
    """
    if k < 1:
        raise ValueError(f"mode index must be >= 1, got {k}")
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    J = max(10**6, 10**4 * k)
    while True:
        # tail of sum_{j>J} 1/(j^2-k^2) telescopes to a harmonic segment
        seg = math.fsum(1.0 / m for m in range(J + 1 - k, J + k + 1))
        tail = seg / (2.0 * k)
        quartic_bound = 3.0 * k * k / ((J + 1.0) ** 2 - k * k) * tail
        if (4.0 / math.pi**2) * quartic_bound < tol:
            break
        J *= 2
    total = 0.0
    chunk = 10**6
    for start in range(1, J + 1, chunk):
        j = np.arange(start, min(start + chunk, J + 1), dtype=np.float64)
        terms = (j * j + 2.0 * k * k) / ((j - k) ** 2 * (j + k) ** 2)
        if start <= k < start + chunk:
            terms[int(k - start)] = 0.0
        total += float(np.sum(terms))
    return (4.0 / math.pi**2) * (total + tail)


def b3_tail_bound(k: int) -> float:
    """sum_{j<k} 1/(k^2-j^2) + H_{2k}/(2k); bounds the b3(n)/n inner sum."""
    if k < 1:
        raise ValueError(f"mode index must be >= 1, got {k}")
    head = math.fsum(1.0 / (k * k - j * j) for j in range(1, k))
    harmonic = math.fsum(1.0 / m for m in range(1, 2 * k + 1))
    return head + harmonic / (2.0 * k)


@dataclass
class DisplacementLimits:
    a_slope: float      # limit of sum 2 z_k/c_k^2 over n^3  (z = 1/om^2)
    b1_slope: float     # limit of b1(n)/n^3
    b2_bound: float     # upper bound for b2(n)/n^3
    b3_bound: float     # upper bound for b3(n)/n^3


def displacement_scaling_limits(p: float, s: int) -> DisplacementLimits:
    """Cubic-scaling limits/bounds of the displacement coefficients.

    a_slope and b3_bound are infinite at node positions.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"relative position must be in (0, 1), got {p}")
    if s < 1:
        raise ValueError(f"band size must be >= 1, got {s}")
    a = 0.0
    b1 = 0.0
    b2 = 0.0
    b3 = 0.0
    node = False
    for k in range(1, s + 1):
        kp2 = (math.pi * k) ** 2
        sin2 = math.sin(math.pi * k * p) ** 2
        b1 += 2.0 * sin2 / kp2**2
        b2 += 1.0 / kp2
        if _is_node(p, k):
            node = True
            continue
        a += 1.0 / (kp2 * sin2)
        b3 += b3_tail_bound(k) / (kp2 * sin2)
    if node:
        a = math.inf
        b3 = math.inf
    return DisplacementLimits(a_slope=a, b1_slope=b1, b2_bound=b2, b3_bound=b3)


@dataclass
class AsymptoticReport:
    """Analytic slopes/bounds at (p, s) next to measured finite-n ratios."""

    p: float
    s: int
    a_slope: float
    b1_slope: float
    b2_bound: float
    b3_bound: float
    trace_slope_bound: float
    measured_ratios: list[tuple[int, int, float]] = field(default_factory=list)
    # (n, exponent, trace_opt/n^exponent)


def asymptotic_report(p: float, s: int,
                      n_list: list[int] | None = None) -> AsymptoticReport:
    """Analytic energy limits at (p, s) plus measured trace ratios.

    Measurements cover the linear law (energy, e=1) and the cubic law
    (displacement, e=3) on the chain at the dimensions in n_list.
    """
    a_slope = energy_a_slope(p, s)
    b1_slope = energy_b1_slope(p, s)
    b2_bound = float(s)
    if math.isinf(a_slope):
        b3_bound = math.inf
        trace_bound = math.inf
    else:
        b3_bound = math.fsum(
            b3_tail_bound(k) / math.sin(math.pi * k * p) ** 2
            for k in range(1, s + 1))
        trace_bound = 2.0 * math.sqrt(a_slope * (b1_slope + b2_bound + b3_bound))
    measured = []
    if n_list:
        for crit, e in ((Criterion.ENERGY, 1), (Criterion.DISPLACEMENT, 3)):
            fit = scaling_ratios(crit, p, s, n_list, e)
            measured.extend((n, e, ratio) for (n, _, ratio) in fit.rows)
    return AsymptoticReport(p=p, s=s, a_slope=a_slope, b1_slope=b1_slope,
                            b2_bound=b2_bound, b3_bound=b3_bound,
                            trace_slope_bound=trace_bound,
                            measured_ratios=measured)
