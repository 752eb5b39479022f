"""Sweeps over damper positions and cross-dimension scaling measurements."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import NoAdmissiblePositionError
from .models import (
    ModalModel,
    ModelKind,
    chain_model,
    chain_damper,
    string_damper,
    _chain_sin_table,
)
from .trace_formula import (
    Criterion,
    SpectralWeights,
    energy_weights,
    displacement_weights,
    trace_coefficients,
    optimal_trace,
    optimal_viscosity,
    _chain_half_sin_table,
)

SYMMETRY_RTOL = 1e-10   # mirror positions must match traces this tightly


@dataclass
class SweepRow:
    k: int
    p: float
    v_opt: float
    trace_opt: float
    finite: bool


@dataclass
class SweepResult:
    rows: list[SweepRow]
    model_desc: str
    weights_desc: str
    n: int


@dataclass
class DampingDesign:
    """One damper placement with its optimal viscosity and optimal trace."""

    position_index: int
    position_p: float
    v_opt: float
    trace_opt: float
    symmetric_partner: int | None = None


def _weights_desc(w: SpectralWeights) -> str:
    return (f"{w.criterion.value} band ({w.band_offset},{w.band_count})")


def _model_desc(model: ModalModel) -> str:
    if model.kind is ModelKind.ROD:
        return f"rod n={model.n} a0={model.rod_a0} k0={model.rod_k0}"
    return f"{model.kind.value} n={model.n}"


def sweep_positions(model: ModalModel, weights: SpectralWeights) -> SweepResult:
    """Optimal viscosity and trace for every damper position k = 1..n.

    Chain positions are the mass indices; string/rod positions are the grid
    y = k/n (k = n sits on the fixed end, where every mode is undamped, and
    is emitted as an inadmissible row). Rows come back in ascending k.
    """
    if weights.n != model.n:
        raise ValueError("weights dimension must match the model")
    n = model.n
    if model.kind is ModelKind.CHAIN:
        table = _sweep_chain_table(model, weights)
        rows = []
        for pos in range(n):
            a, b1, b2, b3, fin = table[pos]
            finite = bool(fin)
            if finite:
                b = b1 + b2 + b3
                v = math.sqrt(a / b)
                tr = 2.0 * math.sqrt(a * b)
            else:
                v = math.inf
                tr = math.inf
            rows.append(SweepRow(k=pos + 1, p=(pos + 1) / n, v_opt=v,
                                 trace_opt=tr, finite=finite))
    else:
        rows = []
        for k in range(1, n + 1):
            y = k / n
            if y >= 1.0:
                rows.append(SweepRow(k=k, p=y, v_opt=math.inf,
                                     trace_opt=math.inf, finite=False))
                continue
            damper = string_damper(y, n)
            coeffs = trace_coefficients(model, damper, weights)
            rows.append(SweepRow(k=k, p=y,
                                 v_opt=optimal_viscosity(coeffs),
                                 trace_opt=optimal_trace(coeffs),
                                 finite=coeffs.finite))
    return SweepResult(rows=rows, model_desc=_model_desc(model),
                       weights_desc=_weights_desc(weights), n=n)


def _sweep_chain_table(model: ModalModel, weights: SpectralWeights) -> np.ndarray:
    n = model.n
    om2 = model.omegas ** 2
    band = weights.band_indices()
    zvals = np.ascontiguousarray(weights.z[band])
    code = _kernels.ENERGY if weights.criterion is Criterion.ENERGY \
        else _kernels.DISPLACEMENT
    return _kernels._sweep_chain(
        om2, band, zvals, code, True, _chain_half_sin_table(n),
        _chain_sin_table(n), n + 1, math.sqrt(2.0 / (n + 1)))


def best_position(sweep: SweepResult) -> DampingDesign:
    """Row with the minimal optimal trace; ties go to the smallest index.

    The mirror position n+1-k is reported as symmetric_partner when its trace
    matches within SYMMETRY_RTOL.
    """
    best = None
    for row in sweep.rows:
        if not row.finite:
            continue
        if best is None or row.trace_opt < best.trace_opt:
            best = row
    if best is None:
        raise NoAdmissiblePositionError(
            f"no admissible damper position for {sweep.model_desc}, "
            f"{sweep.weights_desc}")
    partner = None
    mirror = sweep.n + 1 - best.k
    if mirror != best.k and 1 <= mirror <= sweep.n:
        mrow = sweep.rows[mirror - 1]
        if mrow.finite and abs(mrow.trace_opt - best.trace_opt) \
                <= SYMMETRY_RTOL * best.trace_opt:
            partner = mirror
    return DampingDesign(position_index=best.k, position_p=best.p,
                         v_opt=best.v_opt, trace_opt=best.trace_opt,
                         symmetric_partner=partner)


@dataclass
class ScalingFit:
    """trace_opt / n^e at a fixed relative position across dimensions."""

    exponent: int
    rows: list[tuple[int, int, float]]   # (n, index used, ratio)
    max_rel_spread: float
    substituted: list[int] = field(default_factory=list)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def scaling_ratios(criterion: Criterion, p: float, s: int, n_list: list[int],
                   exponent: int, band_offset: int = 0) -> ScalingFit:
    """Chain trace_opt/n^exponent at index round(p*n) for each n in n_list.

    If the rounded index leaves a weighted mode undamped, the nearest
    admissible index is used instead and recorded. The spread is taken over
    the larger half of the (ascending) dimensions, where the asymptotic
    regime has set in.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"relative position must be in (0, 1), got {p}")
    rows = []
    substituted = []
    for n in sorted(n_list):
        model = chain_model(n)
        if criterion is Criterion.ENERGY:
            weights = energy_weights(band_offset, s, model)
        else:
            weights = displacement_weights(band_offset, s, model)
        k0 = min(max(_round_half_up(p * n), 1), n)
        coeffs = None
        k_used = None
        for delta in range(n):
            for cand in ((k0 + delta, k0 - delta) if delta else (k0,)):
                if not 1 <= cand <= n:
                    continue
                trial = trace_coefficients(model, chain_damper(cand, n), weights)
                if trial.finite:
                    coeffs = trial
                    k_used = cand
                    break
            if coeffs is not None:
                break
        if coeffs is None:
            raise NoAdmissiblePositionError(f"no admissible index near p={p} at n={n}")
        if k_used != k0:
            substituted.append(n)
        rows.append((n, k_used, optimal_trace(coeffs) / float(n) ** exponent))
    half = rows[len(rows) // 2:]
    ratios = [r for (_, _, r) in half]
    spread = (max(ratios) - min(ratios)) / min(ratios)
    return ScalingFit(exponent=exponent, rows=rows, max_rel_spread=spread,
                      substituted=substituted)
