"""Self-contained verification suites pairing each closed form with its oracle.

The CLI `verify` subcommand drives these; the pytest suite reuses them. Every
suite returns a SuiteResult so failures are machine-readable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSystemError
from .models import (
    ModalModel,
    DamperVector,
    ModelKind,
    chain_model,
    chain_damper,
    string_model,
    string_damper,
)
from .lyapunov import (
    assemble_phase_matrix,
    solve_lyapunov,
    dual_trace_pair,
    solution_positive_definite,
    simulated_displacement_integral,
)
from .trace_formula import (
    Criterion,
    energy_weights,
    displacement_weights,
    trace_coefficients,
    trace_at,
    one_dof_closed_forms,
)

ORACLE_RTOL = 1e-8
DEFAULT_SEED = 20240501


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _random_clean_instance(rng: np.random.Generator):
    """Chain (model, damper) with every mode damped, n in 3..12."""
    while True:
        n = int(rng.integers(3, 13))
        k = int(rng.integers(1, n + 1))
        damper = chain_damper(k, n)
        if not damper.zero_modes.any():
            return chain_model(n), damper


def oracle_equivalence(count: int = 30, seed: int = DEFAULT_SEED) -> SuiteResult:
    """Closed-form trace vs dense weighted Lyapunov trace, randomized."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    comparisons = 0
    for idx in range(count):
        model, damper = _random_clean_instance(rng)
        n = model.n
        i = int(rng.integers(0, n))
        s = int(rng.integers(1, n - i + 1))
        criterion = Criterion.ENERGY if idx % 2 == 0 else Criterion.DISPLACEMENT
        weights = (energy_weights(i, s, model) if criterion is Criterion.ENERGY
                   else displacement_weights(i, s, model))
        coeffs = trace_coefficients(model, damper, weights)
        Z = np.diag(weights.full_diagonal())
        for v in (0.3, 1.0, 3.0):
            phase = assemble_phase_matrix(model, damper, v)
            X = solve_lyapunov(phase, np.eye(2 * n)).X
            t_oracle = float(np.trace(Z @ X))
            t_formula = trace_at(coeffs, v)
            rel = abs(t_formula - t_oracle) / abs(t_oracle)
            worst = max(worst, rel)
            comparisons += 1
    passed = worst <= ORACLE_RTOL
    return SuiteResult(
        name="oracle-equivalence",
        passed=passed,
        detail=f"comparisons={comparisons} max_rel_err={worst:.3e}")


def duality_identity(count: int = 20, seed: int = DEFAULT_SEED + 1) -> SuiteResult:
    """trace(Z X) with rhs -I equals trace(Y) with rhs -Z."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for idx in range(count):
        model, damper = _random_clean_instance(rng)
        n = model.n
        i = int(rng.integers(0, n))
        s = int(rng.integers(1, n - i + 1))
        weights = (energy_weights(i, s, model) if idx % 2 == 0
                   else displacement_weights(i, s, model))
        phase = assemble_phase_matrix(model, damper, float(rng.uniform(0.2, 3.0)))
        t1, t2 = dual_trace_pair(phase, np.diag(weights.full_diagonal()))
        worst = max(worst, abs(t1 - t2) / abs(t1))
    return SuiteResult(
        name="duality-identity",
        passed=worst <= ORACLE_RTOL,
        detail=f"instances={count} max_rel_err={worst:.3e}")


def definiteness_suite(seed: int = DEFAULT_SEED + 2) -> SuiteResult:
    """Displacement-weighted solutions are SPD once every mode is damped;
    a damper on a node of a weighted mode must raise degeneracy instead."""
    rng = np.random.default_rng(seed)
    failures = []
    for _ in range(5):
        model, damper = _random_clean_instance(rng)
        weights = displacement_weights(0, model.n, model)
        phase = assemble_phase_matrix(model, damper, float(rng.uniform(0.3, 2.0)))
        if not solution_positive_definite(phase, np.diag(weights.full_diagonal())):
            failures.append(f"not SPD at n={model.n}")
    # damper at y=1/3 sits on the node of mode 3; weighting mode 3 is degenerate
    model = string_model(3)
    damper = string_damper(1.0 / 3.0, 3)
    degenerate_seen = False
    if damper.zero_modes[2]:
        phase = assemble_phase_matrix(model, damper, 1.0)
        weights = displacement_weights(0, 3, model)
        try:
            solution_positive_definite(phase, np.diag(weights.full_diagonal()))
            failures.append("node damper did not raise degeneracy")
        except DegenerateSystemError:
            degenerate_seen = True
    else:
        failures.append("string damper at y=1/3 missed the mode-3 node")
    return SuiteResult(
        name="positive-definiteness",
        passed=not failures,
        detail="expected-degenerate seen" if degenerate_seen and not failures
        else "; ".join(failures) or "ok")


def time_domain_suite(seed: int = DEFAULT_SEED + 3) -> SuiteResult:
    """Simulated displacement integral vs the quadratic form y0^T Xhat y0."""
    worst = 0.0
    failures = []

    # single oscillator, m = k = 1, critical damping c = 2:
    # integral of x(t)^2 from x(0)=1 equals Xhat_11 = 1.25
    one = ModalModel(n=1, omegas=np.array([1.0]), kind=ModelKind.STRING)
    damper = DamperVector(entries=np.array([1.0]), position_label=0.5)
    phase = assemble_phase_matrix(one, damper, 2.0)
    Z = np.diag([1.0, 0.0])
    Xhat = solve_lyapunov(phase, Z).X
    y0 = np.array([1.0, 0.0])
    sim = simulated_displacement_integral(phase, y0)
    quad = float(y0 @ Xhat @ y0)
    rel = abs(sim - quad) / quad
    worst = max(worst, rel)
    if abs(quad - 1.25) > 1e-9:
        failures.append(f"1-dof quadratic form {quad} != 1.25")

    rng = np.random.default_rng(seed)
    model = chain_model(4)
    damper = chain_damper(2, 4)
    phase = assemble_phase_matrix(model, damper, 1.0)
    weights = displacement_weights(0, 4, model)
    Xhat = solve_lyapunov(phase, np.diag(weights.full_diagonal())).X
    for _ in range(3):
        y0 = rng.standard_normal(8)
        sim = simulated_displacement_integral(phase, y0)
        quad = float(y0 @ Xhat @ y0)
        rel = abs(sim - quad) / quad
        worst = max(worst, rel)
    if worst > 1e-4:
        failures.append(f"max_rel_err={worst:.3e} exceeds 1e-4")
    return SuiteResult(
        name="time-domain-integral",
        passed=not failures,
        detail=f"max_rel_err={worst:.3e}" if not failures else "; ".join(failures))


def one_dof_suite() -> SuiteResult:
    """Closed forms of the single oscillator, checked exactly."""
    failures = []
    tr_e, v_e = one_dof_closed_forms(1.0, 1.0, 2.0, Criterion.ENERGY)
    if abs(tr_e - 2.0) > 1e-12 or abs(v_e - 2.0) > 1e-12:
        failures.append(f"energy closed form gave ({tr_e}, {v_e}), want (2, 2)")
    root2 = math.sqrt(2.0)
    tr_d, v_d = one_dof_closed_forms(1.0, 1.0, root2, Criterion.DISPLACEMENT)
    if abs(tr_d - root2) > 1e-12 or abs(v_d - root2) > 1e-12:
        failures.append(
            f"displacement closed form gave ({tr_d}, {v_d}), want (sqrt2, sqrt2)")
    detail = f"energy ({tr_e:.12g}, {v_e:.12g}); displacement ({tr_d:.12g}, {v_d:.12g})"
    return SuiteResult(name="one-dof-closed-forms", passed=not failures,
                       detail=detail if not failures else "; ".join(failures))


def run_all(seed: int = DEFAULT_SEED) -> list[SuiteResult]:
    return [
        oracle_equivalence(seed=seed),
        duality_identity(seed=seed + 1),
        definiteness_suite(seed=seed + 2),
        time_domain_suite(seed=seed + 3),
        one_dof_suite(),
    ]
