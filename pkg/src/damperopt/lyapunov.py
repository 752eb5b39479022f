"""Dense phase-space assembly and small-scale Lyapunov oracle.

Everything here exists to *check* the closed-form trace machinery, so the
solver is the plainest thing that can be trusted: Kronecker vectorization of
A^T X + X A = -RHS and a dense LU solve, capped at order 64. The production
path never calls it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.linalg.lapack import dgecon

from .errors import DegenerateSystemError, UnstableIntegrationError
from .models import (
    ModalModel,
    DamperVector,
    ModelKind,
    assemble_chain_matrices,
    chain_eigenvector_matrix,
)

MAX_ORACLE_ORDER = 64          # 2n cap for the vectorized solve
CONDITION_LIMIT = 1e12         # above this the solve is not trusted
RESIDUAL_RTOL = 1e-9           # max-norm residual relative to max-norm rhs


@dataclass
class PhaseMatrix:
    """First-order phase-space matrix [[0, W], [-W, -v c c^T]]."""

    n: int
    A: np.ndarray

    @property
    def omegas(self) -> np.ndarray:
        return np.diag(self.A[: self.n, self.n:])


@dataclass
class LyapunovSolution:
    X: np.ndarray
    residual_norm: float


def assemble_phase_matrix(model: ModalModel, damper: DamperVector,
                          v: float) -> PhaseMatrix:
    if damper.n != model.n:
        raise ValueError(
            f"damper length {damper.n} does not match model dimension {model.n}")
    if v <= 0:
        raise ValueError(f"viscosity must be positive, got {v}")
    n = model.n
    A = np.zeros((2 * n, 2 * n))
    A[:n, n:] = np.diag(model.omegas)
    A[n:, :n] = -np.diag(model.omegas)
    A[n:, n:] = -v * np.outer(damper.entries, damper.entries)
    return PhaseMatrix(n=n, A=A)


def _as_matrix(A) -> np.ndarray:
    return A.A if isinstance(A, PhaseMatrix) else np.asarray(A, dtype=np.float64)


def solve_lyapunov(A, rhs: np.ndarray) -> LyapunovSolution:
    """Solve A^T X + X A = -rhs by vectorization and dense LU.

    Raises DegenerateSystemError when the vectorized operator is singular or
    its condition estimate exceeds CONDITION_LIMIT, which is what an exactly
    (or nearly) undamped mode produces.
    """
    A = _as_matrix(A)
    m = A.shape[0]
    if m > MAX_ORACLE_ORDER:
        raise ValueError(f"oracle solver capped at order {MAX_ORACLE_ORDER}, got {m}")
    rhs = np.asarray(rhs, dtype=np.float64)
    if rhs.shape != (m, m):
        raise ValueError(f"rhs shape {rhs.shape} does not match system order {m}")
    if np.max(np.abs(rhs - rhs.T)) > 1e-12 * max(1.0, np.max(np.abs(rhs))):
        raise ValueError("rhs must be symmetric")

    eye = np.eye(m)
    L = np.kron(eye, A.T) + np.kron(A.T, eye)
    anorm = np.linalg.norm(L, 1)
    try:
        lu, piv = lu_factor(L)
    except np.linalg.LinAlgError as exc:
        raise DegenerateSystemError(f"vectorized Lyapunov operator is singular: {exc}")
    rcond, info = dgecon(lu, anorm, norm="1")
    if info != 0 or rcond == 0.0 or not np.isfinite(rcond) or 1.0 / rcond > CONDITION_LIMIT:
        raise DegenerateSystemError(
            "vectorized Lyapunov operator is near-singular "
            f"(condition estimate {np.inf if rcond == 0 else 1.0 / rcond:.3g}); "
            "some mode is (almost) undamped")
    x = lu_solve((lu, piv), -rhs.flatten(order="F"))
    X = x.reshape((m, m), order="F")
    X = 0.5 * (X + X.T)
    residual = np.max(np.abs(A.T @ X + X @ A + rhs))
    if not np.isfinite(residual) or residual > RESIDUAL_RTOL * max(1.0, np.max(np.abs(rhs))):
        raise DegenerateSystemError(
            f"Lyapunov solve residual {residual:.3g} exceeds tolerance")
    return LyapunovSolution(X=X, residual_norm=float(residual))


def dual_trace_pair(A, Z: np.ndarray) -> tuple[float, float]:
    """(trace(Z X) with A^T X + X A = -I, trace(Y) with A Y + Y A^T = -Z).

    The two must agree: both equal the integral of trace(Z e^{At} e^{A^T t}).
    """
    A = _as_matrix(A)
    m = A.shape[0]
    X = solve_lyapunov(A, np.eye(m)).X
    Y = solve_lyapunov(A.T, np.asarray(Z)).X
    return float(np.trace(np.asarray(Z) @ X)), float(np.trace(Y))


def solution_positive_definite(A, Z: np.ndarray) -> bool:
    """True iff the solution of A^T X + X A = -Z is symmetric positive definite.

    Checked by attempted Cholesky factorization.
    """
    X = solve_lyapunov(A, Z).X
    try:
        np.linalg.cholesky(X)
        return True
    except np.linalg.LinAlgError:
        return False


def _rk4_step(A: np.ndarray, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = A @ y
    k2 = A @ (y + 0.5 * dt * k1)
    k3 = A @ (y + 0.5 * dt * k2)
    k4 = A @ (y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def simulated_displacement_integral(phase: PhaseMatrix, y0: np.ndarray,
                                    horizon: float | None = None,
                                    dt: float | None = None) -> float:
    """Integrate || x(t) ||^2 = || W^{-1} y_1(t) ||^2 along y' = A y from y0.

    Classical RK4 stepping with composite Simpson quadrature. Without an
    explicit horizon the integration doubles its window until a whole block
    adds less than 1e-8 of the accumulated integral.
    """
    A = phase.A
    n = phase.n
    omegas = phase.omegas
    y0 = np.asarray(y0, dtype=np.float64)
    if y0.shape != (2 * n,):
        raise ValueError(f"initial state must have length {2 * n}")
    if dt is None:
        dt = min(0.01, 0.1 / float(np.max(omegas)))
    elif dt <= 0:
        raise ValueError(f"step size must be positive, got {dt}")
    inv_om = 1.0 / omegas

    def integrand(y):
        x = inv_om * y[:n]
        return float(x @ x)

    # block of an even number of steps, long enough to cover slow modes
    block_time = max(10.0, 2.0 * np.pi / float(np.min(omegas)))
    steps_per_block = 2 * max(1, int(np.ceil(block_time / dt / 2)))
    max_blocks = 20000 if horizon is None else int(np.ceil(horizon / (steps_per_block * dt)))

    total = 0.0
    y = y0.copy()
    f0 = integrand(y)
    elapsed = 0.0
    for _ in range(max_blocks):
        block = 0.0
        for _ in range(steps_per_block // 2):
            y1 = _rk4_step(A, y, dt)
            y2 = _rk4_step(A, y1, dt)
            f1 = integrand(y1)
            f2 = integrand(y2)
            block += (dt / 3.0) * (f0 + 4.0 * f1 + f2)
            y = y2
            f0 = f2
        if not np.isfinite(block) or not np.all(np.isfinite(y)):
            raise UnstableIntegrationError("state became non-finite during integration")
        total += block
        elapsed += steps_per_block * dt
        if horizon is not None:
            if elapsed >= horizon:
                return total
        elif total > 0.0 and block < 1e-8 * total:
            return total
        elif total == 0.0:
            return 0.0
    if horizon is not None:
        return total
    raise UnstableIntegrationError(
        "integral tail did not decay; is the system Hurwitz?")


def energy_norm_pair(model: ModalModel, x0: np.ndarray,
                     v0: np.ndarray) -> tuple[float, float]:
    """(||y(0)||^2, x0^T K x0 + v0^T M v0) under y1 = W Phi^{-1} x, y2 = Phi^{-1} v.

    Both sides equal twice the initial mechanical energy.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    v0 = np.asarray(v0, dtype=np.float64)
    if x0.shape != (model.n,) or v0.shape != (model.n,):
        raise ValueError("initial data must have length n")
    if model.kind is ModelKind.CHAIN:
        Q = chain_eigenvector_matrix(model.n)   # symmetric orthogonal: Q^{-1} = Q
        y1 = model.omegas * (Q @ x0)
        y2 = Q @ v0
        K = assemble_chain_matrices(model.n).stiffness
        rhs = float(x0 @ K @ x0 + v0 @ v0)
    else:
        # spectral models are already modal: M = I, K = diag(omega^2)
        y1 = model.omegas * x0
        y2 = v0
        rhs = float(np.sum((model.omegas * x0) ** 2) + v0 @ v0)
    lhs = float(y1 @ y1 + y2 @ y2)
    return lhs, rhs
