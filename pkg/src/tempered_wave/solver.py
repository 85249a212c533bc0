r"""Time marching for the fully discrete scheme.

Each step solves

.. math::

    \Big(I - \tfrac{\tau^\gamma l_0}{2}\nabla_h^\alpha\Big) u^{n+1}
    = u^n + \frac{\tau^\gamma}{2}\Big[l_0 w^n
        + \sum_{k=1}^{n} l_k (w^{n+1-k} + w^{n-k})\Big]
    + \tau f(\cdot, t_{n+1/2}),

where :math:`w^m = \nabla_h^\alpha u^m` is kept as history. Only the
:math:`k = 0` contribution to :math:`u^{n+1}` is implicit, so the step matrix
is constant and factored once.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .exceptions import DomainError, InvariantViolation, UnsupportedFeatureError
from .kernels import TemperedCoeffs, tempered_coeffs
from .operators import DiscreteRiesz, assemble_riesz
from .problems import ProblemSpec

__all__ = [
    "Discretization",
    "StepMatrix",
    "SolverState",
    "SolveResult",
    "build_step_matrix",
    "init_state",
    "step_rhs",
    "step",
    "step_residual",
    "solve",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Discretization:
    """Uniform grid: ``M`` space intervals on ``(a, b)``, ``N`` steps to ``T``."""

    M: int
    N: int
    domain: tuple[float, float] = (0.0, 1.0)
    T: float = 0.5

    def __post_init__(self):
        if self.M < 3:
            raise DomainError(f"M must be >= 3, got {self.M!r}")
        if self.N < 1:
            raise DomainError(f"N must be >= 1, got {self.N!r}")

    @property
    def h(self) -> float:
        a, b = self.domain
        return (b - a) / self.M

    @property
    def tau(self) -> float:
        return self.T / self.N

    @property
    def nodes(self) -> np.ndarray:
        a, b = self.domain
        x = a + self.h * np.arange(self.M + 1)
        x[-1] = b
        return x

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[1:-1]

    @property
    def times(self) -> np.ndarray:
        t = self.tau * np.arange(self.N + 1)
        t[-1] = self.T
        return t

    @classmethod
    def for_problem(cls, problem: ProblemSpec, M: int, N: int) -> "Discretization":
        return cls(M=M, N=N, domain=tuple(problem.domain), T=problem.horizon)


@dataclass(frozen=True)
class StepMatrix:
    """Cholesky factor of ``I - c * op`` with ``c = tau**gamma * l0 / 2``."""

    c: float
    matrix: np.ndarray = field(repr=False)
    factor: tuple = field(repr=False)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return scipy.linalg.cho_solve(self.factor, rhs)


def build_step_matrix(op: DiscreteRiesz, gamma: float, l0: float, tau: float) -> StepMatrix:
    """Factor the constant implicit step matrix once.

    The matrix is the identity minus a negative-definite operator, so a
    failed Cholesky factorization means the operator was assembled wrongly.
    """
    c = tau**gamma * l0 / 2.0
    S = np.eye(op.dim) - c * op.dense()
    try:
        factor = scipy.linalg.cho_factor(S, lower=True)
    except np.linalg.LinAlgError as exc:
        raise InvariantViolation("step matrix is not positive definite") from exc
    return StepMatrix(c=c, matrix=S, factor=factor)


@dataclass
class SolverState:
    """Mutable marching state for one solve.

    ``history[m]`` holds :math:`\\nabla_h^\\alpha u^m` for ``m <= n``; rows
    beyond ``n`` are scratch space.
    """

    op: DiscreteRiesz
    gamma: float
    tau: float
    coeffs: TemperedCoeffs
    step_matrix: StepMatrix
    n: int
    u: np.ndarray
    history: np.ndarray = field(repr=False)
    snapshots: Optional[list] = field(default=None, repr=False)
    compensated: bool = False

    @property
    def capacity(self) -> int:
        return self.history.shape[0] - 1


def init_state(
    op: DiscreteRiesz,
    gamma: float,
    tau: float,
    coeffs: TemperedCoeffs,
    N: int,
    u0: Optional[np.ndarray] = None,
    keep_snapshots: bool = False,
    compensated: bool = False,
) -> SolverState:
    """Create the state at ``n = 0`` with room for ``N`` steps.

    ``u0`` defaults to zero. A nonzero ``u0`` is accepted here so that the
    homogeneous perturbation equation can be marched (see
    :func:`tempered_wave.analysis.stability_experiment`).
    """
    if len(coeffs) < N + 1:
        raise ValueError(f"need {N + 1} quadrature weights, got {len(coeffs)}")

    u = np.zeros(op.dim) if u0 is None else np.array(u0, dtype=float)
    if u.shape != (op.dim,):
        raise ValueError(f"initial data must have shape ({op.dim},), got {u.shape}")

    history = np.zeros((N + 1, op.dim))
    history[0] = op(u)
    return SolverState(
        op=op,
        gamma=gamma,
        tau=tau,
        coeffs=coeffs,
        step_matrix=build_step_matrix(op, gamma, coeffs.l[0], tau),
        n=0,
        u=u,
        history=history,
        snapshots=[u.copy()] if keep_snapshots else None,
        compensated=compensated,
    )


def _kahan_weighted_sum(weights: np.ndarray, rows: np.ndarray) -> np.ndarray:
    total = np.zeros(rows.shape[1])
    carry = np.zeros(rows.shape[1])
    for wk, row in zip(weights, rows):
        y = wk * row - carry
        t = total + y
        carry = (t - total) - y
        total = t
    return total


def _memory(state: SolverState) -> np.ndarray:
    # l_0 w^n + sum_{k=1}^{n} l_k (w^{n+1-k} + w^{n-k}), k ascending
    n, l, W = state.n, state.coeffs.l, state.history
    acc = l[0] * W[n]
    if n == 0:
        return acc

    lk = l[1 : n + 1]
    if state.compensated:
        return acc + _kahan_weighted_sum(
            np.concatenate([lk, lk]), np.concatenate([W[n:0:-1], W[n - 1 :: -1]])
        )
    return acc + (lk @ W[n:0:-1] + lk @ W[n - 1 :: -1])


def step_rhs(state: SolverState, forcing_mid: np.ndarray) -> np.ndarray:
    """Right-hand side of the linear system for step ``n -> n + 1``."""
    return (
        state.u
        + 0.5 * state.tau**state.gamma * _memory(state)
        + state.tau * np.asarray(forcing_mid, dtype=float)
    )


def step(state: SolverState, forcing_mid: np.ndarray) -> SolverState:
    """Advance ``state`` by one step in place and return it.

    ``forcing_mid`` is the forcing sampled at the interior nodes and time
    ``t_{n+1/2}``.
    """
    if state.n >= state.capacity:
        raise ValueError(f"state already holds {state.capacity} steps")

    rhs = step_rhs(state, forcing_mid)
    u_new = state.step_matrix.solve(rhs)

    state.n += 1
    state.u = u_new
    state.history[state.n] = state.op(u_new)
    if state.snapshots is not None:
        state.snapshots.append(u_new.copy())
    return state


def step_residual(
    state: SolverState, u_prev: np.ndarray, n_prev: int, forcing_mid: np.ndarray
) -> float:
    """Max-norm residual of the scheme for the step ``n_prev -> n_prev + 1``.

    Evaluates both sides of the unrearranged update
    ``u^{n+1} - u^n = tau^gamma/2 sum_k l_k (w^{n+1-k} + w^{n-k}) + tau f``
    using the stored history, which must already contain ``w^{n_prev+1}``.
    """
    n, l, W = n_prev, state.coeffs.l, state.history
    u_next = state.snapshots[n + 1] if state.snapshots is not None else state.u
    conv = sum(l[k] * (W[n + 1 - k] + W[n - k]) for k in range(n + 1))
    rhs = 0.5 * state.tau**state.gamma * conv + state.tau * np.asarray(forcing_mid)
    return float(np.max(np.abs((u_next - u_prev) - rhs)))


@dataclass
class SolveResult:
    problem: ProblemSpec
    disc: Discretization
    #: interior values at the final time
    u: np.ndarray
    #: interior values at every time level, shape ``(N + 1, M - 1)``, if kept
    snapshots: Optional[np.ndarray]
    wall_time: float
    #: linear-solve diagnostics
    diagnostics: dict

    @property
    def x(self) -> np.ndarray:
        return self.disc.interior

    def full_field(self) -> np.ndarray:
        """Final field including the two Dirichlet boundary nodes."""
        return np.concatenate([[0.0], self.u, [0.0]])


def solve(
    problem: ProblemSpec,
    disc: Discretization,
    snapshots: Union[bool, Sequence[int]] = False,
    compensated: bool = False,
    check_residual: bool = False,
) -> SolveResult:
    """Run ``disc.N`` steps of the scheme from zero initial data.

    Parameters
    ----------
    snapshots
        ``True`` to keep every time level; ``False`` to keep only the final
        field.
    compensated
        Use compensated summation for the history convolution.
    check_residual
        Plug each new level back into the scheme and record the largest
        max-norm residual in ``diagnostics["max_residual"]``.
    """
    x = disc.interior
    if np.any(np.asarray(problem.u0(x)) != 0.0):
        raise UnsupportedFeatureError("only zero initial data are supported")

    start = time.perf_counter()
    op = assemble_riesz(problem.alpha, disc.M, disc.h)
    coeffs = tempered_coeffs(problem.beta, problem.lam, disc.tau, disc.N + 1)
    state = init_state(
        op,
        problem.gamma,
        disc.tau,
        coeffs,
        disc.N,
        keep_snapshots=bool(snapshots) or check_residual,
        compensated=compensated,
    )

    tau = disc.tau
    max_residual = 0.0
    for n in range(disc.N):
        f_mid = problem.forcing(x, (n + 0.5) * tau)
        u_prev = state.u
        step(state, f_mid)
        if check_residual:
            max_residual = max(max_residual, step_residual(state, u_prev, n, f_mid))

    wall = time.perf_counter() - start
    logger.debug("solved %s with M=%d N=%d in %.3fs", problem.name, disc.M, disc.N, wall)

    diagnostics = {
        "step_matrix_c": state.step_matrix.c,
        "step_matrix_min_diag": float(np.min(np.diag(state.step_matrix.matrix))),
        "factorization": "cholesky",
    }
    if check_residual:
        diagnostics["max_residual"] = max_residual

    kept = None
    if snapshots:
        kept = np.array(state.snapshots)
        if not isinstance(snapshots, bool):
            kept = kept[list(snapshots)]

    return SolveResult(
        problem=problem,
        disc=disc,
        u=state.u,
        snapshots=kept,
        wall_time=wall,
        diagnostics=diagnostics,
    )
