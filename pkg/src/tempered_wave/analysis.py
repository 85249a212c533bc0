"""Error norms, convergence studies and numerical checks of the scheme's
positivity and stability properties.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
import scipy.linalg
from scipy.integrate import quad
from scipy.special import gamma as gamma_fn

from ._version import __version__
from .kernels import (
    TemperedCoeffs,
    generating_fn_value,
    tempered_coeffs,
    tempered_coeffs_oracle,
)
from .operators import SymToeplitz, assemble_riesz
from .problems import ProblemSpec
from .solver import Discretization, init_state, solve, step

__all__ = [
    "TABLE1",
    "ErrorReport",
    "ConvergenceRow",
    "ConvergenceReport",
    "PSDReport",
    "CheckResult",
    "error_report",
    "convergence_study",
    "table1_resolutions",
    "fitted_order",
    "build_L_matrix",
    "psd_check",
    "convolution_quadratic_form",
    "stability_experiment",
    "tempered_integral",
    "tempered_integral_reference",
    "run_verification",
]

#: Maximum errors at T = 1/2 with h = tau and lambda = 0.1, keyed by
#: (gamma, alpha); values for tau = 1/20, 1/40, 1/80, 1/160.
TABLE1 = {
    (2.0, 1.5): {
        "errors": (5.2886e-05, 1.4084e-05, 3.6352e-06, 9.2322e-07),
        "rates": (1.91, 1.95, 1.98),
    },
    (1.3, 1.7): {
        "errors": (3.8119e-05, 9.7938e-06, 2.4815e-06, 6.2446e-07),
        "rates": (1.96, 1.98, 1.99),
    },
    (1.7, 1.3): {
        "errors": (4.7519e-05, 1.2539e-05, 3.2206e-06, 8.1607e-07),
        "rates": (1.92, 1.96, 1.98),
    },
}


# {{{ error norms


@dataclass(frozen=True)
class ErrorReport:
    max_error: float
    l2_error: float
    resolution: Optional[tuple[int, int]] = None


def error_report(
    numeric: np.ndarray,
    exact: np.ndarray,
    h: float,
    resolution: Optional[tuple[int, int]] = None,
) -> ErrorReport:
    """Max norm and discrete L2 norm ``(h * sum e_i**2)**0.5`` of the error
    over interior nodes.
    """
    numeric = np.asarray(numeric, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if numeric.shape != exact.shape:
        raise ValueError(f"shape mismatch: {numeric.shape} vs {exact.shape}")

    e = numeric - exact
    return ErrorReport(
        max_error=float(np.max(np.abs(e))) if e.size else 0.0,
        l2_error=float(math.sqrt(h * np.dot(e, e))),
        resolution=resolution,
    )


# }}}


# {{{ convergence study


@dataclass(frozen=True)
class ConvergenceRow:
    tau: float
    h: float
    max_error: float
    rate: Optional[float]
    l2_error: float
    max_error_all_times: float
    M: int
    N: int


@dataclass
class ConvergenceReport:
    params: dict
    rows: list[ConvergenceRow] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.max_error for r in self.rows])

    @property
    def rates(self) -> np.ndarray:
        return np.array([r.rate for r in self.rows[1:]])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["tau", "h", "max_error", "rate"])
        for r in self.rows:
            writer.writerow(
                [_fmt(r.tau), _fmt(r.h), _fmt(r.max_error), "" if r.rate is None else _fmt(r.rate)]
            )
        return buf.getvalue()

    def to_record(self) -> dict:
        return {
            "params": dict(self.params),
            "rows": [asdict(r) for r in self.rows],
            "wall_ms": 1000.0 * self.wall_time,
            "version": __version__,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def table1_resolutions(
    inverse_steps: Iterable[int] = (20, 40, 80, 160),
    length: float = 1.0,
    horizon: float = 0.5,
) -> list[tuple[int, int]]:
    """Map ``1/h = 1/tau`` values to ``(M, N)`` pairs.

    With ``h = tau = 1/r`` on an interval of length ``length`` up to
    ``horizon``, ``M = r * length`` and ``N = r * horizon``.
    """
    out = []
    for r in inverse_steps:
        M, N = r * length, r * horizon
        if abs(M - round(M)) > 1e-9 or abs(N - round(N)) > 1e-9:
            raise ValueError(f"1/h = {r} does not divide the domain and horizon evenly")
        out.append((int(round(M)), int(round(N))))
    return out


def _run_one(problem: ProblemSpec, M: int, N: int) -> tuple[float, float, float]:
    disc = Discretization.for_problem(problem, M, N)
    result = solve(problem, disc, snapshots=True)
    x = disc.interior
    rep = error_report(result.u, problem.exact(x, disc.T), disc.h, (M, N))
    all_times = max(
        float(np.max(np.abs(u - problem.exact(x, t))))
        for u, t in zip(result.snapshots, disc.times)
    )
    return rep.max_error, rep.l2_error, all_times


def convergence_study(
    problem: ProblemSpec,
    resolutions: Sequence[tuple[int, int]],
    workers: Optional[int] = None,
) -> ConvergenceReport:
    """Solve ``problem`` at each ``(M, N)`` and collect errors and rates.

    Rows are ordered as given (coarsest first is expected); the rate of row
    ``r`` is ``log2(err[r-1] / err[r])``. Solves may run on a thread pool;
    the report does not depend on completion order.
    """
    if len(resolutions) < 2:
        raise ValueError("a convergence study needs at least two resolutions")
    if problem.exact is None:
        raise ValueError("convergence study needs a problem with an exact solution")

    start = time.perf_counter()
    if workers == 1:
        results = [_run_one(problem, M, N) for M, N in resolutions]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda mn: _run_one(problem, *mn), resolutions))

    rows = []
    prev = None
    for (M, N), (emax, el2, eall) in zip(resolutions, results):
        disc = Discretization.for_problem(problem, M, N)
        rate = None if prev is None else math.log2(prev / emax)
        rows.append(ConvergenceRow(disc.tau, disc.h, emax, rate, el2, eall, M, N))
        prev = emax

    params = {
        "problem": problem.name,
        "alpha": problem.alpha,
        "gamma": problem.gamma,
        "lambda": problem.lam,
        "domain": list(problem.domain),
        "t_final": problem.horizon,
        "resolutions": [list(r) for r in resolutions],
    }
    return ConvergenceReport(params=params, rows=rows, wall_time=time.perf_counter() - start)


def fitted_order(steps: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of ``log(error)`` against ``log(step)``."""
    slope, _ = np.polyfit(np.log(steps), np.log(errors), 1)
    return float(slope)


# }}}


# {{{ quadrature weights as a Toeplitz form


@dataclass(frozen=True)
class PSDReport:
    min_eigenvalue: float
    is_psd: bool


def build_L_matrix(coeffs: TemperedCoeffs, N: int) -> SymToeplitz:
    """The ``(N + 1) x (N + 1)`` symmetric Toeplitz matrix with first row
    ``[l_0, l_1/2, ..., l_N/2]``.
    """
    if len(coeffs) < N + 1:
        raise ValueError(f"need {N + 1} coefficients, got {len(coeffs)}")
    row = 0.5 * np.array(coeffs.l[: N + 1])
    row[0] = coeffs.l[0]
    row.setflags(write=False)
    return SymToeplitz(row)


def psd_check(L: SymToeplitz, rtol: float = 1.0e-10) -> PSDReport:
    """Smallest eigenvalue of ``L``; PSD when it is ``>= -rtol * ||L||_2``."""
    if L.dim > 1024:
        raise ValueError("psd_check uses a dense eigensolver; keep dim <= 1024")
    eigs = scipy.linalg.eigvalsh(L.dense())
    norm = float(np.max(np.abs(eigs)))
    return PSDReport(min_eigenvalue=float(eigs[0]), is_psd=bool(eigs[0] >= -rtol * norm))


def convolution_quadratic_form(l: np.ndarray, v: np.ndarray) -> float:  # noqa: E741
    """``sum_n (sum_{k<=n} l_k v_{n-k}) v_n`` by direct double summation."""
    total = 0.0
    for n in range(len(v)):
        inner = 0.0
        for k in range(n + 1):
            inner += l[k] * v[n - k]
        total += inner * v[n]
    return total


# }}}


# {{{ stability


def stability_experiment(
    alpha: float,
    gamma: float,
    lam: float,
    M: int,
    N: int,
    tau: float,
    seed: int = 0,
    eps0: Optional[np.ndarray] = None,
) -> np.ndarray:
    """March the homogeneous scheme from a random perturbation.

    The grid is ``M`` intervals of the unit interval. Returns the discrete L2
    norms of the perturbation at every level ``0..N``.
    """
    h = 1.0 / M
    op = assemble_riesz(alpha, M, h)
    coeffs = tempered_coeffs(gamma - 1.0, lam, tau, N + 1)
    if eps0 is None:
        eps0 = np.random.default_rng(seed).standard_normal(M - 1)
    state = init_state(op, gamma, tau, coeffs, N, u0=eps0)

    zero = np.zeros(M - 1)
    norms = np.empty(N + 1)
    norms[0] = math.sqrt(h * np.dot(state.u, state.u))
    for n in range(N):
        step(state, zero)
        norms[n + 1] = math.sqrt(h * np.dot(state.u, state.u))
    return norms


# }}}


# {{{ tempered fractional integral


def tempered_integral(
    v: Callable[[np.ndarray], np.ndarray], T: float, beta: float, lam: float, N: int
) -> float:
    """Convolution-quadrature value ``tau**beta * sum_k l_k v(t_{N-k})``."""
    tau = T / N
    coeffs = tempered_coeffs(beta, lam, tau, N + 1)
    t = tau * np.arange(N, -1, -1)
    return float(tau**beta * np.dot(coeffs.l, v(t)))


def tempered_integral_reference(
    v: Callable[[float], float], T: float, beta: float, lam: float, tol: float = 1.0e-13
) -> float:
    """Adaptive quadrature of the tempered fractional integral at ``T``.

    The weak singularity ``(T - s)**(beta - 1)`` is handled by QUADPACK's
    algebraic weight.
    """

    def integrand(s):
        return math.exp(-lam * (T - s)) * v(s)

    if beta == 1.0:
        value, _ = quad(integrand, 0.0, T, epsabs=tol, epsrel=tol, limit=200)
    else:
        value, _ = quad(
            integrand, 0.0, T, weight="alg", wvar=(0.0, beta - 1.0),
            epsabs=tol, epsrel=tol, limit=200,
        )
    return value / gamma_fn(beta)


# }}}


# {{{ verification suite


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


BETAS = (0.1, 0.3, 0.7, 1.0)
LAMBDAS = (0.0, 0.1, 1.0)
TAUS = (1.0 / 20.0, 1.0 / 160.0)


def check_oracle(count: int = 512) -> CheckResult:
    worst = 0.0
    for beta in BETAS:
        for lam in LAMBDAS:
            for tau in TAUS:
                a = tempered_coeffs(beta, lam, tau, count).l
                b = tempered_coeffs_oracle(beta, lam, tau, count).l
                worst = max(worst, float(np.max(np.abs(a - b) / np.abs(b))))
    return CheckResult(
        "coefficient oracle", worst <= 1e-13, f"max relative deviation {worst:.3e} (<= 1e-13)"
    )


def check_positivity(count: int = 10_001) -> CheckResult:
    lowest = math.inf
    for beta in BETAS:
        for lam in LAMBDAS:
            for tau in TAUS:
                lowest = min(lowest, float(np.min(tempered_coeffs(beta, lam, tau, count).l)))
    return CheckResult("weight positivity", lowest >= 0.0, f"min l_k = {lowest:.3e} (>= 0)")


def check_psd(sizes: Sequence[int] = (16, 64, 256)) -> CheckResult:
    worst = math.inf
    ok = True
    for N in sizes:
        for beta in (0.1, 0.5, 1.0):
            for lt in (0.0, 0.0025, 0.1):
                coeffs = tempered_coeffs(beta, lt, 1.0, N + 1)
                rep = psd_check(build_L_matrix(coeffs, N))
                scaled = rep.min_eigenvalue / coeffs.l[0]
                worst = min(worst, scaled)
                ok &= rep.min_eigenvalue >= -1e-10 * coeffs.l[0]
    return CheckResult("Toeplitz PSD", ok, f"min eigenvalue / l_0 = {worst:.3e} (>= -1e-10)")


def check_symbol(samples: int = 200) -> CheckResult:
    x = np.linspace(math.pi / samples, math.pi, samples)
    lowest = math.inf
    for beta in (0.1, 0.3, 0.5, 0.7, 1.0):
        for lt in (0.0, 0.0025, 0.1, 1.0):
            lowest = min(lowest, float(np.min(generating_fn_value(beta, lt, x))))
    return CheckResult("symbol positivity", lowest >= -1e-12, f"min f(beta, x) = {lowest:.3e}")


def check_stability(seeds: Sequence[int] = (0, 1, 2), M: int = 32, N: int = 32) -> CheckResult:
    worst = 0.0
    h = 1.0 / M
    for alpha in (1.1, 1.5, 2.0):
        for gamma in (1.1, 1.5, 2.0):
            for ratio in (0.1, 1.0, 10.0):
                for seed in seeds:
                    norms = stability_experiment(alpha, gamma, 0.1, M, N, ratio * h, seed)
                    worst = max(worst, float(np.max(norms / norms[0])))
    return CheckResult(
        "unconditional stability", worst <= 1 + 1e-12, f"max ||e^n||/||e^0|| = {worst:.15f}"
    )


def run_verification(seed: int = 0) -> list[CheckResult]:
    """Run the coefficient, positivity, PSD and stability checks."""
    return [
        check_oracle(),
        check_positivity(),
        check_psd(),
        check_symbol(),
        check_stability(seeds=(seed, seed + 1, seed + 2)),
    ]


# }}}

# vim: fdm=marker
