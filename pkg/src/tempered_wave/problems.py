r"""Continuous problem instances.

The model problem is

.. math::

    \partial_t u = I_t^{\gamma-1,\lambda} \nabla_x^\alpha u + f(x, t),
    \qquad u(x, 0) = 0, \qquad u(a, t) = u(b, t) = 0,

with :math:`1 < \alpha, \gamma \le 2` and :math:`\lambda \ge 0`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import gamma as gamma_fn

from .exceptions import DomainError
from .kernels import riesz_kappa

__all__ = [
    "ProblemSpec",
    "manufactured_problem",
    "manufactured_bracket",
    "exact_riesz_of_manufactured",
    "PROBLEMS",
]


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class ProblemSpec:
    """A tempered fractional diffusion-wave problem.

    ``forcing(x, t)`` and ``exact(x, t)`` must accept an array ``x`` and a
    scalar ``t``. Only zero initial data are supported by the solver.
    """

    alpha: float
    gamma: float
    lam: float
    forcing: Callable[[np.ndarray, float], np.ndarray]
    domain: tuple[float, float] = (0.0, 1.0)
    horizon: float = 0.5
    exact: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    u0: Callable[[np.ndarray], np.ndarray] = field(default=_zero)
    name: str = "custom"

    def __post_init__(self):
        if not 1.0 < self.alpha <= 2.0:
            raise DomainError(f"alpha must lie in (1, 2], got {self.alpha!r}")
        if not 1.0 < self.gamma <= 2.0:
            raise DomainError(f"gamma must lie in (1, 2], got {self.gamma!r}")
        if not self.lam >= 0.0:
            raise DomainError(f"lambda must be >= 0, got {self.lam!r}")
        a, b = self.domain
        if not b > a:
            raise DomainError(f"empty domain ({a!r}, {b!r})")
        if not self.horizon > 0:
            raise DomainError(f"horizon must be > 0, got {self.horizon!r}")

    @property
    def beta(self) -> float:
        return self.gamma - 1.0


def manufactured_bracket(x, alpha: float):
    r"""Sum of left and right Riemann-Liouville derivatives of
    :math:`x^2(1-x)^2` on :math:`(0, 1)`.

    .. math::

        2\frac{x^{2-\alpha}+(1-x)^{2-\alpha}}{\Gamma(3-\alpha)}
        - 12\frac{x^{3-\alpha}+(1-x)^{3-\alpha}}{\Gamma(4-\alpha)}
        + 24\frac{x^{4-\alpha}+(1-x)^{4-\alpha}}{\Gamma(5-\alpha)}
    """
    x = np.asarray(x, dtype=float)
    y = 1.0 - x
    total = 0.0
    for coeff, p in ((2.0, 2.0), (-12.0, 3.0), (24.0, 4.0)):
        q = p - alpha
        total = total + coeff * (x**q + y**q) / gamma_fn(q + 1.0)
    return total


def exact_riesz_of_manufactured(x, alpha: float):
    r"""Riesz derivative :math:`\nabla_x^\alpha` of :math:`x^2(1-x)^2` on (0, 1).

    Equal to :math:`-\kappa_\alpha` times :func:`manufactured_bracket`; at
    ``alpha = 2`` this is the classical second derivative
    ``2 - 12 x + 12 x**2``.
    """
    return -riesz_kappa(alpha) * manufactured_bracket(x, alpha)


def manufactured_problem(
    alpha: float, gamma: float, lam: float, horizon: float = 0.5
) -> ProblemSpec:
    r"""Problem on (0, 1) with exact solution
    :math:`u(x,t) = e^{-\lambda t} t^3 x^2 (1-x)^2`.

    The forcing is

    .. math::

        f(x,t) = (3e^{-\lambda t}t^2 - \lambda e^{-\lambda t}t^3)x^2(x-1)^2
            + \frac{\Gamma(4)}{2\Gamma(3+\gamma)\cos(\alpha\pi/2)}
              e^{-\lambda t} t^{2+\gamma} B_\alpha(x),

    with :math:`B_\alpha` given by :func:`manufactured_bracket`.
    """
    # the cosine vanishes only at alpha = 1, which ProblemSpec rejects
    cos_term = -1.0 if alpha == 2.0 else math.cos(alpha * math.pi / 2.0)
    scale = math.gamma(4.0) / (2.0 * math.gamma(3.0 + gamma) * cos_term)

    def exact(x, t):
        x = np.asarray(x, dtype=float)
        return math.exp(-lam * t) * t**3 * x**2 * (1.0 - x) ** 2

    def forcing(x, t):
        x = np.asarray(x, dtype=float)
        decay = math.exp(-lam * t)
        time_part = (3.0 * decay * t**2 - lam * decay * t**3) * x**2 * (x - 1.0) ** 2
        memory_part = scale * decay * t ** (2.0 + gamma) * manufactured_bracket(x, alpha)
        return time_part + memory_part

    return ProblemSpec(
        alpha=alpha,
        gamma=gamma,
        lam=lam,
        forcing=forcing,
        domain=(0.0, 1.0),
        horizon=horizon,
        exact=exact,
        name="manufactured",
    )


#: problem factories selectable by name
PROBLEMS = {"manufactured": manufactured_problem}
