r"""Scalar coefficient sequences used by the discretization.

Three families live here:

* the weights :math:`w_m^\alpha` of the second-order Riesz stencil,
* the Grünwald factors :math:`g_m^{-\beta}`, i.e. the Taylor coefficients of
  :math:`(1 - z)^{-\beta}`,
* the tempered convolution-quadrature weights :math:`l_k^\beta`, the Taylor
  coefficients of

  .. math::

      l^\beta(z) = \left(1 - \frac{z}{e^{\lambda\tau}}\right)^{-\beta}
          \left(1 + \frac{1}{2}\left(1 - \frac{z}{e^{\lambda\tau}}\right)\right)^{-\beta}.

The production path for :math:`l_k^\beta` is the closed-form double-Grünwald
sum (:func:`tempered_coeffs`); :func:`tempered_coeffs_oracle` expands the
generating function as a truncated series product and exists for testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import DomainError

__all__ = [
    "RieszStencil",
    "GrunwaldSeq",
    "TemperedCoeffs",
    "riesz_weights",
    "riesz_kappa",
    "grunwald_coeffs",
    "tempered_coeffs",
    "tempered_coeffs_oracle",
    "generating_fn_value",
]


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _check_alpha(alpha: float) -> None:
    if not 1.0 < alpha <= 2.0:
        raise DomainError(f"spatial order alpha must lie in (1, 2], got {alpha!r}")


def _check_beta(beta: float) -> None:
    if not 0.0 < beta <= 1.0:
        raise DomainError(
            f"beta = gamma - 1 must lie in (0, 1], got {beta!r} (gamma = {beta + 1!r})"
        )


def _check_count(count: int, minimum: int = 1) -> None:
    if int(count) != count or count < minimum:
        raise DomainError(f"count must be an integer >= {minimum}, got {count!r}")


# {{{ Riesz stencil


@dataclass(frozen=True)
class RieszStencil:
    r"""Weights of the second-order Riesz stencil of order ``alpha``.

    The grid scaling :math:`1 / (\Gamma(4 - \alpha) h^\alpha)` is applied by
    :mod:`tempered_wave.operators`; only :math:`\Gamma(4 - \alpha)` is stored.
    """

    alpha: float
    #: :math:`\kappa_\alpha = 1 / (2 \cos(\alpha\pi/2))`, negative on (1, 2].
    kappa: float
    #: :math:`\Gamma(4 - \alpha)`.
    gamma_scale: float
    #: :math:`w_0^\alpha, \dots, w_{K-1}^\alpha`.
    weights: np.ndarray


def riesz_kappa(alpha: float) -> float:
    r"""Return :math:`\kappa_\alpha = 1/(2\cos(\alpha\pi/2))`."""
    _check_alpha(alpha)
    if alpha == 2.0:
        return -0.5
    return 1.0 / (2.0 * math.cos(alpha * math.pi / 2.0))


def riesz_weights(alpha: float, count: int) -> RieszStencil:
    r"""Compute the first ``count`` Riesz stencil weights.

    .. math::

        w_0 = 1, \quad w_1 = -4 + 2^{3-\alpha}, \quad
        w_2 = 6 - 2^{5-\alpha} + 3^{3-\alpha},

    and for :math:`m \ge 3` the fourth difference of :math:`m^{3-\alpha}`,
    :math:`(m+1)^p - 4m^p + 6(m-1)^p - 4(m-2)^p + (m-3)^p`.

    Parameters
    ----------
    alpha : float
        Order of the Riesz derivative, in :math:`(1, 2]`.
    count : int
        Number of weights to return, at least 4.
    """
    _check_alpha(alpha)
    _check_count(count, minimum=4)

    p = 3.0 - alpha
    w = np.empty(count)
    w[0] = 1.0
    w[1] = -4.0 + 2.0**p
    w[2] = 6.0 - 2.0 ** (5.0 - alpha) + 3.0**p
    m = np.arange(3, count, dtype=float)
    w[3:] = (m + 1) ** p - 4 * m**p + 6 * (m - 1) ** p - 4 * (m - 2) ** p + (m - 3) ** p
    if alpha == 2.0:
        # the fourth difference of a linear function is zero; remove the rounding
        w[3:] = 0.0

    return RieszStencil(
        alpha=alpha,
        kappa=riesz_kappa(alpha),
        gamma_scale=math.gamma(4.0 - alpha),
        weights=_frozen(w),
    )


# }}}


# {{{ Grünwald factors


@dataclass(frozen=True)
class GrunwaldSeq:
    r"""Taylor coefficients :math:`g_m^{-\beta}` of :math:`(1 - z)^{-\beta}`."""

    beta: float
    g: np.ndarray


def grunwald_coeffs(beta: float, count: int) -> GrunwaldSeq:
    """Return ``count`` coefficients of ``(1 - z)**(-beta)``.

    Uses ``g[m] = g[m - 1] * (m - 1 + beta) / m``, which stays accurate for
    ``m`` in the thousands where Gamma-function ratios overflow.
    """
    _check_count(count)

    g = np.empty(count)
    g[0] = 1.0
    for m in range(1, count):
        g[m] = g[m - 1] * (m - 1 + beta) / m

    return GrunwaldSeq(beta=beta, g=_frozen(g))


# }}}


# {{{ tempered quadrature weights


@dataclass(frozen=True)
class TemperedCoeffs:
    r"""Quadrature weights :math:`l_0^\beta, \dots, l_{K-1}^\beta`.

    With these, :math:`I_t^{\beta,\lambda}u(t_n) \approx \tau^\beta
    \sum_{k=0}^{n} l_k u(t_{n-k})` to second order.
    """

    beta: float
    lam: float
    tau: float
    l: np.ndarray  # noqa: E741

    def __len__(self) -> int:
        return self.l.size


def _check_tempering(lam: float, tau: float) -> None:
    if not lam >= 0.0:
        raise DomainError(f"tempering rate lambda must be >= 0, got {lam!r}")
    if not tau > 0.0:
        raise DomainError(f"time step tau must be > 0, got {tau!r}")


def tempered_coeffs(beta: float, lam: float, tau: float, count: int) -> TemperedCoeffs:
    r"""Compute the tempered quadrature weights in closed form.

    .. math::

        l_k^\beta = e^{-\lambda k\tau} \left(\tfrac{3}{2}\right)^{-\beta}
            \sum_{m=0}^{k} 3^{-m} g_m^{-\beta} g_{k-m}^{-\beta}.

    The inner sum runs from ``m = k`` down to ``m = 0`` so the smallest terms
    are accumulated first. The untempered sequence is computed once and scaled
    by :math:`e^{-\lambda k\tau}` afterwards, so the weights for ``lam > 0``
    are exactly those for ``lam = 0`` times the damping factor.
    """
    _check_beta(beta)
    _check_tempering(lam, tau)
    _check_count(count)

    l = _untempered(float(beta), int(count))  # noqa: E741
    if lam > 0.0:
        l = np.exp(-lam * tau * np.arange(count)) * l  # noqa: E741

    return TemperedCoeffs(beta=beta, lam=lam, tau=tau, l=_frozen(l))


@lru_cache(maxsize=32)
def _untempered(beta: float, count: int) -> np.ndarray:
    g = grunwald_coeffs(beta, count).g
    a = g * 3.0 ** -np.arange(count, dtype=float)

    inner = np.empty(count)
    for k in range(count):
        inner[k] = np.sum(a[k::-1] * g[: k + 1])
    return _frozen(1.5**-beta * inner)


def _linear_power_series(p0: float, p1: float, a: float, count: int) -> np.ndarray:
    # coefficients of (p0 + p1 z)**a from c' (p0 + p1 z) = a p1 c
    c = np.empty(count)
    c[0] = p0**a
    for k in range(1, count):
        c[k] = (a - k + 1) * p1 * c[k - 1] / (k * p0)
    return c


def tempered_coeffs_oracle(
    beta: float, lam: float, tau: float, count: int
) -> TemperedCoeffs:
    """Series-product reference for :func:`tempered_coeffs`.

    Each factor of the generating function is expanded as a power series in
    ``z`` with the tempering folded into its coefficients, and the two series
    are multiplied. O(count**2); intended for tests only.
    """
    _check_count(count)
    if count > 4096:
        raise DomainError("oracle is quadratic in count; use count <= 4096")

    d = math.exp(lam * tau)
    first = _linear_power_series(1.0, -1.0 / d, -beta, count)
    second = _linear_power_series(1.5, -0.5 / d, -beta, count)
    l = np.convolve(first, second)[:count]  # noqa: E741

    return TemperedCoeffs(beta=beta, lam=lam, tau=tau, l=_frozen(l))


# }}}


# {{{ generating function on the unit circle


def _symbol(beta: float, lambda_tau: float, z):
    y = 1.0 - z * math.exp(-lambda_tau)
    return y ** (-beta) * (1.0 + 0.5 * y) ** (-beta)


def generating_fn_value(beta: float, lambda_tau: float, x):
    r"""Evaluate the symbol of the quadrature-weight Toeplitz matrix.

    .. math::

        f(\beta, x) = \sum_{k\ge0} l_k^\beta \cos(kx)
            = \tfrac12 l^\beta(e^{ix}) + \tfrac12 l^\beta(e^{-ix}).

    Parameters
    ----------
    beta : float
    lambda_tau : float
        The product :math:`\lambda\tau \ge 0`.
    x : float or array_like
        Points in :math:`[0, \pi]`.

    Returns
    -------
    float or numpy.ndarray
        The real value(s). At ``lambda_tau == 0`` and ``x == 0`` the symbol
        has a pole and ``inf`` is returned.
    """
    if lambda_tau < 0:
        raise DomainError(f"lambda_tau must be >= 0, got {lambda_tau!r}")

    xs = np.asarray(x, dtype=float)
    pole = (lambda_tau == 0.0) & (xs == 0.0)
    safe = np.where(pole, np.pi, xs)

    z = np.exp(1j * safe)
    value = 0.5 * _symbol(beta, lambda_tau, z) + 0.5 * _symbol(beta, lambda_tau, z.conj())
    residue = np.abs(value.imag)
    if np.any(residue > 1.0e-12 * np.maximum(1.0, np.abs(value.real))):
        raise AssertionError("generating function value has a non-negligible imaginary part")

    result = np.where(pole, np.inf, value.real)
    return float(result) if result.ndim == 0 else result


# }}}

# vim: fdm=marker
