"""Discrete Riesz operator on the interior nodes of a uniform grid.

The operator is stored as a symmetric Toeplitz matrix (first row only) and
applied densely. Homogeneous Dirichlet data are implied by working on the
interior nodes ``x_1, ..., x_{M-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from .kernels import RieszStencil, riesz_weights

__all__ = [
    "SymToeplitz",
    "DiscreteRiesz",
    "DefinitenessReport",
    "assemble_riesz",
    "apply",
    "definiteness_check",
]


@dataclass(frozen=True)
class SymToeplitz:
    """Symmetric Toeplitz matrix given by its first row."""

    first_row: np.ndarray

    @property
    def dim(self) -> int:
        return self.first_row.size

    def entry(self, i: int, j: int) -> float:
        return float(self.first_row[abs(i - j)])

    def dense(self) -> np.ndarray:
        return scipy.linalg.toeplitz(self.first_row)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self._dense @ v

    @cached_property
    def _dense(self) -> np.ndarray:
        d = self.dense()
        d.setflags(write=False)
        return d


@dataclass(frozen=True)
class DiscreteRiesz:
    r"""The operator :math:`u \mapsto c\,A_\alpha u` with
    :math:`c = -\kappa_\alpha / (\Gamma(4-\alpha) h^\alpha) > 0`.
    """

    stencil: RieszStencil
    matrix: SymToeplitz
    h: float
    prefactor: float = field(repr=False)

    @property
    def alpha(self) -> float:
        return self.stencil.alpha

    @property
    def dim(self) -> int:
        return self.matrix.dim

    def dense(self) -> np.ndarray:
        """Dense matrix of the full operator, prefactor included."""
        return self.prefactor * self.matrix.dense()

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return apply(self, u)


def assemble_riesz(alpha: float, M: int, h: float) -> DiscreteRiesz:
    r"""Assemble the discrete Riesz operator for ``M - 1`` interior nodes.

    The first row of :math:`A_\alpha` is
    ``[2 w_1, w_0 + w_2, w_3, w_4, ..., w_{M-1}]``, i.e. entry ``(i, j)`` is
    :math:`w_{|i-j|+1}` once :math:`|i - j| \ge 2`.
    """
    if int(M) != M or M < 3:
        raise ValueError(f"need M >= 3 (at least two interior nodes), got {M!r}")
    if not h > 0:
        raise ValueError(f"space step must be positive, got {h!r}")

    stencil = riesz_weights(alpha, max(M + 1, 4))
    w = stencil.weights
    row = np.empty(M - 1)
    row[0] = 2.0 * w[1]
    if M - 1 > 1:
        row[1] = w[0] + w[2]
    row[2:] = w[3:M]
    row.setflags(write=False)

    prefactor = -stencil.kappa / (stencil.gamma_scale * h**alpha)
    return DiscreteRiesz(
        stencil=stencil, matrix=SymToeplitz(row), h=float(h), prefactor=prefactor
    )


def apply(op: DiscreteRiesz, u: np.ndarray) -> np.ndarray:
    """Apply the discrete Riesz operator to interior values ``u``."""
    u = np.asarray(u, dtype=float)
    if u.shape[0] != op.dim:
        raise ValueError(f"expected {op.dim} interior values, got {u.shape[0]}")
    return op.prefactor * op.matrix.matvec(u)


@dataclass(frozen=True)
class DefinitenessReport:
    #: largest (least negative) value of ``(op u, u) / (u, u)`` over the trials
    max_quadratic_form: float
    #: largest eigenvalue of the symmetric operator
    max_eigenvalue: float
    #: smallest eigenvalue, i.e. the most negative one
    min_eigenvalue: float
    negative_definite: bool


def definiteness_check(
    op: DiscreteRiesz, trials: int = 100, seed: int = 0, slack: float = 1.0e-12
) -> DefinitenessReport:
    """Check that ``op`` is negative definite.

    Evaluates Rayleigh quotients of ``trials`` random vectors and the extreme
    eigenvalues of the dense operator. The operator counts as negative
    definite when both the largest quotient and the largest eigenvalue are
    below ``-slack`` times the spectral radius.
    """
    if trials < 1:
        raise ValueError("need at least one trial")

    rng = np.random.default_rng(seed)
    V = rng.standard_normal((trials, op.dim))
    AV = op.prefactor * (V @ op.matrix.dense())
    q = np.einsum("ij,ij->i", AV, V) / np.einsum("ij,ij->i", V, V)

    eigs = scipy.linalg.eigvalsh(op.dense())
    scale = np.max(np.abs(eigs))
    ok = bool(np.max(q) < -slack * scale and eigs[-1] < -slack * scale)

    return DefinitenessReport(
        max_quadratic_form=float(np.max(q)),
        max_eigenvalue=float(eigs[-1]),
        min_eigenvalue=float(eigs[0]),
        negative_definite=ok,
    )
