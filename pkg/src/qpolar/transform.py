"""The bounded transform Z_T = T (I + T* T)^(-1/2) and its inversion.

Z_T is a contraction with the same null space, range, and polar isometry
as T; when ||Z|| < 1 the original operator is recovered as
T = Z (I - Z* Z)^(-1/2). A diagonal shift-and-weight operator family with
growing weights exercises the transform against closed-form values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ckernel
from .qlinalg import QMatrix, ShapeMismatch, operator_norm, _chi_block
from .slices import PULLBACK_SQRT_TOL, chi_pullback


class NormTooLarge(ValueError):
    pass


class DimensionTooSmall(ValueError):
    pass


def inv_sqrt_shifted_gram(t: QMatrix) -> QMatrix:
    """(I + T* T)^(-1/2), the damping factor of the bounded transform.

    Computed as the PSD square root of the explicit inverse.
    """
    m = _chi_block(t)
    g = np.eye(m.shape[0], dtype=complex) + m.conj().T @ m
    g = 0.5 * (g + g.conj().T)
    g_inv = ckernel.gauss_inv(g)
    g_inv = 0.5 * (g_inv + g_inv.conj().T)
    return chi_pullback(ckernel.psd_sqrt(g_inv), PULLBACK_SQRT_TOL)


def z_transform(t: QMatrix) -> QMatrix:
    """Bounded transform Z_T = T (I + T* T)^(-1/2), a contraction."""
    if t.shape[0] != t.shape[1]:
        raise ShapeMismatch("the bounded transform needs a square operator")
    return chi_pullback(
        _chi_block(t) @ _chi_block(inv_sqrt_shifted_gram(t)),
        PULLBACK_SQRT_TOL)


def z_inverse(z: QMatrix, tol: float = 1e-8) -> QMatrix:
    """Recover T from its bounded transform: T = Z (I - Z* Z)^(-1/2).

    Requires ||Z|| < 1 - tol; at norm one the preimage is unbounded and
    has no finite-dimensional representative, so NormTooLarge is raised.
    """
    if z.shape[0] != z.shape[1]:
        raise ShapeMismatch("the inverse transform needs a square operator")
    nz = operator_norm(z)
    if nz >= 1.0 - tol:
        raise NormTooLarge(f"||Z|| = {nz:.12f} is not below 1 - {tol:.1e}")
    m = _chi_block(z)
    k = np.eye(m.shape[0], dtype=complex) - m.conj().T @ m
    k = 0.5 * (k + k.conj().T)
    k_inv = ckernel.gauss_inv(k)
    k_inv = 0.5 * (k_inv + k_inv.conj().T)
    root = ckernel.psd_sqrt(k_inv)
    return chi_pullback(m @ root, PULLBACK_SQRT_TOL)


@dataclass(frozen=True)
class TruncatedWeightOp:
    """Truncation of the diagonal shift-and-weight operator.

    Sends e1 -> e2 and e2 -> e4, kills e3, e4, e5, and scales e_k by the
    weight k for 6 <= k <= N. The weights grow without bound with the
    truncation size, which is how unboundedness shows up at finite
    dimension.
    """

    dimension: int

    @property
    def matrix(self) -> QMatrix:
        n = self.dimension
        a = np.zeros((n, n), dtype=complex)
        a[1, 0] = 1.0
        a[3, 1] = 1.0
        for k in range(6, n + 1):
            a[k - 1, k - 1] = float(k)
        return QMatrix(a)


def weight_matrix(n: int) -> QMatrix:
    """The contracted companion of the weight operator, built directly.

    Column 1 carries 1/sqrt(2) into row 2, column 2 carries 1/sqrt(2)
    into row 4, columns 3 to 5 vanish, and column k holds the diagonal
    weight k / sqrt(k^2 + 1) for k >= 6.
    """
    if n < 7:
        raise DimensionTooSmall("need dimension at least 7")
    a = np.zeros((n, n), dtype=complex)
    a[1, 0] = 1.0 / math.sqrt(2.0)
    a[3, 1] = 1.0 / math.sqrt(2.0)
    for k in range(6, n + 1):
        a[k - 1, k - 1] = k / math.sqrt(k * k + 1.0)
    return QMatrix(a)


def null_swap_perturbation(n: int) -> QMatrix:
    """The explicit partial isometry from the null space into the corange.

    Sends e3 -> e1, e4 -> e3, e5 -> e5 and vanishes elsewhere; combined
    with the polar isometry of the weight matrix it produces a second
    factorization.
    """
    if n < 7:
        raise DimensionTooSmall("need dimension at least 7")
    a = np.zeros((n, n), dtype=complex)
    a[0, 2] = 1.0
    a[2, 3] = 1.0
    a[4, 4] = 1.0
    return QMatrix(a)


def truncated_example(n: int) -> tuple[TruncatedWeightOp, QMatrix]:
    """The truncated weight operator together with its bounded transform."""
    if n < 7:
        raise DimensionTooSmall("need dimension at least 7")
    op = TruncatedWeightOp(n)
    return op, z_transform(op.matrix)
