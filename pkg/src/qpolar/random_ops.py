"""Random operator constructions, one per structural class.

Used by the verification suites and the tests. Every function takes an
explicit SplitMix64 generator, so a (seed, trial) pair pins the operator.
"""

from __future__ import annotations

import numpy as np

from .polar import polar_decompose
from .qlinalg import QMatrix, QVector, gram_schmidt, operator_norm, projector_onto
from .quaternion import Quaternion
from .rng import SplitMix64


def rand_quaternion(r: SplitMix64) -> Quaternion:
    return Quaternion(r.uniform(-1, 1), r.uniform(-1, 1),
                      r.uniform(-1, 1), r.uniform(-1, 1))


def rand_qvector(r: SplitMix64, n: int) -> QVector:
    a1 = np.array([complex(r.uniform(-1, 1), r.uniform(-1, 1))
                   for _ in range(n)])
    a2 = np.array([complex(r.uniform(-1, 1), r.uniform(-1, 1))
                   for _ in range(n)])
    return QVector(a1, a2)


def rand_qmatrix(r: SplitMix64, n: int, cols: int | None = None) -> QMatrix:
    cols = n if cols is None else cols
    a1 = np.array([[complex(r.uniform(-1, 1), r.uniform(-1, 1))
                    for _ in range(cols)] for _ in range(n)])
    a2 = np.array([[complex(r.uniform(-1, 1), r.uniform(-1, 1))
                    for _ in range(cols)] for _ in range(n)])
    return QMatrix(a1, a2)


def hermitian(r: SplitMix64, n: int) -> QMatrix:
    h = rand_qmatrix(r, n)
    return h + h.adjoint()


def anti_self_adjoint(r: SplitMix64, n: int) -> QMatrix:
    h = rand_qmatrix(r, n)
    return h - h.adjoint()


def psd(r: SplitMix64, n: int) -> QMatrix:
    b = rand_qmatrix(r, n)
    return b.adjoint() @ b


def unitary(r: SplitMix64, n: int) -> QMatrix:
    """Polar isometry of a random draw, resampled until full rank."""
    while True:
        t = rand_qmatrix(r, n)
        f = polar_decompose(t)
        if f.null_rank == 0:
            return f.u0


def normal(r: SplitMix64, n: int) -> QMatrix:
    """Unitary conjugate of a diagonal with complex entries."""
    w = unitary(r, n)
    d = QMatrix.diag([complex(r.uniform(-1, 1), r.uniform(-1, 1))
                      for _ in range(n)])
    return w @ d @ w.adjoint()


def projection(r: SplitMix64, n: int, rank: int | None = None) -> QMatrix:
    rank = r.randint(n + 1) if rank is None else rank
    if rank == 0:
        return QMatrix.zeros(n)
    basis = gram_schmidt([rand_qvector(r, n) for _ in range(rank)])
    return projector_onto(basis)


def rank_deficient(r: SplitMix64, n: int, rank: int) -> QMatrix:
    """Random draw forced to the given rank by a rank-r projector."""
    if rank == 0:
        return QMatrix.zeros(n)
    g = rand_qmatrix(r, n)
    return g @ projection(r, n, rank)


def partial_isometry(r: SplitMix64, n: int,
                     rank: int | None = None) -> QMatrix:
    rank = (1 + r.randint(n)) if rank is None else rank
    if rank == 0:
        return QMatrix.zeros(n)
    return polar_decompose(rank_deficient(r, n, rank)).u0


def bounded_norm(r: SplitMix64, n: int, max_norm: float) -> QMatrix:
    """Random draw rescaled to a uniformly random norm below max_norm."""
    t = rand_qmatrix(r, n)
    nt = operator_norm(t)
    if nt == 0.0:
        return t
    return t * (r.uniform(0.05, 1.0) * max_norm / nt)
