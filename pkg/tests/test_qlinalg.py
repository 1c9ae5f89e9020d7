import math

import numpy as np
import pytest

from helpers import inner_oracle, matmul_oracle, matvec_oracle, trial_rng
from qpolar import (QMatrix, QVector, Quaternion, ShapeMismatch, adjoint,
                    classify, gram_schmidt, inner, matrix_in_basis,
                    null_range_bases, operator_norm, projector_onto,
                    quaternionic_rank, weight_matrix)
from qpolar.quaternion import I, J, K
from qpolar import random_ops


def test_inner_examples():
    e1 = QVector.basis(2, 0)
    assert inner(e1, e1 * J) == J
    x = QVector.from_quaternions([I, J])
    assert inner(x, x) == Quaternion(2)
    with pytest.raises(ShapeMismatch):
        inner(QVector.zeros(2), QVector.zeros(3))


def test_inner_conjugate_symmetry_bulk():
    rr = trial_rng(11)
    for _ in range(10_000):
        x = random_ops.rand_qvector(rr, 3)
        y = random_ops.rand_qvector(rr, 3)
        lhs = inner(x, y)
        rhs = inner(y, x).conjugate()
        assert (lhs - rhs).norm() <= 1e-13 * max(1.0, lhs.norm())


def test_inner_right_linearity():
    rr = trial_rng(12)
    for _ in range(200):
        u = random_ops.rand_qvector(rr, 4)
        v = random_ops.rand_qvector(rr, 4)
        w = random_ops.rand_qvector(rr, 4)
        q = random_ops.rand_quaternion(rr)
        lhs = inner(u, v + w * q)
        rhs = inner(u, v) + inner(u, w) * q
        assert (lhs - rhs).norm() <= 1e-13 * max(1.0, lhs.norm())


def test_inner_matches_direct_summation():
    rr = trial_rng(13)
    for _ in range(100):
        x = random_ops.rand_qvector(rr, 5)
        y = random_ops.rand_qvector(rr, 5)
        assert (inner(x, y) - inner_oracle(x, y)).norm() <= 1e-13


def test_cauchy_schwarz_bulk():
    rr = trial_rng(14)
    for _ in range(10_000):
        x = random_ops.rand_qvector(rr, 3)
        y = random_ops.rand_qvector(rr, 3)
        assert inner(x, y).norm() <= x.norm() * y.norm() * (1 + 1e-13)


def test_right_module_action():
    rr = trial_rng(15)
    for _ in range(100):
        a = random_ops.rand_qmatrix(rr, 4)
        x = random_ops.rand_qvector(rr, 4)
        y = random_ops.rand_qvector(rr, 4)
        q = random_ops.rand_quaternion(rr)
        lhs = a.matvec(x * q + y)
        rhs = a.matvec(x) * q + a.matvec(y)
        assert (lhs - rhs).norm() <= 1e-12 * max(1.0, lhs.norm())


def test_matmul_matches_hamilton_oracle():
    rr = trial_rng(16)
    for _ in range(25):
        a = random_ops.rand_qmatrix(rr, 3)
        b = random_ops.rand_qmatrix(rr, 3)
        assert (a @ b - matmul_oracle(a, b)).frobenius_norm() <= 1e-13
        x = random_ops.rand_qvector(rr, 3)
        assert (a.matvec(x) - matvec_oracle(a, x)).norm() <= 1e-13


def test_adjoint_examples():
    assert adjoint(QMatrix.from_quaternions([[J]])).entry(0, 0) == -J
    eye = QMatrix.identity(3)
    assert (adjoint(eye) - eye).frobenius_norm() == 0.0


def test_adjoint_identity_random_pairs():
    rr = trial_rng(17)
    a = random_ops.rand_qmatrix(rr, 4)
    astar = adjoint(a)
    worst = 0.0
    for _ in range(100):
        x = random_ops.rand_qvector(rr, 4)
        y = random_ops.rand_qvector(rr, 4)
        diff = inner(x, a.matvec(y)) - inner(astar.matvec(x), y)
        worst = max(worst, diff.norm())
    assert worst < 1e-12
    assert (adjoint(astar) - a).frobenius_norm() == 0.0


def test_gram_schmidt_examples():
    e1 = QVector.basis(2, 0)
    e2 = QVector.basis(2, 1)
    out = gram_schmidt([e1, e1 * K, e2])
    assert len(out) == 2
    # spans e1, e2 up to right unit scalars
    p = projector_onto(out)
    want = QMatrix.identity(2)
    assert (p - want).frobenius_norm() < 1e-12

    pair = gram_schmidt([QVector.from_quaternions([Quaternion(1), Quaternion(1)]),
                         QVector.from_quaternions([Quaternion(1), Quaternion(0)])])
    assert len(pair) == 2
    for r, u in enumerate(pair):
        for s, v in enumerate(pair):
            want_q = Quaternion(1.0 if r == s else 0.0)
            assert (inner(u, v) - want_q).norm() < 1e-12

    assert gram_schmidt([]) == []


def test_gram_schmidt_rank_deficient_shrinks():
    rr = trial_rng(18)
    vs = [random_ops.rand_qvector(rr, 3) for _ in range(2)]
    vs.append(vs[0] * random_ops.rand_quaternion(rr)
              + vs[1] * random_ops.rand_quaternion(rr))
    out = gram_schmidt(vs)
    assert len(out) == 2


def test_operator_norm_examples():
    a = QMatrix.diag([J, Quaternion(0)])
    assert abs(operator_norm(a) - 1.0) < 1e-12
    assert operator_norm(QMatrix.zeros(3)) == 0.0
    # truncated weight matrix norms are the largest diagonal weight
    assert abs(operator_norm(weight_matrix(7)) - 7 / math.sqrt(50)) < 1e-12
    assert abs(operator_norm(weight_matrix(10)) - 10 / math.sqrt(101)) < 1e-12


def test_operator_norm_matches_block_svd():
    from qpolar import chi
    rr = trial_rng(19)
    for _ in range(20):
        a = random_ops.rand_qmatrix(rr, 6)
        sigma = np.linalg.svd(chi(a).m, compute_uv=False)[0]
        assert abs(operator_norm(a) - sigma) <= 1e-9 * max(1.0, sigma)
        assert abs(operator_norm(a) - operator_norm(adjoint(a))) \
            <= 1e-9 * max(1.0, sigma)


def test_classify_identity():
    oc = classify(QMatrix.identity(3))
    assert oc.unitary and oc.self_adjoint and oc.positive
    assert oc.projection and oc.partial_isometry and oc.normal
    assert not oc.anti_self_adjoint


def test_classify_j_scalar():
    oc = classify(QMatrix.from_quaternions([[J]]))
    assert oc.anti_self_adjoint and oc.unitary and oc.normal
    assert not oc.self_adjoint and not oc.positive


def test_classify_weight_isometry():
    from qpolar import polar_decompose
    u0 = polar_decompose(weight_matrix(10)).u0
    oc = classify(u0)
    assert oc.partial_isometry
    assert not oc.unitary


def test_classify_flag_implications():
    rr = trial_rng(20)
    builders = [
        lambda: random_ops.rand_qmatrix(rr, 4),
        lambda: random_ops.hermitian(rr, 4),
        lambda: random_ops.anti_self_adjoint(rr, 4),
        lambda: random_ops.psd(rr, 4),
        lambda: random_ops.unitary(rr, 4),
        lambda: random_ops.normal(rr, 4),
        lambda: random_ops.projection(rr, 4),
        lambda: random_ops.partial_isometry(rr, 4),
    ]
    for build in builders:
        oc = classify(build())
        if oc.unitary:
            assert oc.normal
        if oc.projection:
            assert oc.self_adjoint
        if oc.positive:
            assert oc.self_adjoint
        with pytest.raises(ValueError):
            classify(build(), tol=0.0)


def test_classify_expected_flags_per_class():
    rr = trial_rng(21)
    assert classify(random_ops.psd(rr, 4)).positive
    assert classify(random_ops.hermitian(rr, 4)).self_adjoint
    assert classify(random_ops.anti_self_adjoint(rr, 4)).anti_self_adjoint
    assert classify(random_ops.unitary(rr, 4)).unitary
    assert classify(random_ops.normal(rr, 4)).normal
    assert classify(random_ops.projection(rr, 4, rank=2)).projection
    assert classify(random_ops.partial_isometry(rr, 4, rank=2)).partial_isometry


def test_null_range_bases_zero_matrix():
    null_basis, range_basis = null_range_bases(QMatrix.zeros(3))
    assert len(null_basis) == 3 and range_basis == []
    p = projector_onto(null_basis)
    assert (p - QMatrix.identity(3)).frobenius_norm() < 1e-12


def test_null_range_bases_weight_matrix():
    a = weight_matrix(10)
    null_basis, range_basis = null_range_bases(a)
    assert len(null_basis) == 3 and len(range_basis) == 7
    want = QMatrix.zeros(10)
    for k in (2, 3, 4):
        want.a1[k, k] = 1.0
    assert (projector_onto(null_basis) - want).frobenius_norm() < 1e-10
    for v in null_basis:
        assert a.matvec(v).norm() <= 1e-10 * operator_norm(a)


def test_null_range_bases_planted_rank():
    rr = trial_rng(22)
    a = random_ops.rank_deficient(rr, 4, 2)
    null_basis, range_basis = null_range_bases(a)
    assert len(null_basis) == 2 and len(range_basis) == 2
    assert quaternionic_rank(a) == 2


def test_rank_nullity_and_corange_orthogonality():
    rr = trial_rng(23)
    for k in range(200):
        n = 1 + rr.randint(6)
        rank = rr.randint(n + 1)
        a = (random_ops.rand_qmatrix(rr, n) if rank == n
             else random_ops.rank_deficient(rr, n, rank))
        null_basis, range_basis = null_range_bases(a)
        assert len(null_basis) + len(range_basis) == n
        # R(A)-perp equals N(A*): mutual orthogonality of computed bases
        null_star = null_range_bases(adjoint(a))[0]
        for u in null_star:
            for v in range_basis:
                assert inner(u, v).norm() < 1e-10


def test_matrix_in_basis():
    rr = trial_rng(24)
    a = random_ops.rand_qmatrix(rr, 4)
    std = [QVector.basis(4, k) for k in range(4)]
    assert (matrix_in_basis(a, std) - a).frobenius_norm() < 1e-13
    basis = gram_schmidt([random_ops.rand_qvector(rr, 4) for _ in range(4)])
    b = matrix_in_basis(a, basis)
    # entries are <f_r | A f_s>
    for r in range(4):
        for s in range(4):
            want = inner(basis[r], a.matvec(basis[s]))
            assert (b.entry(r, s) - want).norm() < 1e-12
    # conjugation by a unitary basis preserves the operator norm
    assert abs(operator_norm(b) - operator_norm(a)) < 1e-9
