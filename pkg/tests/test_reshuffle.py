import io

import numpy as np
import pytest

from rtd.errors import ShapeMismatch
from rtd.reshuffle import (
    cross_map,
    dump_perm,
    reshuffle_from_seed,
    reshuffle_identity,
)
from rtd.rng import gaussians


def test_identity_perm_values():
    assert reshuffle_identity(2, 2, (2, 2)).perm.tolist() == [0, 1, 2, 3]
    assert reshuffle_identity(2, 3, (3, 2)).perm.tolist() == [0, 1, 2, 3, 4, 5]
    assert reshuffle_identity(4, 4, (2, 2, 4)).perm.tolist() == list(range(16))


def test_identity_is_classical_folding():
    A = np.arange(6.0).reshape(2, 3)
    op = reshuffle_identity(2, 3, (3, 2))
    Y = op.apply(A)
    # entry (0, 2) of the matrix lands at tensor multi-index (1, 0)
    assert Y[1, 0] == A[0, 2]
    assert np.array_equal(Y, A.reshape(3, 2))


def test_apply_identity_keeps_entries():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    Y = reshuffle_identity(2, 2, (2, 2)).apply(A)
    assert np.array_equal(Y, A)


def test_roundtrip_exact():
    op = reshuffle_from_seed(5, 8, (2, 20), 3)
    A = gaussians(40, 1).reshape(5, 8)
    assert np.array_equal(op.adjoint(op.apply(A)), A)
    Y = gaussians(40, 2).reshape(2, 20)
    assert np.array_equal(op.apply(op.adjoint(Y)), Y)


def test_perm_is_bijection_with_inverse():
    op = reshuffle_from_seed(6, 7, (42,), 11)
    assert sorted(op.perm.tolist()) == list(range(42))
    assert np.array_equal(op.inv_perm[op.perm], np.arange(42))


def test_adjoint_inner_product_exact_on_integers():
    op = reshuffle_from_seed(4, 6, (3, 8), 5)
    rng = np.random.default_rng(0)
    A = rng.integers(-9, 10, size=(4, 6)).astype(float)
    Y = rng.integers(-9, 10, size=(3, 8)).astype(float)
    assert float(np.sum(op.apply(A) * Y)) == float(np.sum(A * op.adjoint(Y)))


def test_norm_preserved():
    op = reshuffle_from_seed(9, 4, (6, 6), 2)
    A = gaussians(36, 5).reshape(9, 4)
    Y = op.apply(A)
    # entries are relocated verbatim, so the multiset is preserved exactly
    assert np.array_equal(np.sort(Y.ravel()), np.sort(A.ravel()))
    assert np.linalg.norm(Y) == pytest.approx(np.linalg.norm(A), rel=1e-13)


def test_linearity_exact():
    op = reshuffle_from_seed(3, 5, (15,), 8)
    A = gaussians(15, 1).reshape(3, 5)
    B = gaussians(15, 2).reshape(3, 5)
    assert np.array_equal(op.apply(2.0 * A + 0.5 * B), 2.0 * op.apply(A) + 0.5 * op.apply(B))


def test_zero_maps_to_zero():
    op = reshuffle_from_seed(3, 4, (12,), 1)
    assert not op.apply(np.zeros((3, 4))).any()
    assert not op.adjoint(np.zeros(12)).any()


def test_deterministic_per_seed():
    a = reshuffle_from_seed(4, 4, (16,), 9)
    b = reshuffle_from_seed(4, 4, (16,), 9)
    assert np.array_equal(a.perm, b.perm)


def test_shape_mismatch_errors():
    with pytest.raises(ShapeMismatch):
        reshuffle_identity(2, 3, (7,))
    with pytest.raises(ShapeMismatch):
        reshuffle_from_seed(2, 2, (2, 3), 0)
    op = reshuffle_from_seed(2, 2, (4,), 0)
    with pytest.raises(ShapeMismatch):
        op.apply(np.zeros((2, 3)))
    with pytest.raises(ShapeMismatch):
        op.adjoint(np.zeros(5))
    with pytest.raises(ShapeMismatch):
        reshuffle_identity(0, 3, (0,))


def test_cross_map_self_is_identity():
    op = reshuffle_from_seed(4, 4, (16,), 3)
    assert cross_map(op, op).tolist() == list(range(16))


def test_cross_map_with_identity():
    ident = reshuffle_identity(4, 4, (16,))
    op = reshuffle_from_seed(4, 4, (16,), 3)
    assert np.array_equal(cross_map(ident, op), op.inv_perm)


def test_cross_map_agrees_with_two_path():
    op_i = reshuffle_from_seed(4, 6, (24,), 1)
    op_j = reshuffle_from_seed(3, 8, (24,), 2)
    A = gaussians(24, 4).reshape(4, 6)
    via_ops = op_j.adjoint(op_i.apply(A))
    cross = cross_map(op_i, op_j)
    scattered = np.empty(24)
    scattered[cross] = A.ravel()
    assert np.array_equal(scattered.reshape(3, 8), via_ops)


def test_cross_map_size_mismatch():
    with pytest.raises(ShapeMismatch):
        cross_map(reshuffle_identity(2, 2, (4,)), reshuffle_identity(2, 3, (6,)))


def test_dump_perm():
    op = reshuffle_identity(2, 2, (4,))
    buf = io.StringIO()
    dump_perm(op, buf)
    assert buf.getvalue() == "0 1 2 3\n"


def test_perm_arrays_frozen():
    op = reshuffle_from_seed(3, 3, (9,), 4)
    with pytest.raises(ValueError):
        op.perm[0] = 5
