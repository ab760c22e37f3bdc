"""Reshuffling operators: bijective entry relocations between matrices and tensors.

A reshuffle maps every entry of an m x n matrix to exactly one entry of a
tensor with the same element count.  Classical folding is the identity
permutation under the canonical row-major linearization (last index
fastest), which this module uses for both matrices and tensors.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch
from .rng import random_permutation


def _check_counts(m, n, dst_shape):
    if m < 1 or n < 1:
        raise ShapeMismatch(f"matrix extents must be >= 1, got {m}x{n}")
    dst_shape = tuple(int(e) for e in dst_shape)
    if len(dst_shape) < 1 or any(e < 1 for e in dst_shape):
        raise ShapeMismatch(f"tensor extents must be >= 1, got {dst_shape}")
    if m * n != math.prod(dst_shape):
        raise ShapeMismatch(
            f"element counts differ: {m}x{n} = {m * n} vs {dst_shape} = {math.prod(dst_shape)}"
        )
    return dst_shape


@dataclass(frozen=True)
class ReshuffleOp:
    """Bijection between an m x n matrix and a tensor of equal element count.

    ``perm`` maps matrix linear index k to tensor linear index perm[k]
    (both row-major); ``inv_perm`` is its inverse.  Both directions are
    stored so apply and adjoint are each a single gather pass.
    """

    m: int
    n: int
    dst_shape: tuple
    perm: np.ndarray
    inv_perm: np.ndarray

    @property
    def size(self):
        return self.m * self.n

    def apply(self, A):
        """Relocate matrix ``A`` into a tensor of shape ``dst_shape``."""
        A = np.asarray(A)
        if A.shape != (self.m, self.n):
            raise ShapeMismatch(f"expected {self.m}x{self.n} matrix, got {A.shape}")
        return A.ravel()[self.inv_perm].reshape(self.dst_shape)

    def adjoint(self, Y):
        """Inverse relocation: pull tensor ``Y`` back to an m x n matrix."""
        Y = np.asarray(Y)
        if Y.shape != self.dst_shape:
            raise ShapeMismatch(f"expected tensor of shape {self.dst_shape}, got {Y.shape}")
        return Y.ravel()[self.perm].reshape(self.m, self.n)


def _freeze(a):
    a.setflags(write=False)
    return a


def reshuffle_identity(m, n, dst_shape):
    """Classical folding: the identity permutation under row-major order."""
    dst_shape = _check_counts(m, n, dst_shape)
    perm = _freeze(np.arange(m * n, dtype=np.intp))
    return ReshuffleOp(m, n, dst_shape, perm, perm)


def reshuffle_from_seed(m, n, dst_shape, seed):
    """Uniformly random reshuffle, reproducible from (m, n, dst_shape, seed)."""
    dst_shape = _check_counts(m, n, dst_shape)
    perm = random_permutation(m * n, seed)
    inv_perm = np.empty_like(perm)
    inv_perm[perm] = np.arange(m * n, dtype=np.intp)
    return ReshuffleOp(m, n, dst_shape, _freeze(perm), _freeze(inv_perm))


def cross_map(op_i, op_j):
    """Entry permutation realizing adjoint(op_j) o apply(op_i).

    Entry k of the source matrix lands at entry cross[k] of the destination
    matrix, i.e. cross = inv_perm_j o perm_i.
    """
    if op_i.size != op_j.size:
        raise ShapeMismatch(
            f"operators relocate different element counts: {op_i.size} vs {op_j.size}"
        )
    return op_j.inv_perm[op_i.perm]


def dump_perm(op, fileobj):
    """Debug dump: perm as one line of space-separated integers."""
    fileobj.write(" ".join(str(int(p)) for p in op.perm) + "\n")
