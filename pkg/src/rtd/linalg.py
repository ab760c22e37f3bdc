"""Dense factorizations and proximal operators used by the solver.

The SVD itself is delegated to LAPACK (via numpy); everything here is
defined by contract on the factors: reconstruction within 1e-8 relative,
orthonormal columns within 1e-10.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadRank, NonFinite
from .rng import derive_seed, gaussians

# Singular values below RANK_CUTOFF * s_max count as zero for rank decisions.
RANK_CUTOFF = 1e-12


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD: U (m x k), S (k, nonincreasing, >= 0), V (n x k)."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray


def _as_finite_matrix(M):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise NonFinite(f"expected a 2-D matrix, got ndim={M.ndim}")
    if not np.isfinite(M).all():
        raise NonFinite("matrix contains NaN or Inf")
    return M


def svd_full(M):
    """Thin SVD with k = min(m, n) factors."""
    M = _as_finite_matrix(M)
    U, S, Vt = np.linalg.svd(M, full_matrices=False)
    return SvdFactors(U, S, Vt.T)


def svt(M, alpha):
    """Singular-value soft-thresholding: U max(S - alpha, 0) V^T.

    This is the proximal operator of alpha * nuclear norm at M.
    """
    out, _ = svt_with_values(M, alpha)
    return out


def svt_with_values(M, alpha):
    """svt plus the thresholded singular values (their sum is the nuclear
    norm of the result, which the solver logs for free)."""
    M = _as_finite_matrix(M)
    U, S, Vt = np.linalg.svd(M, full_matrices=False)
    shrunk = S - alpha
    keep = shrunk > 0.0
    values = np.where(keep, shrunk, 0.0)
    if not keep.any():
        return np.zeros_like(M), values
    k = int(keep.sum())  # S is nonincreasing, so keep is a prefix
    out = (U[:, :k] * shrunk[:k]) @ Vt[:k, :]
    return out, values


def spectral_norm(M):
    """Largest singular value."""
    M = _as_finite_matrix(M)
    return float(np.linalg.svd(M, compute_uv=False)[0])


def nuclear_norm(M):
    """Sum of singular values."""
    M = _as_finite_matrix(M)
    return float(np.linalg.svd(M, compute_uv=False).sum())


def numerical_rank(S):
    """Number of singular values above the relative cutoff."""
    S = np.asarray(S, dtype=float)
    if S.size == 0 or S[0] <= 0.0:
        return 0
    return int((S > RANK_CUTOFF * S[0]).sum())


def _semi_orthonormal(n, r, seed):
    G = gaussians(n * r, seed).reshape(n, r)
    Q, R = np.linalg.qr(G)
    # Fix the QR sign ambiguity so the result is a pure function of the seed.
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def random_semi_orthonormal_pair(n, r, seed):
    """Two independent n x r matrices with orthonormal columns.

    Their product U V^T has rank r with all nonzero singular values equal
    to one, which is the component model used throughout the experiments.
    """
    if not 1 <= r <= n:
        raise BadRank(f"need 1 <= r <= n, got r={r}, n={n}")
    U = _semi_orthonormal(n, r, derive_seed(seed, 0))
    V = _semi_orthonormal(n, r, derive_seed(seed, 1))
    return U, V
