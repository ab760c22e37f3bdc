import numpy as np

from rtd.rng import derive_seed, gaussians


def low_rank_image(h, w, rank, seed, peak=0.8):
    """Nonnegative rank-`rank` test image with values in [0, peak]."""
    F = np.abs(gaussians(h * rank, derive_seed(seed, 0)).reshape(h, rank))
    G = np.abs(gaussians(w * rank, derive_seed(seed, 1)).reshape(w, rank))
    M = F @ G.T
    return M * (peak / M.max())
