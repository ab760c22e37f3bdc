"""Pure-NumPy implementations of the solver's hot array passes.

Kept expression-for-expression identical to the compiled kernels so both
backends produce bit-identical iterates.
"""

import numpy as np

BACKEND = "python"


def pullback_residual(x, s, y, inv_kappa, perm, a, out):
    """out[k] = (x[p] - s[p]) + y[p]*inv_kappa + a[k] with p = perm[k]."""
    d = (x - s) + y * inv_kappa
    np.add(d[perm], a, out=out)


def scatter_add_delta(s, perm, a_new, a_old):
    """s[perm[k]] += a_new[k] - a_old[k]."""
    s[perm] += a_new - a_old


def scatter_add(s, perm, a):
    """s[perm[k]] += a[k]."""
    s[perm] += a
