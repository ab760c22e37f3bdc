# cython: boundscheck=False, wraparound=False, cdivision=True
"""Fused gather/scatter passes for the solver's inner loop.

Each function makes a single pass over its arrays where the NumPy fallback
needs several, but evaluates the same per-element expression tree so both
backends agree bit-for-bit.  Compiled without -ffast-math on purpose.
"""

BACKEND = "cython"


def pullback_residual(const double[::1] x, const double[::1] s,
                      const double[::1] y, double inv_kappa,
                      const Py_ssize_t[::1] perm, const double[::1] a,
                      double[::1] out):
    """out[k] = (x[p] - s[p]) + y[p]*inv_kappa + a[k] with p = perm[k]."""
    cdef Py_ssize_t k, p
    for k in range(perm.shape[0]):
        p = perm[k]
        out[k] = ((x[p] - s[p]) + y[p] * inv_kappa) + a[k]


def scatter_add_delta(double[::1] s, const Py_ssize_t[::1] perm,
                      const double[::1] a_new, const double[::1] a_old):
    """s[perm[k]] += a_new[k] - a_old[k]."""
    cdef Py_ssize_t k
    for k in range(perm.shape[0]):
        s[perm[k]] = s[perm[k]] + (a_new[k] - a_old[k])


def scatter_add(double[::1] s, const Py_ssize_t[::1] perm,
                const double[::1] a):
    """s[perm[k]] += a[k]."""
    cdef Py_ssize_t k
    for k in range(perm.shape[0]):
        s[perm[k]] = s[perm[k]] + a[k]
