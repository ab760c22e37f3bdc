"""Builds the optional compiled kernel extension.

The package works without it (a NumPy fallback is selected at import time);
build with Cython present to get the fused gather/scatter kernels:

    pip install -e . --no-build-isolation
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "rtd._kernels",
                sources=["src/rtd/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
