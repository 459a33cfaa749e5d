"""Builds the optional Cython kernel.

The package works without the extension (a numpy fallback is selected at
import time), so compilation failures are demoted to a warning.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "lgtwave._kernels",
                sources=["src/lgtwave/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffp-contract=off keeps results bit-identical to the numpy
                # fallback, so the import-time backend choice is unobservable
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    warnings.warn(f"building without compiled kernels: {exc}")

setup(ext_modules=ext_modules)
