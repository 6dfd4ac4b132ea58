"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python implementation of
the same kernels is selected at import time), so a missing Cython or a
failing compiler is not fatal to the install.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "secacc.crypto._kernels",
                ["src/secacc/crypto/_kernels.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
