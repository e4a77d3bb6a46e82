"""Build script.

The compiled minimax kernel is optional: if Cython or a C compiler is
unavailable the package installs pure-Python only and selects the
fallback kernel at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "cotverify.kernels._fast",
                ["src/cotverify/kernels/_fast.pyx"],
                language="c++",
            )
        ],
        language_level=3,
    )
except Exception:
    pass

setup(ext_modules=ext_modules)
