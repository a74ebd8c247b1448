import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SLIDECODEC_PURE"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/slidecodec/_speedups.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython: install with the pure-Python kernels only.
        ext_modules = []

setup(ext_modules=ext_modules)
