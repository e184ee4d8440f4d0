"""Build script: compiles the optional Monte Carlo kernel.

The extension is marked optional; if no C compiler (or Cython) is available
the install still succeeds and the package falls back to the pure-numpy
engine at import time.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext = Extension(
        "csocdma._mccore",
        ["src/csocdma/_mccore.pyx"],
        extra_compile_args=["-O3"],
    )
    ext.optional = True
    ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})

setup(ext_modules=ext_modules)
