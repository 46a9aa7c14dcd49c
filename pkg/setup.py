"""Builds the optional compiled hash kernel.

The package works without it (a pure-Python fallback is selected at import
time), so a failed extension build must not fail the install.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/tracelight/_kernels/_native.pyx"],
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.optional = True
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
