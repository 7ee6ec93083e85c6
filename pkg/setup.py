"""Build script: compiles the memory-kernel solver extension when a C
toolchain is available; the package falls back to the pure-Python kernel
otherwise."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("squeeze_dyn._volterra_c", ["src/squeeze_dyn/_volterra_c.pyx"])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
