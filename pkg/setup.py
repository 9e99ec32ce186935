"""Builds the optional compiled table kernel.

The package is pure Python apart from evinet._speedups, which accelerates
transfer-table construction. If Cython (or a C compiler) is unavailable the
extension is skipped and the pure-Python kernel is used at runtime.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("evinet._speedups", ["src/evinet/_speedups.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
