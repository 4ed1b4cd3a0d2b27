"""Build script: compiles the optional Gillespie speedup extension.

The extension is a pure optimization; if Cython or a C compiler is
unavailable the install proceeds with the numpy fallback lane.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "bdk._speedups",
                ["src/bdk/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover
    sys.stderr.write(f"bdk: building without compiled speedups ({exc})\n")

setup(ext_modules=ext_modules)
