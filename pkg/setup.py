"""Build script for the compiled kernel extension.

The package works without the extension (a pure-Python mirror is selected at
import time), so a missing compiler or Cython only costs speed, not a failed
install.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext = Extension(
        "driveshield._kernels._core",
        ["src/driveshield/_kernels/_core.pyx"],
        # the compiled kernels must match the pure-Python mirror bit for
        # bit; fused multiply-adds and the sin+cos -> sincos() rewrite both
        # drift one ulp from CPython's separate libm calls, so force plain
        # IEEE evaluation and keep the trig calls unfused
        extra_compile_args=["-ffp-contract=off", "-fno-builtin-sin",
                            "-fno-builtin-cos", "-fno-builtin-sincos"],
    )
    ext_modules = cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    print("warning: Cython unavailable, building without the compiled kernels")

setup(ext_modules=ext_modules)
