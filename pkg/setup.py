"""Build script: compiles the optional Cython kernel.

The package works without the extension (pure-Python kernels are selected
at import time), so a missing compiler or Cython only costs speed.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.path.exists("src/conewalk/_ckern.pyx"):
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "conewalk._ckern",
                    ["src/conewalk/_ckern.pyx"],
                    include_dirs=[numpy.get_include()],
                    # -ffp-contract=off: no FMA contraction, so the compiled
                    # kernels are bit-identical to the pure-Python ones.
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "cdivision": True,
                "initializedcheck": False,
            },
        )

setup(ext_modules=ext_modules)
