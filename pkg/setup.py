"""Build script: compiles the Cython stepping kernel when possible.

The package is fully functional without the extension (a pure-Python twin
of the kernel is selected at import time), so any build failure here only
costs speed. Set ENTROKIN_PURE_PYTHON=1 to skip the extension on purpose.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ENTROKIN_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "entrokin._kernel",
                    ["src/entrokin/_kernel.pyx"],
                    # -ffp-contract=off keeps the compiled arithmetic
                    # bit-identical to the pure-Python twin (no FMA).
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
