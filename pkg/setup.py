"""Build script: compiles the optional F_p scanning kernel.

The package works without the extension (a numpy fallback is selected at
import time), so any compilation failure downgrades to a pure build instead
of aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "doublemirror._speedups",
                ["src/doublemirror/_speedups.pyx"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except Exception as exc:  # pragma: no cover - exercised only on broken toolchains
    sys.stderr.write(f"warning: building without compiled kernels ({exc})\n")
    ext_modules = []

setup(ext_modules=ext_modules)
