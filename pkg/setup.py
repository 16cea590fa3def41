"""Builds the optional compiled kernel.

If Cython or a C compiler is unavailable the package installs without it
and falls back to the pure-Python kernel.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("KOSZUL_PURE", "") not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("koszul._ckernel", ["src/koszul/_ckernel.pyx"], extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except Exception as exc:  # pragma: no cover - depends on the build host
        print(f"warning: building without the compiled kernel ({exc})")
        ext_modules = []

setup(ext_modules=ext_modules)
