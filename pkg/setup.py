"""Build script: compiles the optional decoder extension.

The package works without the extension (a pure-Python decoder backend is
selected at import time), so a failed compile only costs speed.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("BOXLABELS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "boxlabels._ckernels",
                    ["src/boxlabels/_ckernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
