"""Build script for the optional compiled sampling kernel.

The package works without the extension (a numpy fallback is selected at
import time); building it makes the Monte-Carlo sampling loop roughly an
order of magnitude faster.  Set NETGOF_SKIP_EXT=1 to skip compilation.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("NETGOF_SKIP_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "netgof._kernel._sampler",
                ["src/netgof/_kernel/_sampler.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
