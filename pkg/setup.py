"""Build script for the optional compiled match-loop kernel.

The package works without the extension (a pure-Python kernel is selected
at import time); building it makes long micro runs ~50x faster.  Set
TEAMELO_SKIP_CYTHON=1 to install without compiling.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("TEAMELO_SKIP_CYTHON"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "teamelo._kernels._match_loop_cy",
                ["src/teamelo/_kernels/_match_loop_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
