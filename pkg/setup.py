import os

import numpy as np
from setuptools import Extension, setup

# The compiled kernels are optional: without Cython (or with FCPC_NO_EXT=1)
# the package installs pure-Python and fcpc.kernels falls back automatically.
ext_modules = []
if not os.environ.get("FCPC_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "fcpc._kernels",
                    ["src/fcpc/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
