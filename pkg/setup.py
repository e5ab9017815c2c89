import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # fallback kernels only
    cythonize = None

ext_modules = []
if cythonize is not None and os.environ.get("KRONHALTON_NO_EXT") != "1":
    ext_modules = cythonize(
        [
            Extension(
                "kronhalton._kernels._ckernels",
                ["src/kronhalton/_kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
