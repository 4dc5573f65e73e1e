"""Build script for the optional compiled kernels.

The package works without the extension: ``pulseguard._kernels`` falls back
to a vectorized numpy implementation when the Cython module is absent or
fails to import. Building in place:

    pip install -e . --no-build-isolation
"""

import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "pulseguard._kernels._ckernels",
        ["src/pulseguard/_kernels/_ckernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
)
