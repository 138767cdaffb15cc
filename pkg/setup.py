import os

import numpy
from setuptools import Extension, setup

try:
    if not os.path.exists("src/lgfem/_walk.pyx"):
        raise ImportError
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "lgfem._walk",
                ["src/lgfem/_walk.pyx"],
                include_dirs=[numpy.get_include()],
                # contraction off: the compiled walk must match the numpy
                # fallback bit for bit, and FMA would change the barycentric
                # arithmetic
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # pure-Python fallback in lgfem.kernels covers the missing extension
    ext_modules = []

setup(ext_modules=ext_modules)
