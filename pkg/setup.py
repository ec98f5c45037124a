"""Build script for the optional compiled kernels.

The package works without the extension: :mod:`abeljacobi.kernels` falls
back to the numpy implementation when ``_kernels`` cannot be imported.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ABELJACOBI_NO_EXT", "") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension(
                "abeljacobi._kernels",
                ["src/abeljacobi/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )],
            language_level=3,
        )

setup(ext_modules=ext_modules)
