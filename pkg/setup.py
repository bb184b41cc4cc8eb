import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("TRAJADV_NO_EXT"):
    from Cython.Build import cythonize
    import numpy

    ext_modules = cythonize(
        [
            Extension(
                "trajadv._core",
                ["src/trajadv/_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
