import os

from setuptools import setup

# The compiled kernels are optional: without Cython (or a compiler) the
# package still installs and falls back to vanet_magent._kernels_py.
ext_modules = []
if not os.environ.get("VANET_MAGENT_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("vanet_magent._kernels", ["src/vanet_magent/_kernels.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
