import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; stabexp.kernels falls back
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("STABEXP_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "stabexp._sweep",
                ["src/stabexp/_sweep.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
