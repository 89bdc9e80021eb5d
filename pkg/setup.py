import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # the pure-Python kernel is used instead
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("EQUITOR_NO_EXT"):
    ext_modules = cythonize(
        [Extension("equitor._core", ["src/equitor/_core.pyx"], extra_compile_args=["-O2"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
