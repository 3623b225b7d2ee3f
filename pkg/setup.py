from Cython.Build import cythonize
from setuptools import Extension, setup

ext = Extension(
    "cwlocate.engine._ckernel",
    ["src/cwlocate/engine/_ckernel.pyx"],
    libraries=["gmp"],
    extra_compile_args=["-O3"],
)

setup(ext_modules=cythonize([ext], compiler_directives={"language_level": "3"}))
