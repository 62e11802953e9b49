from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension("starsel._ckernels", ["src/starsel/_ckernels.pyx"], language="c++",
              extra_compile_args=["-O3"]),
]

setup(
    ext_modules=cythonize(extensions, language_level=3, quiet=True),
)
