from setuptools import Extension, setup

# The compiled kernel is optional: rmgibbs._backend falls back to the pure
# Python implementation when the extension is missing.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("rmgibbs._kernels", ["src/rmgibbs/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
