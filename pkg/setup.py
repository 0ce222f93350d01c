from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/kpzlab/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # package remains usable through the pure-Python kernel fallback
    ext_modules = []

setup(ext_modules=ext_modules)
