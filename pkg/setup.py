from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "veltman._kernel",
                sources=["src/veltman/_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    # No Cython: install without the compiled kernel, the pure-Python
    # fallback in veltman._kernel_py is selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
