from setuptools import setup, Extension

import numpy as np

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-python fallback in entstats._kernels takes over when the
    # extension is absent.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "entstats._kernels._fastpurity",
                ["src/entstats/_kernels/_fastpurity.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
