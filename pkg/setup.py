import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SBTOEPLITZ_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("sbtoeplitz._ckernels", ["src/sbtoeplitz/_ckernels.pyx"],
                       include_dirs=[np.get_include()],
                       extra_compile_args=["-O3"])],
            language_level=3,
        )
    except ImportError:
        # pure-Python install; kernels fall back to numpy
        ext_modules = []

setup(ext_modules=ext_modules)
