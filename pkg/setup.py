"""Build script: compiles the optional geometry kernel extension.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time); set SQPACK_NO_EXT=1 to skip the
build, or run `python setup.py build_ext --inplace` to compile in place.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SQPACK_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("sqpack._kernels", ["src/sqpack/_kernels.pyx"])],
            language_level="3",
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
