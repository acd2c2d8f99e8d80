"""Build the optional compiled search core.

Without Cython (or a C compiler) the package installs as pure Python and the
kernels fall back to ``icleak._kernels._pure``.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("ICLEAK_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("icleak._kernels._ccore",
                       ["src/icleak/_kernels/_ccore.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
