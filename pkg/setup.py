"""Build the compiled Sturm kernel when Cython is available.

Without Cython (or a compiler) the package installs pure Python and the
oracle falls back to its numpy kernel.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("BSQ_PURE_PYTHON"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("bsq.oracle._sturm", ["src/bsq/oracle/_sturm.pyx"],
                       include_dirs=[np.get_include()],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
