"""Select the compiled Sturm kernel, or the numpy fallback.

Set BSQ_PURE_PYTHON=1 to force the fallback.
"""

import os

BACKEND = "python"
if not os.environ.get("BSQ_PURE_PYTHON"):
    try:
        from ._sturm import bisect_eigenvalues, sturm_count  # noqa: F401
        BACKEND = "cython"
    except ImportError:
        pass
if BACKEND == "python":
    from ._sturm_py import bisect_eigenvalues, sturm_count  # noqa: F401
