import os

import numpy as np
from setuptools import Extension, setup

if os.environ.get("BUFFONLAB_SKIP_EXT"):
    # Pure-python install; the package falls back to the numpy kernels at import.
    setup()
else:
    from Cython.Build import cythonize

    ext = Extension(
        "buffonlab._kernels",
        ["src/buffonlab/_kernels.pyx"],
        include_dirs=[np.get_include()],
        # No -ffast-math: the compiled kernels must produce bit-identical IEEE
        # results to the numpy fallback.
        extra_compile_args=["-O3"],
    )
    setup(ext_modules=cythonize([ext], compiler_directives={"language_level": "3"}))
