"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so any build failure here downgrades to a pure
Python install instead of aborting.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "mixed_spectra._kernels.cy_kernels",
                ["src/mixed_spectra/_kernels/cy_kernels.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - depends on build host
    print(f"cython unavailable ({exc}); installing with NumPy kernels only")

setup(ext_modules=ext_modules)
