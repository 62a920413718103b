import os

from setuptools import setup

ext_modules = []
if os.environ.get("QMORRIS_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "qmorris._speedups",
                    sources=["src/qmorris/_speedups.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # no Cython: the pure-Python backend is used instead
        ext_modules = []

setup(ext_modules=ext_modules)
