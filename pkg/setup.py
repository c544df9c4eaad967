import numpy as np
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the native kernels if a compiler is around, else rely on the
    pure-Python fallback selected at import time."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: native kernels skipped ({exc}); pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not compile {ext.name} ({exc}); pure-Python fallback will be used")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "eqdecomp._kernels._native",
                ["src/eqdecomp/_kernels/_native.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
