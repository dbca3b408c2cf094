"""Build script: compiles the optional fast polynomial kernel.

The extension is a pure optimization.  If Cython or a C compiler is
missing the build falls back to a pure-python install; the package
selects the pure kernel at import time (see keller_lab._kernels).
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible, otherwise install without it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or Cython missing
            print(f"warning: skipping fast kernel build ({exc}); "
                  f"pure-python kernel will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  f"pure-python kernel will be used")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        ["src/keller_lab/_fastpoly.pyx"],
        compiler_directives={"language_level": "3", "boundscheck": False},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
