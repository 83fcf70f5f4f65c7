"""Build script.

Compiles the optional accelerator extension (amalgam._kernel) when Cython and
a C toolchain are available.  The package works without it: amalgam.kernels
falls back to the pure NumPy implementation at import time, so a failed
extension build must never fail the install.
"""

import os
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that degrades to a warning instead of aborting the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing entirely
            warnings.warn(f"skipping accelerator extension: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping accelerator extension {ext.name}: {exc}")


def extension_modules():
    if os.environ.get("AMALGAM_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "amalgam._kernel",
        sources=["src/amalgam/_kernel.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=extension_modules(), cmdclass={"build_ext": OptionalBuildExt})
