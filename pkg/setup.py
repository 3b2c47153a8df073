"""Build script: compiles the optional fast kernel extension.

The package works without the extension (a pure-Python twin is selected at
import time), so any failure here degrades to a warning instead of aborting
the install.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: compiled kernels skipped ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: {ext.name} skipped ({exc})", file=sys.stderr)


ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("ellq._kernels_c", ["src/ellq/_kernels_c.pyx"],
                   extra_compile_args=["-O3"])],
        language_level=3,
    )
except Exception as exc:
    print(f"warning: Cython unavailable, pure-Python kernels only ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
