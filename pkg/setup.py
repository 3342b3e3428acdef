"""Build script.

The only compiled piece is the optional row-reduction kernel in
twkit/exactla/_speedups.pyx.  Everything works without it (the pure
fallback is selected at import), so a missing compiler or Cython must
not fail the install.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:
            sys.stderr.write("warning: compiled kernel skipped (%s)\n" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            sys.stderr.write("warning: %s skipped (%s)\n" % (ext.name, exc))


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "twkit.exactla._speedups",
                ["src/twkit/exactla/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
