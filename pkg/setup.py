import os
import tempfile

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext
from Cython.Build import cythonize


def _compiler_accepts(compiler, flag):
    """Probe whether the C compiler accepts a flag by compiling a stub."""
    with tempfile.TemporaryDirectory() as tmp:
        src = os.path.join(tmp, "probe.c")
        with open(src, "w") as fh:
            fh.write("int main(void) { return 0; }\n")
        try:
            compiler.compile([src], output_dir=tmp, extra_postargs=[flag])
        except Exception:
            return False
    return True


def _can_link_library(compiler, lib):
    with tempfile.TemporaryDirectory() as tmp:
        src = os.path.join(tmp, "probe.c")
        with open(src, "w") as fh:
            fh.write("int main(void) { return 0; }\n")
        try:
            objs = compiler.compile([src], output_dir=tmp)
            compiler.link_executable(objs, os.path.join(tmp, "probe"), libraries=[lib])
        except Exception:
            return False
    return True


class BuildExt(build_ext):
    # -ffast-math lets GCC call the SIMD exp from libmvec inside the filter
    # kernel's inner loop; -march=native widens the vectors where supported.
    # Both are probed so a plain build still succeeds.
    def build_extensions(self):
        extra = ["-O3", "-fopenmp"]
        libs = ["m"]
        if _can_link_library(self.compiler, "mvec"):
            extra.append("-ffast-math")
            libs.append("mvec")
        if _compiler_accepts(self.compiler, "-march=native"):
            extra.append("-march=native")
        for ext in self.extensions:
            ext.extra_compile_args = extra + (ext.extra_compile_args or [])
            ext.libraries = libs + (ext.libraries or [])
        super().build_extensions()


extensions = [
    Extension(
        "mefuse._native",
        sources=["src/mefuse/_native.pyx", "src/mefuse/_native_kernel.c"],
        extra_link_args=["-fopenmp"],
    )
]

setup(
    ext_modules=cythonize(extensions, language_level="3"),
    cmdclass={"build_ext": BuildExt},
)
