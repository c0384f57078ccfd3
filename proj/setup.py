"""Builds the _ccwb extension directly from the C++ sources so `pip install`
needs nothing beyond a C++20 compiler, setuptools, and pybind11."""

from pybind11.setup_helpers import ParallelCompile, Pybind11Extension, build_ext
from setuptools import setup

ParallelCompile("NPY_NUM_BUILD_JOBS").install()

ext = Pybind11Extension(
    "ccwb._ccwb",
    sources=[
        "src/rational.cpp",
        "src/parallel.cpp",
        "src/bitmatrix.cpp",
        "src/protocol.cpp",
        "src/structure.cpp",
        "src/zoo.cpp",
        "src/discrepancy.cpp",
        "python/bindings.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
