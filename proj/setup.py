from glob import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

core_sources = sorted(
    s for s in glob("src/*.cpp") if not s.endswith("pybind_module.cpp")
)

ext = Pybind11Extension(
    "holokit._core",
    core_sources + ["src/pybind_module.cpp"],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
