import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

eigen = next(
    (d for d in ("/usr/include/eigen3", "/usr/local/include/eigen3") if os.path.isdir(d)),
    os.environ.get("EIGEN3_INCLUDE_DIR", "/usr/include/eigen3"),
)

sources = sorted(
    os.path.join("src", f) for f in os.listdir("src") if f.endswith(".cpp")
) + ["python/bindings.cpp"]

setup(
    ext_modules=[
        Pybind11Extension(
            "dcmsim._dcm",
            sources,
            include_dirs=["include", eigen],
            cxx_std=20,
        )
    ],
    cmdclass={"build_ext": build_ext},
)
