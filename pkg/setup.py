import os

from setuptools import setup

ext_modules = []
if os.environ.get("USURYCAP_NO_EXT", "") in ("", "0"):
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            "src/usurycap/_ckernels.pyx",
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
        for ext in ext_modules:
            ext.include_dirs.append(numpy.get_include())

setup(ext_modules=ext_modules)
