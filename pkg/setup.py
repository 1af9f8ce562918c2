"""Build script: compiles the optional fast search kernel.

The package works without the extension (a pure-Python kernel with identical
behaviour is selected at import time), so compilation failures are tolerated.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("boolnet._solver_cy", ["src/boolnet/_solver_cy.pyx"])],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"boolnet: skipping compiled kernel ({exc}); pure-Python fallback will be used")

setup(ext_modules=ext_modules)
