"""Finite-volume solver for coupled nonlocal conservation laws."""

import os

# In an installed wheel the extension sits next to this file. For in-tree
# use the build directory can be named via NLFV_MODULE_DIR; adding it to the
# package search path makes ``nlfv._core`` importable from there as well.
_module_dir = os.environ.get("NLFV_MODULE_DIR")
if _module_dir:
    __path__.append(_module_dir)
del _module_dir, os

from nlfv._core import (
    Error,
    builtin_models,
    convergence_study,
    entropy_scan,
    preset_text,
    run1d,
    run2d,
    sigma_eval,
)

__all__ = [
    "Error",
    "builtin_models",
    "convergence_study",
    "entropy_scan",
    "preset_text",
    "run1d",
    "run2d",
    "sigma_eval",
]

__version__ = "0.1.0"
