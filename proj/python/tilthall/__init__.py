"""Python front end for the tilthall verification suites."""

import json
import os

from ._tilthall import TilthallError, __version__, algebra_info, run_json, suite_names

__all__ = ["TilthallError", "__version__", "algebra_info", "run", "suite_names"]


def run(algebras, tilting=None, suite="all", dim_bound=4, syzygy_bound=24, seed=0x5EED, cache_dir=None):
    """Run a suite and return the report document as a dict."""
    if isinstance(algebras, (str, os.PathLike)):
        algebras = [algebras]
    doc = run_json(
        [os.fspath(a) for a in algebras],
        os.fspath(tilting) if tilting else "",
        suite,
        dim_bound,
        syzygy_bound,
        seed,
        os.fspath(cache_dir) if cache_dir else "",
    )
    return json.loads(doc)
