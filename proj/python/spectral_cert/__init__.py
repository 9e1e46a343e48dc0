"""Python front end for the spectral certification library."""

import json

from ._spectral import (  # noqa: F401
    Interval,
    __version__,
    essential_spectrum,
    exp,
    gershgorin_disks,
    newton,
    parse_interval,
    sqrt,
)
from ._spectral import run as _run


def run(config_path):
    """Run a configuration file. Returns (exit_code, document as dict)."""
    code, doc = _run(str(config_path))
    return code, json.loads(doc)
