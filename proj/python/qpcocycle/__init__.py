"""Python bindings for the qpc library."""

from ._core import *  # noqa: F401,F403
from ._core import QpcError, LaurentScalar, LaurentMatrixFunction, ModelConfig

__version__ = "0.1.0"


def error_kind(err):
    """Kind string of a QpcError, e.g. 'parse' or 'transversality_violation'."""
    return err.args[0] if err.args else None
