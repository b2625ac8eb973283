import json
from typing import Any


class UnsupportedModeError(ValueError):
    """
    Raised when an operation is asked to run in a scalar mode it cannot honor, e.g. an
    exact nullspace of a float matrix, or an exact ζ-basis.
    """

    pass


class MalformedInputError(ValueError):
    """Raised by the JSON readers. The message names the offending term."""

    pass


def dumps_deterministic(obj: Any) -> str:
    """
    All JSON we emit goes through here so that identical arguments always produce
    byte-identical output
    """
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
