# Copyright (c) 2024.
"""Reading and writing pure states as JSON state files.

Format: {"dims": [...], "amps": [[re, im], ...], "normalized": bool}, amplitudes
ordered with the last site index fastest.
"""

import logging
from pathlib import Path

import numpy as np
import orjson

from common.Errors import StateFileError
from common.QState import PureState, make_pure

logger = logging.getLogger(__name__)


def dump_state(psi: PureState) -> bytes:
    """Serialize a state; floats use the shortest round-trip representation."""
    payload = {
        "dims": list(psi.dims),
        "amps": [[float(z.real), float(z.imag)] for z in psi.amps],
        "normalized": psi.normalized,
    }
    return orjson.dumps(payload)


def load_state(data: bytes | str) -> PureState:
    """Parse a serialized state

    Raises:
        StateFileError: If the payload is malformed

    Returns:
        The state, left unnormalized when the file says so

    """
    try:
        payload = orjson.loads(data)
        dims = [int(d) for d in payload["dims"]]
        amps = np.array(
            [complex(float(real), float(imag)) for real, imag in payload["amps"]],
            dtype=np.complex128,
        )
        normalized = bool(payload.get("normalized", True))
    except (orjson.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise StateFileError(f"Malformed state file: {e}") from e
    return make_pure(dims, amps, allow_unnormalized=not normalized)


def write_state(psi: PureState, path: str | Path) -> None:
    """Write a state file."""
    _ = Path(path).write_bytes(dump_state(psi))
    logger.info(f"Wrote {psi.dims} state to {path}")


def read_state(path: str | Path) -> PureState:
    """Read a state file

    Raises:
        StateFileError: If the file cannot be read or parsed

    """
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise StateFileError(f"Cannot read state file {path}: {e}") from e
    return load_state(data)
