"""Binary IQ stream files.

Layout: 8-byte magic, uint32 antenna count B, uint32 sample count, then little-endian
float32 (re, im) pairs, antenna-major within each sample.
"""
import struct
from os import PathLike
from typing import Union

import numpy as np


MAGIC = b"JASSIQ01"
HEADER = struct.Struct("<8sII")
SAMPLE_DTYPE = np.dtype("<c8")


class IQFormatError(ValueError):
    pass


def write_iq(path: Union[str, "PathLike[str]"], stream: np.ndarray) -> None:
    stream = np.asarray(stream)
    if stream.ndim != 2:
        raise IQFormatError(f"IQ stream must be samples x antennas, got shape {stream.shape}")
    count, B = stream.shape
    with open(path, "wb") as f:
        f.write(HEADER.pack(MAGIC, B, count))
        f.write(stream.astype(SAMPLE_DTYPE).tobytes())


def read_iq(path: Union[str, "PathLike[str]"]) -> np.ndarray:
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < HEADER.size:
        raise IQFormatError(f"{path}: truncated header")
    magic, B, count = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise IQFormatError(f"{path}: bad magic {magic!r}")
    payload = data[HEADER.size :]
    expected = B * count * SAMPLE_DTYPE.itemsize
    if len(payload) != expected:
        raise IQFormatError(f"{path}: payload has {len(payload)} bytes, header announces {expected}")
    return np.frombuffer(payload, dtype=SAMPLE_DTYPE).astype(np.complex128).reshape(count, B)
