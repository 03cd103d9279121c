"""Binary 8-bit PGM (P5) reading and writing."""

from __future__ import annotations

import os

import numpy as np

from .errors import PGMDepthError, PGMHeaderError, PGMTruncatedError

_WHITESPACE = b" \t\n\r\x0b\x0c"


def _tokens(data: bytes, count: int):
    """Read ``count`` header tokens, skipping comments; return (tokens, payload offset)."""
    tokens = []
    i = 0
    while len(tokens) < count:
        while i < len(data) and data[i] in _WHITESPACE:
            i += 1
        if i < len(data) and data[i] == ord("#"):
            while i < len(data) and data[i] not in b"\r\n":
                i += 1
            continue
        start = i
        while i < len(data) and data[i] not in _WHITESPACE and data[i] != ord("#"):
            i += 1
        if start == i:
            raise PGMHeaderError("header ended early")
        tokens.append(data[start:i])
    # exactly one whitespace byte separates maxval from the raster
    if i >= len(data) or data[i] not in _WHITESPACE:
        if i >= len(data):
            return tokens, i
        raise PGMHeaderError("missing whitespace after maxval")
    return tokens, i + 1


def parse_pgm(data: bytes) -> np.ndarray:
    """Decode P5 bytes into a ``(height, width)`` uint8 array."""
    if not data.startswith(b"P5"):
        raise PGMHeaderError("not a binary PGM (expected magic 'P5')")
    (magic, w, h, maxval), offset = _tokens(data, 4)
    try:
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError:
        raise PGMHeaderError("non-numeric width, height or maxval") from None
    if width <= 0 or height <= 0:
        raise PGMHeaderError(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise PGMDepthError(f"maxval {maxval} unsupported; only 8-bit (255) images are accepted")
    payload = data[offset : offset + width * height]
    if len(payload) < width * height:
        raise PGMTruncatedError(f"expected {width * height} bytes of samples, found {len(payload)}")
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width).copy()


def read_pgm(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as f:
        return parse_pgm(f.read())


def encode_pgm(samples) -> bytes:
    a = np.asarray(samples)
    if a.ndim != 2:
        raise ValueError("PGM samples must be 2-D")
    if a.dtype != np.uint8:
        if a.min() < 0 or a.max() > 255:
            raise ValueError("samples outside [0, 255]")
        a = a.astype(np.uint8)
    height, width = a.shape
    return f"P5\n{width} {height}\n255\n".encode("ascii") + a.tobytes()


def write_pgm(samples, path: str | os.PathLike) -> None:
    with open(path, "wb") as f:
        f.write(encode_pgm(samples))
