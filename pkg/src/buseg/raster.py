"""Grid types and bit-exact file I/O for masks, probability maps and results.

All grids are 2-D numpy arrays in row-major order with shape
``(height, width)``. Binary masks are ``uint8`` with values in {0, 1};
probability maps, grey images and distance maps are ``float64``. The
constructor functions validate their input and hand back *read-only*
arrays; every operation in this package treats its inputs as immutable
and returns fresh read-only arrays, so values can be shared freely
across threads.

Two file containers are supported, both picked for being header+raw and
therefore byte-exactly reproducible without third-party codecs:

* binary PGM (magic ``P5``, maxval 255) for masks, and
* grayscale PFM (magic ``Pf``, scale ``-1.0`` i.e. little-endian 32-bit
  floats, rows stored bottom-to-top) for float maps.

Header comments (``#`` lines) are rejected rather than skipped so that
the canonical encoding of any grid is unique. Internal computation is
64-bit; PFM storage truncates to 32-bit.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "FormatError",
    "BadMagic",
    "BadHeader",
    "NotBinary",
    "OutOfRange",
    "binary_mask",
    "prob_map",
    "gray_image",
    "distance_map",
    "mask_to_prob",
    "read_mask_pgm",
    "write_mask_pgm",
    "read_pfm",
    "write_pfm",
    "format_csv",
]


class FormatError(ValueError):
    """Malformed or unsupported image file."""


class BadMagic(FormatError):
    """The file does not start with the expected magic bytes."""


class BadHeader(FormatError):
    """Header is malformed: bad dimensions, bad maxval/scale, comments,
    or a payload whose length does not match the header."""


class NotBinary(FormatError):
    """A PGM sample is neither 0 nor 255."""


class OutOfRange(FormatError):
    """A PFM sample lies outside [0, 1] beyond tolerance, or is not finite."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def binary_mask(data) -> np.ndarray:
    """Validate and return a read-only uint8 mask with values in {0, 1}."""
    arr = np.asarray(data)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError("mask must be a non-empty 2-D grid")
    if not ((arr == 0) | (arr == 1)).all():
        raise ValueError("mask values must be exactly 0 or 1")
    return _frozen(arr.astype(np.uint8))


def prob_map(data) -> np.ndarray:
    """Validate and return a read-only float64 map with values in [0, 1]."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError("probability map must be a non-empty 2-D grid")
    if not np.isfinite(arr).all():
        raise ValueError("probability map values must be finite")
    if (arr < 0.0).any() or (arr > 1.0).any():
        raise ValueError("probability map values must lie in [0, 1]")
    return _frozen(arr.copy())


def gray_image(data) -> np.ndarray:
    """Validate and return a read-only float64 intensity image in [0, 1]."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError("image must be a non-empty 2-D grid")
    if not np.isfinite(arr).all():
        raise ValueError("image intensities must be finite")
    if (arr < 0.0).any() or (arr > 1.0).any():
        raise ValueError("image intensities must lie in [0, 1]")
    return _frozen(arr.copy())


def distance_map(data, signed: bool = False) -> np.ndarray:
    """Validate and return a read-only float64 distance map.

    Unsigned maps must be non-negative; signed maps may carry any sign.
    All values must be finite.
    """
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError("distance map must be a non-empty 2-D grid")
    if not np.isfinite(arr).all():
        raise ValueError("distance map values must be finite")
    if not signed and (arr < 0.0).any():
        raise ValueError("unsigned distance map values must be >= 0")
    return _frozen(arr.copy())


def mask_to_prob(mask) -> np.ndarray:
    """Cast a binary mask to a probability map (0 -> 0.0, 1 -> 1.0)."""
    m = np.asarray(mask)
    return _frozen(m.astype(np.float64))


_WS = b" \t\n\r\x0b\x0c"


def _parse_header(data: bytes, magic: bytes):
    """Parse ``<magic> tok tok tok`` and return (tokens, payload offset).

    Tokens are separated by whitespace runs; exactly one whitespace byte
    separates the last token from the payload. ``#`` anywhere in a token
    position is treated as a comment and rejected.
    """
    if data[:2] != magic:
        raise BadMagic(f"expected magic {magic.decode()!r}")
    pos = 2
    n = len(data)
    tokens = []
    for _ in range(3):
        start = pos
        while pos < n and data[pos] in _WS:
            pos += 1
        if pos == start:
            raise BadHeader("missing whitespace separator in header")
        t0 = pos
        while pos < n and data[pos] not in _WS:
            pos += 1
        tok = data[t0:pos]
        if not tok:
            raise BadHeader("truncated header")
        if tok.startswith(b"#"):
            raise BadHeader("header comments are not supported")
        tokens.append(tok)
    if pos >= n or data[pos] not in _WS:
        raise BadHeader("missing separator before payload")
    return tokens, pos + 1


def _parse_dims(wtok: bytes, htok: bytes):
    if not (wtok.isdigit() and htok.isdigit()):
        raise BadHeader("dimensions must be decimal integers")
    w, h = int(wtok), int(htok)
    if w <= 0 or h <= 0:
        raise BadHeader("dimensions must be positive")
    return w, h


def read_mask_pgm(data: bytes) -> np.ndarray:
    """Decode a binary PGM (P5, maxval 255) into a mask.

    Sample 0 maps to label 0 and sample 255 to label 1; any other sample
    raises :class:`NotBinary`.
    """
    tokens, off = _parse_header(bytes(data), b"P5")
    w, h = _parse_dims(tokens[0], tokens[1])
    if tokens[2] != b"255":
        raise BadHeader("maxval must be 255")
    payload = data[off:]
    if len(payload) != w * h:
        raise BadHeader(f"payload length {len(payload)} != {w}*{h}")
    samples = np.frombuffer(payload, dtype=np.uint8).reshape(h, w)
    if not ((samples == 0) | (samples == 255)).all():
        raise NotBinary("PGM sample outside {0, 255}")
    return _frozen((samples == 255).astype(np.uint8))


def write_mask_pgm(mask) -> bytes:
    """Encode a mask as canonical binary PGM: ``P5\\n<w> <h>\\n255\\n`` + raw."""
    m = binary_mask(mask)
    h, w = m.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    return header + (m * np.uint8(255)).tobytes()


def read_pfm(data: bytes) -> np.ndarray:
    """Decode a grayscale PFM (Pf, scale -1.0) into a float map in [0, 1].

    Rows are stored bottom-to-top per the PFM convention. Values outside
    [-1e-9, 1+1e-9] (or non-finite) raise :class:`OutOfRange`; values
    inside the tolerance band are clamped to [0, 1].
    """
    tokens, off = _parse_header(bytes(data), b"Pf")
    w, h = _parse_dims(tokens[0], tokens[1])
    if tokens[2] != b"-1.0":
        raise BadHeader("scale must be -1.0 (little-endian)")
    payload = data[off:]
    if len(payload) != 4 * w * h:
        raise BadHeader(f"payload length {len(payload)} != 4*{w}*{h}")
    vals = np.frombuffer(payload, dtype="<f4").astype(np.float64).reshape(h, w)
    vals = np.ascontiguousarray(vals[::-1])
    if not np.isfinite(vals).all():
        raise OutOfRange("non-finite PFM sample")
    if (vals < -1e-9).any() or (vals > 1.0 + 1e-9).any():
        raise OutOfRange("PFM sample outside [0, 1] tolerance band")
    return _frozen(np.clip(vals, 0.0, 1.0))


def write_pfm(values) -> bytes:
    """Encode a float map as canonical grayscale PFM (32-bit little-endian).

    The canonical header is ``Pf\\n<w> <h>\\n-1.0\\n``; rows are written
    bottom-to-top. float64 input is truncated to float32.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError("PFM payload must be a non-empty 2-D grid")
    if (arr < 0.0).any() or (arr > 1.0).any() or not np.isfinite(arr).all():
        raise ValueError("PFM values must lie in [0, 1]")
    h, w = arr.shape
    header = f"Pf\n{w} {h}\n-1.0\n".encode("ascii")
    return header + arr[::-1].astype("<f4").tobytes()


def format_csv(header, rows) -> str:
    """Render CSV text with a header row, "\\n" line endings and "." decimals."""
    lines = [",".join(str(c) for c in header)]
    for row in rows:
        lines.append(",".join(str(c) for c in row))
    return "\n".join(lines) + "\n"
