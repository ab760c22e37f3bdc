"""Binary netpbm IO: grayscale PGM (P5) and color PPM (P6).

Samples are exposed as float64 in [0, 1]; only maxval 255 and 65535 are
accepted, with 16-bit payloads big-endian per the format. Writing rounds
clamp(x, 0, 1) * maxval to the nearest integer level.
"""

from dataclasses import dataclass

import numpy as np

from .errors import MalformedHeader, UnsupportedMaxval

MAXVALS = (255, 65535)


@dataclass(frozen=True)
class GrayImage:
    pixels: np.ndarray  # (h, w) float64 in [0, 1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def channels(self):
        return 1


@dataclass(frozen=True)
class RgbImage:
    pixels: np.ndarray  # (h, w, 3) float64 in [0, 1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def channels(self):
        return 3


def _read_tokens(data, count):
    """First `count` whitespace-separated header tokens, skipping # comments.

    Returns the tokens and the offset just past the single whitespace byte
    that terminates the last one.
    """
    tokens = []
    pos = 0
    while len(tokens) < count:
        if pos >= len(data):
            raise MalformedHeader("truncated header")
        c = data[pos : pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            end = data.find(b"\n", pos)
            if end < 0:
                raise MalformedHeader("unterminated comment")
            pos = end + 1
        else:
            end = pos
            while end < len(data) and not data[end : end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise MalformedHeader("missing whitespace after maxval")
    return tokens, pos + 1


def _parse_dims(tokens):
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise MalformedHeader(f"non-numeric header fields: {tokens}") from None
    if width < 1 or height < 1:
        raise MalformedHeader(f"bad dimensions {width}x{height}")
    if maxval not in MAXVALS:
        raise UnsupportedMaxval(f"maxval must be one of {MAXVALS}, got {maxval}")
    return width, height, maxval


def read_image(path):
    """Read a P5 file as GrayImage or a P6 file as RgbImage."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise MalformedHeader(f"not a binary PGM/PPM file: magic {magic!r}")
    tokens, offset = _read_tokens(data[2:], 3)
    width, height, maxval = _parse_dims(tokens)
    channels = 1 if magic == b"P5" else 3
    count = width * height * channels
    dtype = np.dtype(">u2") if maxval == 65535 else np.dtype("u1")
    payload = data[2 + offset :]
    if len(payload) != count * dtype.itemsize:
        raise MalformedHeader(
            f"payload is {len(payload)} bytes, expected {count * dtype.itemsize}"
        )
    raw = np.frombuffer(payload, dtype=dtype)
    samples = raw.astype(np.float64) / maxval
    if channels == 1:
        return GrayImage(samples.reshape(height, width))
    return RgbImage(samples.reshape(height, width, 3))


def quantize(samples, maxval):
    """Integer sample levels for float data: round(clamp(x, 0, 1) * maxval)."""
    if maxval not in MAXVALS:
        raise UnsupportedMaxval(f"maxval must be one of {MAXVALS}, got {maxval}")
    levels = np.rint(np.clip(samples, 0.0, 1.0) * maxval)
    return levels.astype(np.dtype(">u2") if maxval == 65535 else np.dtype("u1"))


def write_image(img, path, maxval=255):
    """Write GrayImage as P5 or RgbImage as P6 at the given maxval."""
    magic = b"P5" if isinstance(img, GrayImage) else b"P6"
    body = quantize(img.pixels, maxval).tobytes()
    header = f"{magic.decode()}\n{img.width} {img.height}\n{maxval}\n".encode()
    with open(path, "wb") as fh:
        fh.write(header + body)
