"""Little-endian helpers for the model containers."""

import struct

import numpy as np

from .errors import ParseError, TruncatedError


class Reader:
    def __init__(self, data, pos=0):
        self.data = bytes(data)
        self.pos = pos

    def take(self, n):
        if self.pos + n > len(self.data):
            raise TruncatedError(f"model data ends at byte {len(self.data)}, needed {self.pos + n}")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def magic(self, expected):
        start = self.pos
        got = self.take(len(expected))
        if got != expected:
            raise ParseError(f"expected magic {expected!r}, got {got!r}", start)

    def u32(self, count=None):
        n = 1 if count is None else count
        values = struct.unpack(f"<{n}I", self.take(4 * n))
        return values[0] if count is None else list(values)

    def f64(self, count):
        return np.frombuffer(self.take(8 * count), dtype="<f8").astype(np.float64)

    def text(self):
        return self.take(self.u32()).decode("utf-8")


def u32(*values):
    return struct.pack(f"<{len(values)}I", *values)


def f64(array):
    return np.ascontiguousarray(array, dtype="<f8").tobytes()


def text(s):
    raw = str(s).encode("utf-8")
    return u32(len(raw)) + raw
