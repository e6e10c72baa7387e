"""File formats: PGM images, sinogram files, reports and cycle traces.

Sinogram text layout::

    DPRT v1 N=<N> B=<B>
    R(0,0),R(0,1),...,R(0,N-1)
    ...                                  (N+1 rows in total)

The binary variant uses the header ``DPRT v1 N=<N> B=<B> binary W=<W>``
followed by the (N+1)*N values as ``W``-byte little-endian unsigned
integers, row-major, with ``W = ceil((B + ceil(log2 N)) / 8)``.
"""

import json
import re

import numpy as np

from .core import Image, RadonArray, output_width
from .sim.components import format_trace

__all__ = [
    "FormatError",
    "read_pgm",
    "write_pgm",
    "read_sinogram",
    "write_sinogram",
    "dump_report",
    "write_report",
    "read_report",
    "write_trace",
]


class FormatError(ValueError):
    """A file does not follow its declared format."""


_HEADER = re.compile(rb"^DPRT v1 N=(\d+) B=(\d+)(?: binary W=(\d+))?$")


def _pgm_tokens(data):
    """Split a PGM header into its four fields; returns (tokens, offset of raster)."""
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise FormatError("truncated PGM header")
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates the header from a binary raster
    return tokens, pos + 1


def read_pgm(path, bits=None):
    """Read a P2 or P5 PGM into an :class:`Image`.

    ``bits`` defaults to ``ceil(log2(maxval + 1))``; an explicit ``bits``
    must be able to hold ``maxval``.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    tokens, offset = _pgm_tokens(data)
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"{path}: not a PGM file (magic {magic!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError(f"{path}: malformed PGM header") from None
    if width <= 0 or height <= 0 or not 0 < maxval < 65536:
        raise FormatError(f"{path}: invalid PGM dimensions or maxval")
    count = width * height
    if magic == b"P2":
        try:
            vals = np.array([int(t) for t in data[offset - 1 :].split()], dtype=np.int64)
        except ValueError:
            raise FormatError(f"{path}: non-integer sample in P2 raster") from None
    else:
        dtype = np.dtype(">u1") if maxval < 256 else np.dtype(">u2")
        raw = data[offset:]
        if len(raw) < count * dtype.itemsize:
            raise FormatError(f"{path}: truncated P5 raster")
        vals = np.frombuffer(raw, dtype=dtype, count=count).astype(np.int64)
    if vals.size != count:
        raise FormatError(f"{path}: expected {count} samples, found {vals.size}")
    if vals.size and vals.max() > maxval:
        raise FormatError(f"{path}: sample exceeds maxval {maxval}")
    if width != height:
        raise FormatError(f"{path}: image must be square, got {width}x{height}")
    natural = max(1, int(maxval).bit_length())
    if bits is None:
        bits = natural
    elif maxval >= (1 << bits):
        raise FormatError(f"{path}: maxval {maxval} does not fit in {bits} bits")
    return Image(vals.reshape(height, width), bits)


def write_pgm(path, img, binary=True):
    """Write ``img`` as P5 (default) or P2 with ``maxval = 2**B - 1``."""
    if img.bits > 16:
        raise FormatError(f"PGM holds at most 16-bit samples, image has {img.bits}")
    maxval = (1 << img.bits) - 1
    n = img.n
    header = f"{'P5' if binary else 'P2'}\n{n} {n}\n{maxval}\n".encode()
    if binary:
        dtype = ">u1" if maxval < 256 else ">u2"
        body = img.pixels.astype(dtype).tobytes()
    else:
        body = "".join(" ".join(str(v) for v in row) + "\n" for row in img.pixels).encode()
    with open(path, "wb") as fh:
        fh.write(header + body)


def _value_bytes(n, bits):
    return -(-output_width(n, bits) // 8)


def write_sinogram(path, r_arr, binary=False):
    n, bits = r_arr.n, r_arr.bits_in
    if binary:
        w = _value_bytes(n, bits)
        header = f"DPRT v1 N={n} B={bits} binary W={w}\n".encode()
        raw = r_arr.values.astype("<u8").tobytes()
        # keep the low ``w`` bytes of every little-endian 8-byte word
        body = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 8)[:, :w].tobytes()
        with open(path, "wb") as fh:
            fh.write(header + body)
        return
    lines = [f"DPRT v1 N={n} B={bits}"]
    lines += [",".join(str(v) for v in row) for row in r_arr.values]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_sinogram(path):
    """Read a text or binary sinogram file into a :class:`RadonArray`."""
    with open(path, "rb") as fh:
        data = fh.read()
    head, sep, rest = data.partition(b"\n")
    m = _HEADER.match(head.rstrip(b"\r"))
    if not sep or m is None:
        raise FormatError(f"{path}: missing 'DPRT v1 N=<N> B=<B>' header")
    n, bits = int(m.group(1)), int(m.group(2))
    if n < 2 or bits < 1:
        raise FormatError(f"{path}: invalid header values N={n} B={bits}")
    if m.group(3) is not None:
        w = int(m.group(3))
        if w != _value_bytes(n, bits):
            raise FormatError(f"{path}: value width W={w} inconsistent with N and B")
        if len(rest) != (n + 1) * n * w:
            raise FormatError(f"{path}: expected {(n + 1) * n * w} data bytes, got {len(rest)}")
        padded = np.zeros(((n + 1) * n, 8), dtype=np.uint8)
        padded[:, :w] = np.frombuffer(rest, dtype=np.uint8).reshape(-1, w)
        vals = padded.view("<u8").reshape(n + 1, n).astype(np.int64)
    else:
        rows = [ln for ln in rest.decode("ascii", errors="replace").splitlines() if ln.strip()]
        if len(rows) != n + 1:
            raise FormatError(f"{path}: expected {n + 1} rows, found {len(rows)}")
        try:
            vals = np.array(
                [[int(tok) for tok in row.split(",")] for row in rows], dtype=np.int64
            )
        except ValueError:
            raise FormatError(f"{path}: rows must hold comma-separated integers") from None
        if vals.shape != (n + 1, n):
            raise FormatError(f"{path}: every row must hold exactly {n} values")
    if vals.min() < 0 or vals.max() >= n << bits:
        raise FormatError(f"{path}: values must lie in [0, N*2^B)")
    return RadonArray(vals, bits)


def dump_report(doc):
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_report(path, doc):
    with open(path, "w", newline="\n") as fh:
        fh.write(dump_report(doc))


def read_report(path):
    with open(path) as fh:
        return json.load(fh)


def write_trace(path, records):
    with open(path, "w", newline="\n") as fh:
        fh.write(format_trace(records))
