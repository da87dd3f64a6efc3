"""graph6 reader/writer (short form, up to 62 vertices).

Format: one byte ``N(n) = n + 63`` followed by the upper triangle of the
adjacency matrix in column order (0,1),(0,2),(1,2),(0,3),... packed six bits
per byte, each byte offset by 63, padded with zero bits.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import BadGraph6

_HEADER = b">>graph6<<"


def _upper_pairs(n: int) -> Iterator[tuple[int, int]]:
    for j in range(1, n):
        for i in range(j):
            yield i, j


def parse_graph6(line: bytes | str) -> np.ndarray:
    """Decode one graph6 line into a symmetric 0/1 ``uint8`` adjacency matrix."""
    if isinstance(line, str):
        line = line.encode("ascii")
    data = line.strip()
    if data.startswith(_HEADER):
        data = data[len(_HEADER):]
    if not data:
        raise BadGraph6("empty graph6 line")
    if any(c < 63 or c > 126 for c in data):
        raise BadGraph6("graph6 bytes must lie in the printable range 63..126")
    n = data[0] - 63
    if n > 62:
        raise BadGraph6("only the short form (n <= 62) is supported")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[1:]
    if len(body) != nbytes:
        raise BadGraph6(f"expected {nbytes} data bytes for n={n}, found {len(body)}")
    bits = []
    for c in body:
        x = c - 63
        bits.extend((x >> (5 - k)) & 1 for k in range(6))
    if any(bits[nbits:]):
        raise BadGraph6("nonzero padding bits")
    adj = np.zeros((n, n), dtype=np.uint8)
    for bit, (i, j) in zip(bits, _upper_pairs(n)):
        if bit:
            adj[i, j] = adj[j, i] = 1
    return adj


def encode_graph6(adj: np.ndarray) -> bytes:
    adj = np.asarray(adj)
    n = adj.shape[0]
    if n > 62:
        raise BadGraph6("only the short form (n <= 62) is supported")
    bits = [int(adj[i, j] != 0) for i, j in _upper_pairs(n)]
    bits += [0] * (-len(bits) % 6)
    out = bytearray([n + 63])
    for k in range(0, len(bits), 6):
        x = 0
        for b in bits[k:k + 6]:
            x = (x << 1) | b
        out.append(x + 63)
    return bytes(out)


def read_graph6_file(path: str | Path) -> Iterator[np.ndarray]:
    """Yield adjacency matrices from a newline-delimited graph6 file."""
    with open(path, "rb") as fh:
        for raw in fh:
            if raw.strip():
                yield parse_graph6(raw)
