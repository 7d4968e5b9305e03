"""Unscrambled Sobol low-discrepancy sequence.

Points are generated in Gray-code order (Antonov-Saleev) from
Joe-Kuo direction numbers shipped as package data, for up to 1111
dimensions.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

import numpy as np

BITS = 32
_TABLE = "joe_kuo_1111.txt"


@lru_cache(maxsize=4)
def load_direction_table(name: str = _TABLE) -> tuple[tuple[int, int, tuple[int, ...]], ...]:
    """Parse a ``d s a m_1 .. m_s`` table; entry ``k`` describes dimension ``k + 2``."""
    text = resources.files("pce_sde").joinpath("data").joinpath(name).read_text()
    rows = []
    for line in text.splitlines()[1:]:
        parts = line.split()
        if not parts:
            continue
        d, s, a, *m = (int(v) for v in parts)
        if len(m) != s or d != len(rows) + 2:
            raise ValueError(f"malformed direction-number row: {line!r}")
        rows.append((s, a, tuple(m)))
    return tuple(rows)


def max_dimension() -> int:
    return len(load_direction_table()) + 1


def direction_numbers(dimension: int) -> np.ndarray:
    """Direction integers ``v[d, k] = m_k << (BITS - k)``, shape ``(dimension, BITS)``."""
    if not 1 <= dimension <= max_dimension():
        raise ValueError(f"dimension must be in 1..{max_dimension()}, got {dimension}")
    table = load_direction_table()
    v = np.zeros((dimension, BITS), dtype=np.uint64)
    for k in range(BITS):
        v[0, k] = 1 << (BITS - 1 - k)
    for d in range(1, dimension):
        s, a, m = table[d - 1]
        row = [0] * BITS
        for k in range(min(s, BITS)):
            row[k] = m[k] << (BITS - 1 - k)
        for k in range(s, BITS):
            val = row[k - s] ^ (row[k - s] >> s)
            for i in range(1, s):
                if (a >> (s - 1 - i)) & 1:
                    val ^= row[k - i]
            row[k] = val
        v[d] = row
    return v


class SobolSequence:
    """Stateful Sobol point generator.

    Parameters
    ----------
    dimension : int
    skip_zero : bool
        Drop the leading all-zero point, which maps to an infinite normal
        quantile. On by default.

    Notes
    -----
    ``points(start, count)`` is a pure function of the index range, so
    parallel consumers may split a run into disjoint blocks.
    """

    def __init__(self, dimension: int, skip_zero: bool = True):
        self.dimension = int(dimension)
        self.skip_zero = bool(skip_zero)
        self._v = direction_numbers(self.dimension)
        self.cursor = 0

    def points(self, start: int, count: int) -> np.ndarray:
        """Points with sequence indices ``start .. start + count - 1``."""
        if start < 0 or count < 0:
            raise ValueError("start and count must be non-negative")
        offset = 1 if self.skip_zero else 0
        n = np.arange(start + offset, start + offset + count, dtype=np.uint64)
        if n.size and int(n[-1]) >= 1 << BITS:
            raise ValueError(f"index range exceeds 2**{BITS} points")
        gray = n ^ (n >> np.uint64(1))
        x = np.zeros((count, self.dimension), dtype=np.uint64)
        for k in range(BITS):
            bit = ((gray >> np.uint64(k)) & np.uint64(1)).astype(bool)
            if not bit.any():
                continue
            x[bit] ^= self._v[:, k]
        return x.astype(float) * 2.0 ** -BITS

    def draw(self, count: int) -> np.ndarray:
        """Next `count` points; advances the cursor."""
        out = self.points(self.cursor, count)
        self.cursor += count
        return out

    def reset(self) -> None:
        self.cursor = 0
