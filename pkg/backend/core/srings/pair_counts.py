"""Exact representation counts r_{X,Y}(z) = #{(x, y) in X x Y : xy = z}.

For a row z the pairs (x, y) with xy = z are (z y^-1, y) for y in G^m, so the
count vector of z is the multiset of (class(z y^-1), class(y)) over all y. It is
kept as a sorted run-length list, an exact key with no hashing of contents.
"""

from typing import Iterator, Tuple

import numpy as np

from backend.core.env import PAIR_BLOCK_ENTRIES
from backend.core.groups.power import PowerContext


def block_rows(ctx: PowerContext) -> int:
    return max(1, PAIR_BLOCK_ENTRIES // (ctx.size * ctx.arity))


def pair_id_block(ctx: PowerContext, class_of: np.ndarray, rank: int, rows: np.ndarray) -> np.ndarray:
    """len(rows) x N matrix of class(z y^-1) * rank + class(y)."""
    x = ctx.mul_codes(rows[:, None], ctx.inverse[None, :])
    return class_of[x] * rank + class_of[None, :]


def iter_count_vectors(
    ctx: PowerContext, class_of: np.ndarray, rank: int, rows: np.ndarray = None
) -> Iterator[Tuple[int, np.ndarray, np.ndarray]]:
    """Yield (z, pair ids, counts) for every z in `rows` (all of G^m by default)."""
    if rows is None:
        rows = np.arange(ctx.size, dtype=np.int64)
    step = block_rows(ctx)
    for start in range(0, len(rows), step):
        block = rows[start : start + step]
        ids = np.sort(pair_id_block(ctx, class_of, rank, block), axis=1)
        for z, row in zip(block, ids):
            starts = np.flatnonzero(np.r_[True, row[1:] != row[:-1]])
            counts = np.diff(np.r_[starts, len(row)])
            yield int(z), row[starts], counts


def count_key(values: np.ndarray, counts: np.ndarray) -> bytes:
    return values.astype(np.int64).tobytes() + b"|" + counts.astype(np.int64).tobytes()


def count_of(values: np.ndarray, counts: np.ndarray, pair: int) -> int:
    pos = np.searchsorted(values, pair)
    if pos < len(values) and values[pos] == pair:
        return int(counts[pos])
    return 0
