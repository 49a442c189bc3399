"""GF(2) elimination on bit strings packed into ints (leftmost bit most significant)."""

from __future__ import annotations

from .errors import RankError
from .state import bits


def _reduce(rows: list[int], n: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns as bit positions)."""
    work = [r for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(n - 1, -1, -1):
        pivot = next((i for i in range(r, len(work)) if (work[i] >> col) & 1), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and (work[i] >> col) & 1:
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def rank(rows: list[int], n: int) -> int:
    return len(_reduce(rows, n)[1])


def solve_mod2(samples: list[str], n: int) -> str:
    """The unique nonzero ``h`` with ``s . h = 0 (mod 2)`` for all ``n - 1`` samples."""
    if len(samples) != n - 1:
        raise RankError(f"need {n - 1} samples for n={n}, got {len(samples)}")
    rows = [int(s, 2) for s in samples]
    reduced, pivots = _reduce(rows, n)
    if len(pivots) != n - 1:
        raise RankError(f"samples {samples} have rank {len(pivots)}, expected {n - 1}")
    (free,) = [c for c in range(n) if c not in pivots]
    h = 1 << free
    for row, col in zip(reduced, pivots):
        if (row >> free) & 1:
            h |= 1 << col
    return bits(h, n)
