"""Pure-Python minimax search; same contract as the compiled ``_minimax`` module.

Masks are Python ints, so this backend also handles families of more than 64
members.
"""

from __future__ import annotations

UNSOLVABLE = 1 << 20


class MinimaxSolver:
    def __init__(self, value_masks, label_masks):
        self._values = [[int(m) for m in row] for row in value_masks]
        self._labels = [int(m) for m in label_masks]
        self._memo: dict[int, int] = {}

    def depth(self, mask: int) -> int:
        d = self._depth(int(mask))
        return -1 if d >= UNSOLVABLE else d

    def memo_size(self) -> int:
        return len(self._memo)

    def _depth(self, mask: int) -> int:
        if mask == 0:
            return 0
        lowest = (mask & -mask).bit_length() - 1
        if mask & ~self._labels[lowest] == 0:
            return 0
        cached = self._memo.get(mask)
        if cached is not None:
            return cached
        best = UNSOLVABLE
        for row in self._values:
            worst = 0
            useful = True
            for vm in row:
                child = mask & vm
                if not child:
                    continue
                if child == mask:
                    useful = False
                    break
                d = self._depth(child) + 1
                if d > worst:
                    worst = d
                if worst >= best:
                    break
            if useful and worst < best:
                best = worst
                if best == 1:
                    break
        self._memo[mask] = best
        return best
