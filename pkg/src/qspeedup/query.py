"""Exact deterministic query complexity, with and without half of ``k`` revealed.

The worst case is over family members: an adversary picks ``k``, the solver
picks queries adaptively. Search states are sets of still-consistent members,
packed into integer bitmasks and memoized by the kernel in :mod:`.kernels`.
"""

from __future__ import annotations

import enum
import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Union

import numpy as np

from .errors import CapacityError, DegenerateProblemError, DomainError
from .families import FunctionFamily, OracleFunction
from .kernels import make_solver
from .state import bits

DEFAULT_MAX_FAMILY = 64
MAX_ROWS = 16

# Query counts stated in the literature for the built-in problems; the rule
# report flags any row where the exhaustive search disagrees.
PUBLISHED_COUNTS = {
    "deutsch": {"classical": 2, "advanced": 1},
    "dj2": {"advanced": 1},
    "simon2": {"advanced": 1},
    "grover2": {"advanced": 1},
    "minute": {"advanced": 1},
    "perm": {"classical": 3, "advanced": 1},
}

PROBLEMS = {
    "deutsch": "balanced",
    "dj": "balanced",
    "bv": "hidden-string",
    "simon": "period",
    "grover": "location",
    "minute": "parity",
    "perm": "partition",
}


def max_family() -> int:
    return int(os.environ.get("QSPEEDUP_MAX_FAMILY", DEFAULT_MAX_FAMILY))


class Mode(str, enum.Enum):
    BIT_HALF = "bit"
    ROW_HALF = "row"


def default_mode(family: FunctionFamily) -> Mode:
    """Location-type families reveal bits of ``k``; table-encoded ones reveal rows."""
    return Mode.BIT_HALF if family.kind == "grover" else Mode.ROW_HALF


def problem_name(family: FunctionFamily) -> str:
    if all(family.solution[k] == k for k in family.k_labels) and family.kind != "grover":
        return "identify"
    return PROBLEMS.get(family.kind, "solution")


@dataclass(frozen=True)
class AdvancedInfo:
    mode: Mode
    positions: tuple[int, ...]
    values: tuple[str, ...]

    def consistent(self, f: OracleFunction) -> bool:
        if self.mode is Mode.BIT_HALF:
            return all(f.k_label[p] == v for p, v in zip(self.positions, self.values))
        return all(bits(f.values[p], f.v_bits) == v for p, v in zip(self.positions, self.values))

    def describe(self, x_bits: int = 0) -> str:
        if self.mode is Mode.BIT_HALF:
            return ",".join(f"k{p}={v}" for p, v in zip(self.positions, self.values))
        return ",".join(f"f({bits(p, x_bits)})={v}" for p, v in zip(self.positions, self.values))


@dataclass(frozen=True)
class Leaf:
    label: str


@dataclass(frozen=True)
class QueryNode:
    x: int
    children: dict[int, "Tree"] = field(hash=False)


Tree = Union[QueryNode, Leaf]


@dataclass(frozen=True)
class DecisionTreeResult:
    depth: int
    tree: Tree

    def run(self, f: OracleFunction) -> tuple[str | None, int]:
        """Replay the tree against ``f``; returns (label, queries used)."""
        node, used = self.tree, 0
        while isinstance(node, QueryNode):
            used += 1
            node = node.children.get(f(node.x))
            if node is None:
                return None, used
        return node.label, used


def verify_tree(result: DecisionTreeResult, family: FunctionFamily, members=None) -> bool:
    """Every member reaches a leaf labeled with its solution within ``result.depth`` queries."""
    for f in members if members is not None else family.members:
        label, used = result.run(f)
        if label != family.solution[f.k_label] or used > result.depth:
            return False
    return True


def _check_capacity(family: FunctionFamily) -> None:
    if (1 << family.x_bits) > MAX_ROWS:
        raise CapacityError(f"{family.name}: 2^{family.x_bits} rows exceed the search bound {MAX_ROWS}")
    limit = max_family()
    if len(family) > limit:
        raise CapacityError(
            f"{family.name}: {len(family)} members exceed the search bound {limit} (set QSPEEDUP_MAX_FAMILY)"
        )


class Search:
    """Minimax search over subsets of one family's members."""

    def __init__(self, family: FunctionFamily, backend: str | None = None):
        _check_capacity(family)
        self.family = family
        n = len(family)
        values = family.value_array()
        n_vals = 1 << family.v_bits
        value_masks = np.zeros((values.shape[1], n_vals), dtype=object)
        for q in range(values.shape[1]):
            for i in range(n):
                value_masks[q, values[i, q]] |= 1 << i
        by_label: dict[str, int] = {}
        for i, k in enumerate(family.k_labels):
            by_label[family.solution[k]] = by_label.get(family.solution[k], 0) | (1 << i)
        label_masks = [by_label[family.solution[k]] for k in family.k_labels]
        self._value_masks = value_masks.tolist()
        self._label_masks = label_masks
        self._solver = make_solver(
            np.array(self._value_masks, dtype=np.uint64) if n <= 64 else self._value_masks,
            np.array(label_masks, dtype=np.uint64) if n <= 64 else label_masks,
            n,
            prefer=backend,
        )
        self.full = (1 << n) - 1

    def mask_of(self, members) -> int:
        mask = 0
        for f in members:
            mask |= 1 << self.family.index(f.k_label)
        return mask

    def homogeneous(self, mask: int) -> bool:
        lowest = (mask & -mask).bit_length() - 1
        return mask == 0 or mask & ~self._label_masks[lowest] == 0

    def depth(self, mask: int) -> int:
        d = self._solver.depth(mask)
        if d < 0:
            raise DomainError(f"{self.family.name}: identical tables carry different solutions")
        return d

    def children(self, mask: int, x: int) -> dict[int, int]:
        out = {}
        for v, vm in enumerate(self._value_masks[x]):
            child = mask & vm
            if child:
                out[v] = child
        return out

    def best_query(self, mask: int) -> int:
        """Lowest query index achieving the optimal depth for ``mask``."""
        target = self.depth(mask)
        for x in range(len(self._value_masks)):
            kids = self.children(mask, x)
            if len(kids) < 2:
                continue
            if 1 + max(self.depth(c) for c in kids.values()) == target:
                return x
        raise DomainError("no optimal query found")  # unreachable for consistent memo

    def tree(self, mask: int) -> Tree:
        if self.homogeneous(mask):
            lowest = (mask & -mask).bit_length() - 1
            return Leaf(self.family.solution[self.family.k_labels[lowest]])
        x = self.best_query(mask)
        return QueryNode(x, {v: self.tree(c) for v, c in self.children(mask, x).items()})

    def result(self, mask: int | None = None) -> DecisionTreeResult:
        mask = self.full if mask is None else mask
        return DecisionTreeResult(self.depth(mask), self.tree(mask))


def classical_query_complexity(family: FunctionFamily, backend: str | None = None) -> DecisionTreeResult:
    """Minimum worst-case number of queries needed to output the solution."""
    return Search(family, backend).result()


def _half_groups(family: FunctionFamily, mode: Mode) -> Iterator[tuple[AdvancedInfo, list[int]]]:
    """Each revealed half with the indices of the members consistent with it."""
    if mode is Mode.BIT_HALF:
        lengths = {len(k) for k in family.k_labels}
        if len(lengths) != 1:
            raise DomainError("bit halves need k labels of equal length")
        span = lengths.pop()
        rows = [tuple(f.k_label) for f in family.members]
        show = lambda v: v  # noqa: E731
    else:
        span = 1 << family.x_bits
        rows = [f.values for f in family.members]
        show = lambda v: bits(v, family.v_bits)  # noqa: E731
    reveal = math.ceil(span / 2)
    for pos in itertools.combinations(range(span), reveal):
        groups: dict[tuple, list[int]] = {}
        for i, row in enumerate(rows):
            groups.setdefault(tuple(row[p] for p in pos), []).append(i)
        for vals in sorted(groups):
            yield AdvancedInfo(mode, pos, tuple(show(v) for v in vals)), groups[vals]


def enumerate_halves(family: FunctionFamily, mode: Mode) -> list[AdvancedInfo]:
    """Every revealed half consistent with at least one member, in a fixed order."""
    return [half for half, _ in _half_groups(family, Mode(mode))]


class AdvancedResult(NamedTuple):
    depth: int
    excluded: list[AdvancedInfo]
    per_half: dict[AdvancedInfo, int | None]


def advanced_query_complexity(
    family: FunctionFamily, mode: Mode | str | None = None, search: Search | None = None
) -> AdvancedResult:
    """Worst case over revealed halves that leave the solution open.

    Halves that already pin down the solution are excluded (``per_half`` maps
    them to None).
    """
    mode = default_mode(family) if mode is None else Mode(mode)
    search = search or Search(family)
    excluded: list[AdvancedInfo] = []
    per_half: dict[AdvancedInfo, int | None] = {}
    for half, members in _half_groups(family, mode):
        mask = 0
        for i in members:
            mask |= 1 << i
        if search.homogeneous(mask):
            excluded.append(half)
            per_half[half] = None
        else:
            per_half[half] = search.depth(mask)
    remaining = [d for d in per_half.values() if d is not None]
    if not remaining:
        raise DegenerateProblemError(f"{family.name}: every half already determines the solution")
    return AdvancedResult(max(remaining), excluded, per_half)


@dataclass(frozen=True)
class RuleVerdict:
    family: str
    problem: str
    classical_depth: int
    advanced_depth: int
    excluded_half_count: int
    quantum_queries: int
    verdict: str
    flags: tuple[str, ...] = ()

    TSV_HEADER = "family\tproblem\tclassical_depth\tadvanced_depth\texcluded_half_count\tquantum_queries\tverdict"

    def tsv(self) -> str:
        return "\t".join(
            str(v) for v in (
                self.family, self.problem, self.classical_depth, self.advanced_depth,
                self.excluded_half_count, self.quantum_queries, self.verdict,
            )
        )

    def short(self) -> str:
        return "\t".join(str(v) for v in (self.family, self.classical_depth, self.advanced_depth, self.quantum_queries, self.verdict))


def check_fifty_percent_rule(family: FunctionFamily, quantum_queries: int, mode: Mode | str | None = None) -> RuleVerdict:
    """PASS iff the quantum query count equals the advanced-information depth."""
    search = Search(family)
    classical = search.depth(search.full)
    adv = advanced_query_complexity(family, mode, search)
    verdict = "PASS" if quantum_queries == adv.depth else "FAIL"
    flags = []
    problem = problem_name(family)
    published = PUBLISHED_COUNTS.get(family.name) if problem == PROBLEMS.get(family.kind) else None
    if published:
        for key, computed in (("classical", classical), ("advanced", adv.depth)):
            if key in published and published[key] != computed:
                flags.append(f"{key}: published {published[key]}, computed {computed}")
    if flags:
        verdict = "FLAG"
    return RuleVerdict(family.name, problem, classical, adv.depth, len(adv.excluded), quantum_queries, verdict, tuple(flags))
