"""Finite black-box function families and the line-oriented family-file format.

A family is an ordered list of oracle functions ``f_k`` together with the
solution label ``sigma(k)`` the second player must output. For table-encoded
families the label ``k`` is the function's value table read top to bottom;
for Grover families ``k`` is the marked location.

File format::

    family <name>
    x_bits <n>
    v_bits <m>
    solution_bits <s>
    k <bits> : <v(x=0..0)> ... <v(x=1..1)> ; solution <bits>
    meta h=<bits>            # optional, applies to the preceding member
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from .errors import ParseError, SizeError
from .state import bits

KINDS = ("deutsch", "dj", "bv", "simon", "grover", "minute", "perm")

# Members of the two-bit "minute" family, as listed: k = f(0) f(1).
MINUTE_LABELS = ("0000", "0001", "0100", "0101", "0010", "1000", "1001", "0110", "1010")


def _is_bits(s: str, width: int | None = None) -> bool:
    return bool(re.fullmatch(r"[01]*", s)) and (width is None or len(s) == width)


def dot2(a: int, x: int) -> int:
    """Inner product mod 2 of two bit vectors packed as integers."""
    return bin(a & x).count("1") & 1


@dataclass(frozen=True)
class OracleFunction:
    k_label: str
    values: tuple[int, ...]
    x_bits: int
    v_bits: int

    def __call__(self, x: int) -> int:
        return self.values[x]

    @property
    def table(self) -> dict[str, str]:
        return {bits(x, self.x_bits): bits(v, self.v_bits) for x, v in enumerate(self.values)}


@dataclass(frozen=True)
class FunctionFamily:
    name: str
    x_bits: int
    v_bits: int
    members: tuple[OracleFunction, ...]
    solution: Mapping[str, str]
    meta: Mapping[str, Mapping[str, str]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def kind(self) -> str:
        m = re.match(r"[a-z]+", self.name)
        prefix = m.group(0) if m else ""
        return prefix if prefix in KINDS else "custom"

    @property
    def k_labels(self) -> tuple[str, ...]:
        return tuple(f.k_label for f in self.members)

    @property
    def solution_bits(self) -> int:
        return len(next(iter(self.solution.values()))) if self.solution else 0

    @cached_property
    def _index(self) -> dict[str, int]:
        return {f.k_label: i for i, f in enumerate(self.members)}

    def index(self, k_label: str) -> int:
        return self._index[k_label]

    def member(self, k_label: str) -> OracleFunction:
        return self.members[self._index[k_label]]

    def value_array(self) -> np.ndarray:
        """Integer array of shape ``(len(family), 2**x_bits)`` holding ``f_k(x)``."""
        return np.array([f.values for f in self.members], dtype=np.int64).reshape(len(self), 1 << self.x_bits)

    def readout_labels(self) -> dict[str, str]:
        """Labels whose X-conditional states a readout should separate.

        Families whose members all carry a hidden linear string ``a`` are read
        out by ``a`` (constant functions have ``a = 0...0``); every other family
        is read out by its solution label.
        """
        if self.members and all("a" in self.meta.get(k, {}) for k in self.k_labels):
            return {k: self.meta[k]["a"] for k in self.k_labels}
        return dict(self.solution)

    def with_solution(self, solution: Mapping[str, str], name: str | None = None) -> FunctionFamily:
        return FunctionFamily(name or self.name, self.x_bits, self.v_bits, self.members, dict(solution), self.meta)

    def identification_problem(self) -> FunctionFamily:
        """Same functions, with the solution being the function itself."""
        return self.with_solution({k: k for k in self.k_labels})


def _table_label(values, v_bits: int) -> str:
    return "".join(bits(v, v_bits) for v in values)


def _tabled(tables, v_bits: int) -> list[tuple[str, tuple[int, ...]]]:
    return [(_table_label(t, v_bits), tuple(t)) for t in tables]


def _make(name, x_bits, v_bits, entries, solution_of, meta_of=None) -> FunctionFamily:
    """Build a family from ``(k_label, values)`` pairs, ordered by label."""
    members = sorted((OracleFunction(k, vals, x_bits, v_bits) for k, vals in entries), key=lambda f: f.k_label)
    solution = {f.k_label: solution_of(f) for f in members}
    meta = {}
    if meta_of is not None:
        for f in members:
            m = meta_of(f)
            if m:
                meta[f.k_label] = m
    return FunctionFamily(name, x_bits, v_bits, tuple(members), solution, meta)


def _affine_string(values: tuple[int, ...], x_bits: int) -> str | None:
    """Return ``a`` if ``f(x) = a.x XOR f(0)``, else None."""
    a = 0
    for i in range(x_bits):
        a |= (values[1 << i] ^ values[0]) << i
    if all(values[x] == dot2(a, x) ^ values[0] for x in range(len(values))):
        return bits(a, x_bits)
    return None


def _is_balanced(values) -> bool:
    return 2 * sum(values) == len(values)


def _deutsch() -> FunctionFamily:
    tables = [(a, b) for a in (0, 1) for b in (0, 1)]
    return _make("deutsch", 1, 1, _tabled(tables, 1), lambda f: str(int(_is_balanced(f.values))))


def _dj(n: int) -> FunctionFamily:
    if n not in (2, 3):
        raise SizeError(f"dj is available for n = 2, 3; got {n}")
    size = 1 << n
    tables = [(0,) * size, (1,) * size]
    for ones in itertools.combinations(range(size), size // 2):
        tables.append(tuple(int(x in ones) for x in range(size)))

    def meta(f):
        a = _affine_string(f.values, n)
        return {"a": a} if a is not None else {}

    return _make(f"dj{n}", n, 1, _tabled(tables, 1), lambda f: str(int(_is_balanced(f.values))), meta)


def _bv(n: int) -> FunctionFamily:
    if not 1 <= n <= 4:
        raise SizeError(f"bv is available for 1 <= n <= 4; got {n}")
    tables = [tuple(dot2(a, x) for x in range(1 << n)) for a in range(1 << n)]
    return _make(f"bv{n}", n, 1, _tabled(tables, 1), lambda f: _affine_string(f.values, n), lambda f: {"a": _affine_string(f.values, n)})


def _simon_period(values: tuple[int, ...]) -> int:
    for h in range(1, len(values)):
        if values[h] == values[0]:
            return h
    return 0


def _simon(n: int) -> FunctionFamily:
    if n not in (2, 3):
        raise SizeError(f"simon is available for n = 2, 3; got {n}")
    size, m = 1 << n, n - 1
    tables = []
    for h in range(1, size):
        reps = sorted({min(x, x ^ h) for x in range(size)})
        for perm in itertools.permutations(range(1 << m)):
            coset_value = dict(zip(reps, perm))
            tables.append(tuple(coset_value[min(x, x ^ h)] for x in range(size)))
    return _make(
        f"simon{n}", n, m, _tabled(tables, m),
        lambda f: bits(_simon_period(f.values), n),
        lambda f: {"h": bits(_simon_period(f.values), n)},
    )


def _grover(n: int) -> FunctionFamily:
    if not 1 <= n <= 4:
        raise SizeError(f"grover is available for 1 <= n <= 4; got {n}")
    size = 1 << n
    tables = [(bits(k, n), tuple(int(x == k) for x in range(size))) for k in range(size)]
    return _make(f"grover{n}", n, 1, tables, lambda f: f.k_label)


def _minute() -> FunctionFamily:
    tables = [(int(k[:2], 2), int(k[2:], 2)) for k in MINUTE_LABELS]
    return _make("minute", 1, 2, _tabled(tables, 2), lambda f: str(f.k_label.count("1") & 1))


def _perm_unlabeled() -> FunctionFamily:
    tables = list(itertools.permutations(range(4)))
    return _make("perm", 2, 2, _tabled(tables, 2), lambda f: "")


_PERM_CACHE: list[FunctionFamily] = []


def _perm() -> FunctionFamily:
    # Partition labels come from one simulated oracle call; computed once per process.
    if not _PERM_CACHE:
        from .algorithms import derive_partitions

        base = _perm_unlabeled()
        blocks = derive_partitions(base)
        solution = {k: outcome for outcome, ks in blocks.items() for k in ks}
        _PERM_CACHE.append(base.with_solution(solution))
    return _PERM_CACHE[0]


BUILTIN_NAMES = (
    "deutsch", "dj2", "dj3", "bv1", "bv2", "bv3", "bv4", "simon2", "simon3",
    "grover1", "grover2", "grover3", "grover4", "minute", "perm",
)


def builtin(name: str, n: int | None = None) -> FunctionFamily:
    """Return a built-in family, e.g. ``builtin("grover2")`` or ``builtin("simon", 3)``."""
    m = re.fullmatch(r"([a-z]+)\(?(\d*)\)?", name.strip().lower())
    if not m:
        raise SizeError(f"unknown family {name!r}")
    kind, digits = m.group(1), m.group(2)
    if digits:
        if n is not None and int(digits) != n:
            raise SizeError(f"conflicting sizes in {name!r} and n={n}")
        n = int(digits)
    if kind in ("deutsch", "minute", "perm"):
        if n is not None:
            raise SizeError(f"{kind} takes no size parameter")
        return {"deutsch": _deutsch, "minute": _minute, "perm": _perm}[kind]()
    makers = {"dj": _dj, "bv": _bv, "simon": _simon, "grover": _grover}
    if kind not in makers:
        raise SizeError(f"unknown family {name!r}")
    if n is None:
        raise SizeError(f"{kind} needs a size, e.g. {kind}2")
    return makers[kind](n)


def validate_family(family: FunctionFamily) -> list[str]:
    """Return a list of invariant violations; empty means the family is valid."""
    out: list[str] = []
    if not family.members:
        return ["family has no members"]
    size = 1 << family.x_bits
    seen: set[str] = set()
    widths = set()
    for f in family.members:
        k = f.k_label
        if k in seen:
            out.append(f"k={k}: duplicate k label")
        seen.add(k)
        if not _is_bits(k) or not k:
            out.append(f"k={k}: k label is not a bit string")
        if len(f.values) != size:
            out.append(f"k={k}: table has {len(f.values)} rows, expected {size}")
            continue
        if any(not 0 <= v < (1 << family.v_bits) for v in f.values):
            out.append(f"k={k}: value wider than {family.v_bits} bits")
        if k not in family.solution:
            out.append(f"k={k}: missing solution")
            continue
        sol = family.solution[k]
        widths.add(len(sol))
        if not _is_bits(sol):
            out.append(f"k={k}: solution {sol!r} is not a bit string")
        out.extend(_structure_violations(family, f))
    if len(widths) > 1:
        out.append(f"solution widths differ: {sorted(widths)}")
    extra = set(family.solution) - seen
    if extra:
        out.append(f"solutions for unknown members {sorted(extra)}")
    return out


def _structure_violations(family: FunctionFamily, f: OracleFunction) -> list[str]:
    k, vals, n = f.k_label, f.values, family.x_bits
    meta = family.meta.get(k, {})
    sol = family.solution[k]
    kind = family.kind
    out = []
    if "h" in meta or kind == "simon":
        h_bits = meta.get("h")
        if h_bits is None:
            out.append(f"k={k}: missing period metadata")
        elif not _is_bits(h_bits, n):
            out.append(f"k={k}: period {h_bits!r} is not {n} bits")
        else:
            h = int(h_bits, 2)
            if h == 0:
                out.append(f"k={k}: all zeroes period")
            elif any((vals[x] == vals[y]) != (x == y or x == y ^ h) for x in range(len(vals)) for y in range(len(vals))):
                out.append(f"k={k}: not two-to-one with period {h_bits}")
            if kind == "simon" and sol != h_bits:
                out.append(f"k={k}: solution {sol} differs from period {h_bits}")
    if "a" in meta:
        a = meta["a"]
        if not _is_bits(a, n):
            out.append(f"k={k}: hidden string {a!r} is not {n} bits")
        else:
            offset = 0 if kind == "bv" else vals[0]
            if any(vals[x] != dot2(int(a, 2), x) ^ offset for x in range(len(vals))):
                out.append(f"k={k}: not linear in a={a}")
            if kind == "bv" and sol != a:
                out.append(f"k={k}: solution {sol} differs from hidden string {a}")
    if kind in ("deutsch", "dj"):
        constant = len(set(vals)) == 1
        if not constant and not _is_balanced(vals):
            out.append(f"k={k}: neither constant nor balanced")
        elif sol != str(int(not constant)):
            out.append(f"k={k}: solution {sol} does not match the balanced flag")
    if kind == "grover":
        if not _is_bits(k, n) or any(v != int(x == int(k, 2)) for x, v in enumerate(vals)):
            out.append(f"k={k}: not the Kronecker delta at {k}")
        elif sol != k:
            out.append(f"k={k}: solution must equal the location")
    if kind == "minute" and sol != str(k.count("1") & 1):
        out.append(f"k={k}: solution is not the parity of k")
    return out


def serialize_family(family: FunctionFamily) -> str:
    lines = [
        f"family {family.name}",
        f"x_bits {family.x_bits}",
        f"v_bits {family.v_bits}",
        f"solution_bits {family.solution_bits}",
    ]
    for f in family.members:
        vals = " ".join(bits(v, family.v_bits) for v in f.values)
        lines.append(f"k {f.k_label} : {vals} ; solution {family.solution[f.k_label]}")
        meta = family.meta.get(f.k_label)
        if meta:
            lines.append("meta " + " ".join(f"{key}={val}" for key, val in sorted(meta.items())))
    return "\n".join(lines) + "\n"


_MEMBER_RE = re.compile(r"k\s+(\S+)\s*:\s*(.*?)\s*;\s*solution\s+(\S+)")
_MEMBER_NOSOL_RE = re.compile(r"k\s+(\S+)\s*:\s*([^;]*)$")


def parse_family(text: str | bytes) -> FunctionFamily:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))

    header = {}
    expected = ("family", "x_bits", "v_bits", "solution_bits")
    for key in expected:
        if not lines:
            raise ParseError(f"missing '{key}' header")
        lineno, line = lines.pop(0)
        parts = line.split()
        if len(parts) != 2 or parts[0] != key:
            raise ParseError(f"expected '{key} <value>'", lineno)
        if key != "family":
            try:
                header[key] = int(parts[1])
            except ValueError:
                raise ParseError(f"{key} must be an integer", lineno) from None
            if header[key] < 0:
                raise ParseError(f"{key} must be nonnegative", lineno)
        else:
            header[key] = parts[1]
    x_bits, v_bits, s_bits = header["x_bits"], header["v_bits"], header["solution_bits"]
    rows = 1 << x_bits

    members: list[OracleFunction] = []
    solution: dict[str, str] = {}
    meta: dict[str, dict[str, str]] = {}
    line_of: dict[str, int] = {}
    for lineno, line in lines:
        if line.startswith("meta"):
            if not members:
                raise ParseError("meta line before any member", lineno)
            entries = {}
            for tok in line.split()[1:]:
                key, sep, val = tok.partition("=")
                if not sep or not key or not _is_bits(val):
                    raise ParseError(f"bad meta entry {tok!r}", lineno)
                entries[key] = val
            meta.setdefault(members[-1].k_label, {}).update(entries)
            continue
        m = _MEMBER_RE.fullmatch(line)
        if not m:
            if _MEMBER_NOSOL_RE.fullmatch(line):
                raise ParseError("missing solution", lineno)
            raise ParseError(f"unrecognized line {line!r}", lineno)
        k, vals_text, sol = m.groups()
        if not _is_bits(k) or not k:
            raise ParseError(f"k label {k!r} is not a bit string", lineno)
        if k in line_of:
            raise ParseError(f"duplicate k {k} (first on line {line_of[k]})", lineno)
        tokens = vals_text.split()
        if len(tokens) != rows:
            raise ParseError(f"k={k} lists {len(tokens)} values, expected {rows}", lineno)
        for tok in tokens:
            if not _is_bits(tok, v_bits):
                raise ParseError(f"value {tok!r} is not {v_bits} bits wide", lineno)
        if not _is_bits(sol, s_bits):
            raise ParseError(f"solution {sol!r} is not {s_bits} bits wide", lineno)
        members.append(OracleFunction(k, tuple(int(t, 2) if t else 0 for t in tokens), x_bits, v_bits))
        solution[k] = sol
        line_of[k] = lineno

    if not members:
        raise ParseError("family has no members")
    members.sort(key=lambda f: f.k_label)
    family = FunctionFamily(header["family"], x_bits, v_bits, tuple(members), solution, meta)
    violations = validate_family(family)
    if violations:
        first = violations[0]
        m = re.match(r"k=(\S+):", first)
        raise ParseError(first, line_of.get(m.group(1)) if m else None)
    return family
