"""Published extended-algorithm states, transcribed term by term.

Nothing here calls the simulator: each state is written out as a sum of
product terms ``coefficient * |k>_K (x-superposition)_X (v-superposition)_V``
and assembled on the extended layout. The simulator is checked against these.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping

import numpy as np

from .state import RegisterLayout, StateVector

Amplitudes = Mapping[str, float]
Term = tuple[float, Amplitudes, Amplitudes, Amplitudes]

MINUS = {"0": 1.0, "1": -1.0}
ZERO = {"0": 1.0}
ONE = {"1": 1.0}


def _ket(*pairs: tuple[str, float]) -> dict[str, float]:
    return dict(pairs)


def _signs(labels: Iterable[str], pattern: str) -> dict[str, float]:
    """``pattern`` like "+--+" gives the sign of each basis string in order."""
    return {lab: (1.0 if s == "+" else -1.0) for lab, s in zip(labels, pattern)}


def assemble(k_labels: Iterable[str], x_bits: int, v_bits: int, terms: Iterable[Term]) -> StateVector:
    layout = RegisterLayout.extended(list(k_labels), x_bits, v_bits)
    amps = np.zeros(layout.dims, dtype=complex)
    for coef, kpart, xpart, vpart in terms:
        for k, ak in kpart.items():
            i = layout.label_index("K", k)
            for x, ax in xpart.items():
                for v, av in vpart.items():
                    amps[i, int(x, 2), int(v, 2)] += coef * ak * ax * av
    return StateVector(layout, amps)


X2 = ("00", "01", "10", "11")
X1 = ("0", "1")


# --- Grover, two-bit search -------------------------------------------------

GROVER2_K = X2


def grover2_prepared() -> StateVector:
    c = 1 / (4 * math.sqrt(2))
    uniform = {x: 1.0 for x in X2}
    return assemble(GROVER2_K, 2, 1, [(c, uniform, uniform, MINUS)])


def grover2_evaluated() -> StateVector:
    c = 1 / (4 * math.sqrt(2))
    rows = {"00": "-+++", "01": "+-++", "10": "++-+", "11": "+++-"}
    return assemble(GROVER2_K, 2, 1, [(c, {k: 1.0}, _signs(X2, p), MINUS) for k, p in rows.items()])


def grover2_final() -> StateVector:
    c = 1 / (2 * math.sqrt(2))
    return assemble(GROVER2_K, 2, 1, [(c, {k: 1.0}, {k: 1.0}, MINUS) for k in GROVER2_K])


# --- Deutsch ---------------------------------------------------------------

DEUTSCH_K = ("00", "01", "10", "11")


def deutsch_prepared() -> StateVector:
    uniform_k = {k: 1.0 for k in DEUTSCH_K}
    return assemble(DEUTSCH_K, 1, 1, [(0.25, uniform_k, {"0": 1.0, "1": 1.0}, MINUS)])


def deutsch_evaluated() -> StateVector:
    return assemble(
        DEUTSCH_K,
        1,
        1,
        [
            (0.25, _ket(("00", 1.0), ("11", -1.0)), _ket(("0", 1.0), ("1", 1.0)), MINUS),
            (0.25, _ket(("01", 1.0), ("10", -1.0)), _ket(("0", 1.0), ("1", -1.0)), MINUS),
        ],
    )


def deutsch_final() -> StateVector:
    c = 1 / (2 * math.sqrt(2))
    return assemble(
        DEUTSCH_K,
        1,
        1,
        [
            (c, _ket(("00", 1.0), ("11", -1.0)), {"0": 1.0}, MINUS),
            (c, _ket(("01", 1.0), ("10", -1.0)), {"1": 1.0}, MINUS),
        ],
    )


# --- Deutsch-Jozsa, two-bit inputs -----------------------------------------

DJ2_K = ("0000", "0011", "0101", "0110", "1001", "1010", "1100", "1111")
# (member, its complement, sign pattern over X, Hadamard image on X)
_DJ2_PAIRS = (
    ("0000", "1111", "++++", "00"),
    ("0011", "1100", "++--", "10"),
    ("0101", "1010", "+-+-", "01"),
    ("0110", "1001", "+--+", "11"),
)


def dj2_prepared() -> StateVector:
    uniform = {x: 1.0 for x in X2}
    return assemble(DJ2_K, 2, 1, [(1 / 8, {k: 1.0 for k in DJ2_K}, uniform, MINUS)])


def dj2_evaluated() -> StateVector:
    return assemble(
        DJ2_K,
        2,
        1,
        [(1 / 8, _ket((a, 1.0), (b, -1.0)), _signs(X2, p), MINUS) for a, b, p, _ in _DJ2_PAIRS],
    )


def dj2_final() -> StateVector:
    return assemble(
        DJ2_K,
        2,
        1,
        [(1 / 4, _ket((a, 1.0), (b, -1.0)), {h: 1.0}, MINUS) for a, b, _, h in _DJ2_PAIRS],
    )


# --- Simon, two-bit inputs -------------------------------------------------

SIMON2_K = ("0011", "0101", "0110", "1001", "1010", "1100")
SIMON_C = 1 / (2 * math.sqrt(6))

# X states paired with V=0 / V=1 for the member listed first in each pair.
_SIMON2_EVAL = {
    "0011": (("00", "01"), ("10", "11")),
    "0101": (("00", "10"), ("01", "11")),
    "0110": (("00", "11"), ("01", "10")),
}
_SIMON2_COMPLEMENT = {"0011": "1100", "0101": "1010", "0110": "1001"}
# Hadamard on X turns the pair above into a+b (with V=0) and a-b (with V=1).
_SIMON2_READ = {
    "0011": ("00", "10"),
    "0101": ("00", "01"),
    "0110": ("00", "11"),
}


def _plus(*xs: str) -> dict[str, float]:
    return {x: 1.0 for x in xs}


def simon2_prepared() -> StateVector:
    return assemble(SIMON2_K, 2, 1, [(SIMON_C, {k: 1.0 for k in SIMON2_K}, _plus(*X2), ZERO)])


def simon2_evaluated() -> StateVector:
    """Post-evaluation state with each member's own V value.

    The member listed first in a pair carries the printed terms; its
    complement carries the same X states with V flipped.
    """
    terms: list[Term] = []
    for k, (xs0, xs1) in _SIMON2_EVAL.items():
        terms.append((SIMON_C, {k: 1.0}, _plus(*xs0), ZERO))
        terms.append((SIMON_C, {k: 1.0}, _plus(*xs1), ONE))
        comp = _SIMON2_COMPLEMENT[k]
        terms.append((SIMON_C, {comp: 1.0}, _plus(*xs0), ONE))
        terms.append((SIMON_C, {comp: 1.0}, _plus(*xs1), ZERO))
    return assemble(SIMON2_K, 2, 1, terms)


def simon2_final() -> StateVector:
    terms: list[Term] = []
    for k, (a, b) in _SIMON2_READ.items():
        even, odd = {a: 1.0, b: 1.0}, {a: 1.0, b: -1.0}
        comp = _SIMON2_COMPLEMENT[k]
        terms.append((SIMON_C, {k: 1.0}, even, ZERO))
        terms.append((SIMON_C, {k: 1.0}, odd, ONE))
        terms.append((SIMON_C, {comp: 1.0}, even, ONE))
        terms.append((SIMON_C, {comp: 1.0}, odd, ZERO))
    return assemble(SIMON2_K, 2, 1, terms)


def simon2_evaluated_as_printed() -> StateVector:
    """The factored form with both pair members sharing the same V terms.

    Kept to document that it disagrees with the member tables: its overlap
    with the true post-evaluation state is 1/2.
    """
    terms: list[Term] = []
    for k, (xs0, xs1) in _SIMON2_EVAL.items():
        pair = {k: 1.0, _SIMON2_COMPLEMENT[k]: 1.0}
        terms.append((SIMON_C, pair, _plus(*xs0), ZERO))
        terms.append((SIMON_C, pair, _plus(*xs1), ONE))
    return assemble(SIMON2_K, 2, 1, terms)


REFERENCE_STATES = {
    "grover2": (grover2_prepared, grover2_evaluated, grover2_final),
    "deutsch": (deutsch_prepared, deutsch_evaluated, deutsch_final),
    "dj2": (dj2_prepared, dj2_evaluated, dj2_final),
    "simon2": (simon2_prepared, simon2_evaluated, simon2_final),
}
