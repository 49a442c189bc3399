"""Sum-over-histories reconstruction of the oracle-call stage.

A history is one sharp run of the classical algorithm that is told half of
``k`` up front and performs the query still needed. Giving each history a
phase and superposing them reproduces the quantum state before and after the
oracle call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import CancellationError, DegenerateProblemError, UnsupportedDepthError
from .families import FunctionFamily
from .query import AdvancedInfo, Mode, Search, advanced_query_complexity, default_mode, enumerate_halves
from .state import (
    RegisterLayout,
    StateVector,
    VPreparation,
    bits,
    entanglement_entropy,
    log_negativity,
)


@dataclass(frozen=True)
class History:
    advanced: AdvancedInfo | None
    computed: tuple[int, int]
    v_initial: int
    k_label: str
    phase: complex = 1.0
    row: str = ""


@dataclass(frozen=True)
class HistoryBundle:
    histories: tuple[History, ...]
    target_layout: RegisterLayout
    family: FunctionFamily

    def __post_init__(self):
        if not self.histories:
            raise ValueError("a history bundle cannot be empty")

    def __len__(self) -> int:
        return len(self.histories)


def _layout(family: FunctionFamily) -> RegisterLayout:
    return RegisterLayout.extended(family.k_labels, family.x_bits, family.v_bits)


def enumerate_histories(family: FunctionFamily, mode: Mode | str | None = None) -> HistoryBundle:
    """One history per (open half, consistent member, initial V string).

    Only problems whose open halves need exactly one query are supported. When
    every half already settles the solution, each half gets a single
    confirming query at the lowest unrevealed row.
    """
    mode = default_mode(family) if mode is None else Mode(mode)
    search = Search(family)
    try:
        adv = advanced_query_complexity(family, mode, search)
        if adv.depth != 1:
            raise UnsupportedDepthError(f"{family.name}: open halves need {adv.depth} queries; only 1 is supported")
        halves = [h for h, d in adv.per_half.items() if d is not None]
        degenerate = False
    except DegenerateProblemError:
        halves = enumerate_halves(family, mode)
        degenerate = True

    out = []
    row = 0
    n_v = 1 << family.v_bits
    for half in halves:
        members = [f for f in family.members if half.consistent(f)]
        if degenerate:
            revealed = set(half.positions) if mode is Mode.ROW_HALF else set()
            x = next((r for r in range(1 << family.x_bits) if r not in revealed), 0)
        else:
            x = search.best_query(search.mask_of(members))
        members.sort(key=lambda f: (f(x), family.index(f.k_label)))
        last_result = None
        for f in members:
            if f(x) != last_result:
                row += 1
                sub = 0
                last_result = f(x)
            for v in range(n_v):
                sub += 1
                out.append(History(half, (x, f(x)), v, f.k_label, 1.0, f"{row}.{sub}"))
    return HistoryBundle(tuple(out), _layout(family), family)


def v_phase(vprep: VPreparation, v: int, v_bits: int) -> complex:
    """Unnormalized amplitude of the V string ``v`` in the per-qubit preparation."""
    phase = 1.0 + 0j
    for ch in bits(v, v_bits):
        phase *= vprep.coefficient(int(ch))
    return phase


def assign_phases(bundle: HistoryBundle, vprep: VPreparation) -> HistoryBundle:
    v_bits = bundle.family.v_bits
    hs = tuple(
        History(h.advanced, h.computed, h.v_initial, h.k_label, v_phase(vprep, h.v_initial, v_bits), h.row)
        for h in bundle.histories
    )
    return HistoryBundle(hs, bundle.target_layout, bundle.family)


def sum_histories(bundle: HistoryBundle, stage: str = "initial") -> StateVector:
    """Superpose the sharp states of all histories at ``stage`` and normalize."""
    if stage not in ("initial", "after_evaluation"):
        raise ValueError(f"unknown stage {stage!r}")
    family, layout = bundle.family, bundle.target_layout
    amps = np.zeros(layout.dims, dtype=complex)
    for h in bundle.histories:
        k = family.index(h.k_label)
        x, _ = h.computed
        v = h.v_initial
        if stage == "after_evaluation":
            v ^= family.members[k](x)
        amps[k, x, v] += h.phase
    norm = np.linalg.norm(amps)
    if norm <= 1e-12:
        raise CancellationError("history amplitudes cancel to the zero vector")
    return StateVector(layout, amps / norm)


def shortcut_bundle(family: FunctionFamily, vprep: VPreparation) -> HistoryBundle:
    """Histories evaluating every row for every member, wanted or not."""
    hs = []
    for f in family.members:
        for x in range(1 << family.x_bits):
            for v in range(1 << family.v_bits):
                hs.append(History(None, (x, f(x)), v, f.k_label, v_phase(vprep, v, family.v_bits)))
    return HistoryBundle(tuple(hs), _layout(family), family)


def history_table(bundle: HistoryBundle) -> list[str]:
    """TSV rows: row, advanced information, query result, k, initial V, phase."""
    family = bundle.family
    lines = ["row\tadvanced\tevaluation\tk\tv_initial\tphase"]
    for h in bundle.histories:
        adv = h.advanced.describe(family.x_bits) if h.advanced is not None else "-"
        x, val = h.computed
        ev = f"f({bits(x, family.x_bits)})={bits(val, family.v_bits)}"
        lines.append(
            f"{h.row or '-'}\t{adv}\t{ev}\t{h.k_label}\t{bits(h.v_initial, family.v_bits)}\t{_fmt_phase(h.phase)}"
        )
    return lines


def _fmt_phase(p: complex) -> str:
    p = complex(p)
    if abs(p.imag) < 1e-12:
        return f"{p.real:+.6g}"
    return f"{p.real:+.6g}{p.imag:+.6g}j"


def vprep_at(theta_deg: float, basis: str = "symmetric") -> VPreparation:
    """``(alpha, beta) = (cos theta, sin theta)`` in the chosen V parameterization.

    "symmetric": ``alpha(|0>+|1>) + beta(|0>-|1>)``; "computational": ``alpha|0> + beta|1>``.
    """
    a, b = math.cos(math.radians(theta_deg)), math.sin(math.radians(theta_deg))
    if basis == "symmetric":
        return VPreparation(a, b)
    if basis == "computational":
        return VPreparation.computational(a, b)
    raise ValueError(f"unknown basis {basis!r}")


def entanglement_after_evaluation(
    family: FunctionFamily, theta_deg: float, basis: str = "symmetric", measure: str = "entropy"
) -> float:
    """Entanglement of the post-evaluation history sum at one V angle.

    ``entropy``: von Neumann entropy of K against X and V together.
    ``negativity``: logarithmic negativity between K and X with V traced out.
    """
    amps = sum_histories(shortcut_bundle(family, vprep_at(theta_deg, basis)), "after_evaluation")
    if measure == "entropy":
        return entanglement_entropy(amps, {"K"})
    if measure == "negativity":
        return log_negativity(amps, "K", "X")
    raise ValueError(f"unknown measure {measure!r}")


def entanglement_curve(
    family: FunctionFamily, degrees: Iterable[float] | None = None, basis: str = "symmetric", measure: str = "entropy"
) -> tuple[np.ndarray, np.ndarray]:
    degrees = np.arange(0.0, 180.0, 1.0) if degrees is None else np.asarray(list(degrees), dtype=float)
    values = np.array([entanglement_after_evaluation(family, t, basis, measure) for t in degrees])
    return degrees, values


def maximize_entanglement(
    family: FunctionFamily, basis: str = "symmetric", measure: str = "entropy", step: float = 1.0
) -> tuple[float, float]:
    """Grid search over theta in [0, 180) then bounded refinement to 1e-6 degrees."""
    degrees, values = entanglement_curve(family, np.arange(0.0, 180.0, step), basis, measure)
    best = float(degrees[int(np.argmax(values))])
    res = minimize_scalar(
        lambda t: -entanglement_after_evaluation(family, t, basis, measure),
        bounds=(best - step, best + step),
        method="bounded",
        options={"xatol": 1e-6},
    )
    theta, value = float(res.x), -float(res.fun)
    if value < values.max():
        theta, value = best, float(values.max())
    return theta % 180.0, value
