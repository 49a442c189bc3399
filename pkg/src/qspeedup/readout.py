"""Readout rotations on X built from the K-X correlation requirement.

After one oracle call, every solution label owns a state of X. If those states
are orthogonal, the unitary that sends each of them to its target basis string
turns the K-X entanglement into perfectly correlated K and X measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import LabelIncoherenceError, SeparationError, UnitarityError
from .families import FunctionFamily
from .state import (
    TOL,
    StateVector,
    apply_on_register,
    bits,
    conditional_distribution,
    hadamard,
    is_unitary,
)


@dataclass(frozen=True, eq=False)
class ReadoutUnitary:
    matrix: np.ndarray = field(repr=False)
    label_map: Mapping[str, str]

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if not is_unitary(m):
            raise UnitarityError("readout matrix is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def _phase_fixed(vec: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(vec) > 1e-12)
    if nz.size == 0:
        return vec
    first = vec[nz[0]]
    return vec * (abs(first) / first)


def v_factor(state: StateVector) -> np.ndarray:
    """The common V state, if V factors out of the state exactly."""
    amps = state.tensor
    k, x, v = amps.shape
    m = amps.reshape(k * x, v)
    _, s, vh = np.linalg.svd(m, full_matrices=False)
    if s.size > 1 and s[1] > TOL * s[0]:
        raise SeparationError("V is entangled with K and X; a basis change on X alone cannot read the solution")
    return _phase_fixed(vh[0])


def conditional_x_states(
    state: StateVector, family: FunctionFamily, labels: Mapping[str, str] | None = None
) -> dict[str, np.ndarray]:
    """Normalized X state shared by all members with the same label.

    ``labels`` defaults to :meth:`FunctionFamily.readout_labels`.
    """
    labels = family.readout_labels() if labels is None else labels
    v = v_factor(state)
    amps = state.tensor
    groups: dict[str, np.ndarray] = {}
    for i, k in enumerate(family.k_labels):
        vec = amps[i] @ v.conj()
        n = np.linalg.norm(vec)
        if n <= 1e-12:
            continue
        vec = vec / n
        label = labels[k]
        if label not in groups:
            groups[label] = vec
        elif abs(np.vdot(groups[label], vec)) < 1 - TOL:
            raise LabelIncoherenceError(f"members with label {label} carry different X states (k={k})")
    ordered = dict(sorted(groups.items()))
    _require_orthogonal(ordered)
    return ordered


def _require_orthogonal(conditionals: Mapping[str, np.ndarray]) -> None:
    items = list(conditionals.items())
    for i, (la, a) in enumerate(items):
        for lb, b in items[i + 1:]:
            ov = abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))
            if ov > TOL:
                raise SeparationError(
                    f"X states for labels {la} and {lb} overlap by {ov:.6f}; "
                    "one evaluation does not separate the solutions"
                )


def default_label_map(labels, x_bits: int) -> dict[str, str]:
    labels = sorted(labels)
    if all(len(label) == x_bits for label in labels):
        return {label: label for label in labels}
    return {label: bits(i, x_bits) for i, label in enumerate(labels)}


def synthesize_readout(
    conditionals: Mapping[str, np.ndarray], label_map: Mapping[str, str] | None = None
) -> ReadoutUnitary:
    """Unitary mapping each conditional state to the basis string of its label.

    Rows not fixed by a conditional are completed from the computational basis
    vectors in increasing order, orthonormalized against the accepted ones.
    """
    if not conditionals:
        raise SeparationError("no conditional states to separate")
    _require_orthogonal(conditionals)
    dim = len(next(iter(conditionals.values())))
    x_bits = int(round(math.log2(dim)))
    label_map = dict(label_map) if label_map is not None else default_label_map(conditionals, x_bits)
    targets = [label_map[label] for label in conditionals]
    if len(set(targets)) != len(targets):
        raise ValueError("label_map must be injective")
    rows = np.zeros((dim, dim), dtype=complex)
    accepted = []
    for label, vec in conditionals.items():
        t = int(label_map[label], 2)
        c = _phase_fixed(np.asarray(vec, dtype=complex) / np.linalg.norm(vec))
        rows[t] = c.conj()
        accepted.append(c)
    free = [t for t in range(dim) if bits(t, x_bits) not in set(targets)]
    for j in range(dim):
        if not free:
            break
        w = np.zeros(dim, dtype=complex)
        w[j] = 1.0
        for u in accepted:
            w = w - np.vdot(u, w) * u
        n = np.linalg.norm(w)
        if n > 1e-9:
            c = _phase_fixed(w / n)
            accepted.append(c)
            rows[free.pop(0)] = c.conj()
    return ReadoutUnitary(rows, label_map)


def verify_correlation(
    state: StateVector,
    readout: ReadoutUnitary,
    family: FunctionFamily,
    labels: Mapping[str, str] | None = None,
) -> bool:
    """After ``readout`` on X, each K outcome fixes X to its label's target."""
    labels = family.readout_labels() if labels is None else labels
    after = apply_on_register(state, "X", readout.matrix)
    cond = conditional_distribution(after, "K", "X")
    for k, dist in cond.items():
        target = readout.label_map.get(labels[k])
        if target is None or dist.get(target, 0.0) < 1 - TOL:
            return False
    return True


def phase_flip_zero(x_bits: int) -> np.ndarray:
    """Phase kicked back by computing ``delta(0, x)`` into an antisymmetric V."""
    d = np.ones(1 << x_bits, dtype=complex)
    d[0] = -1
    return np.diag(d)


def grover_rotation(x_bits: int) -> np.ndarray:
    h = hadamard(x_bits)
    return h @ phase_flip_zero(x_bits) @ h


def swap_basis(x_bits: int, a: str, b: str) -> np.ndarray:
    perm = np.eye(1 << x_bits, dtype=complex)
    i, j = int(a, 2), int(b, 2)
    perm[[i, j]] = perm[[j, i]]
    return perm
