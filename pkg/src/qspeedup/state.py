"""Dense state vectors over the oracle-choice (K), query (X) and result (V) registers.

The amplitude index is ``(k_index, x, v)`` in row-major order. Bit strings in
X and V are read left to right with the leftmost bit most significant. K is
indexed by family member, so its dimension is the family size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Mapping

import numpy as np

from .errors import (
    DegeneratePreparationError,
    ImpossibleOutcomeError,
    LayoutError,
    NormalizationError,
    PartitionError,
    UnitarityError,
)

if TYPE_CHECKING:
    from .families import FunctionFamily

TOL = 1e-9
SCHMIDT_CUTOFF = 1e-12


def bits(value: int, width: int) -> str:
    """Render ``value`` as a ``width``-bit string, most significant bit first."""
    return format(value, f"0{width}b") if width > 0 else ""


def hadamard(n_bits: int) -> np.ndarray:
    """The n-fold tensor power of the Hadamard gate."""
    dim = 1 << n_bits
    idx = np.arange(dim)
    parity = np.array([[bin(i & j).count("1") & 1 for j in idx] for i in idx])
    return (1.0 - 2.0 * parity) / math.sqrt(dim) + 0j


def is_unitary(matrix: np.ndarray, tol: float = TOL) -> bool:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


@dataclass(frozen=True)
class RegisterLayout:
    registers: tuple[tuple[str, int], ...]
    x_bits: int
    v_bits: int
    k_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        names = [name for name, _ in self.registers]
        if len(set(names)) != len(names):
            raise LayoutError(f"duplicate register names in {names}")
        for name, dim in self.registers:
            if dim < 1:
                raise LayoutError(f"register {name} has dimension {dim}")
        roles = [n for n in names if n in ("K", "X", "V")]
        if roles != sorted(roles, key="KXV".index):
            raise LayoutError("registers must be ordered K, X, V")
        dims = dict(self.registers)
        if "X" in dims and dims["X"] != 1 << self.x_bits:
            raise LayoutError(f"X has dimension {dims['X']}, expected 2^{self.x_bits}")
        if "V" in dims and dims["V"] != 1 << self.v_bits:
            raise LayoutError(f"V has dimension {dims['V']}, expected 2^{self.v_bits}")
        if self.k_labels is not None and len(self.k_labels) != dims.get("K", -1):
            raise LayoutError("k_labels must name every K basis state")

    @classmethod
    def extended(cls, k: int | Iterable[str], x_bits: int, v_bits: int) -> RegisterLayout:
        """K, X, V layout. ``k`` is either the family size or the member labels."""
        labels = None
        if not isinstance(k, int):
            labels = tuple(k)
            k = len(labels)
        return cls((("K", k), ("X", 1 << x_bits), ("V", 1 << v_bits)), x_bits, v_bits, labels)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.registers)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.registers)

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise LayoutError(f"no register named {name!r}") from None

    def dim(self, name: str) -> int:
        return self.dims[self.axis(name)]

    def labels(self, name: str) -> list[str]:
        """Basis labels of a register in index order."""
        dim = self.dim(name)
        if name == "K" and self.k_labels is not None:
            return list(self.k_labels)
        if name == "X":
            return [bits(i, self.x_bits) for i in range(dim)]
        if name == "V":
            return [bits(i, self.v_bits) for i in range(dim)]
        return [str(i) for i in range(dim)]

    def label_index(self, name: str, label: str | int) -> int:
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.dim(name):
                raise LayoutError(f"index {label} out of range for register {name}")
            return int(label)
        try:
            return self.labels(name).index(label)
        except ValueError:
            raise LayoutError(f"{label!r} is not a basis label of register {name}") from None


@dataclass(frozen=True, eq=False)
class StateVector:
    layout: RegisterLayout
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.layout.total:
            raise LayoutError(f"{amps.size} amplitudes for a layout of dimension {self.layout.total}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.dims)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = TOL) -> bool:
        return abs(self.norm**2 - 1.0) <= tol

    def normalized(self) -> StateVector:
        n = self.norm
        if n == 0:
            raise NormalizationError("cannot normalize the zero vector")
        return StateVector(self.layout, self.amplitudes / n)

    def with_amplitudes(self, amps: np.ndarray) -> StateVector:
        return StateVector(self.layout, amps)

    def basis_labels(self, index: int) -> tuple[str, ...]:
        coords = np.unravel_index(index, self.layout.dims)
        return tuple(self.layout.labels(name)[c] for name, c in zip(self.layout.names, coords))


@dataclass(frozen=True)
class VPreparation:
    """Per-qubit V state ``alpha(|0>+|1>) + beta(|0>-|1>)``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        if abs(self.alpha) ** 2 + abs(self.beta) ** 2 <= 0:
            raise DegeneratePreparationError("alpha and beta are both zero")

    @classmethod
    def symmetric(cls) -> VPreparation:
        return cls(1, 0)

    @classmethod
    def antisymmetric(cls) -> VPreparation:
        return cls(0, 1)

    @classmethod
    def computational(cls, a0: complex, a1: complex) -> VPreparation:
        """Build from computational-basis coefficients ``a0|0> + a1|1>``."""
        return cls((a0 + a1) / 2, (a0 - a1) / 2)

    @classmethod
    def zero(cls) -> VPreparation:
        return cls.computational(1, 0)

    def coefficient(self, bit: int) -> complex:
        """Unnormalized amplitude of ``|bit>`` in the single-qubit state."""
        return self.alpha + self.beta if bit == 0 else self.alpha - self.beta

    def qubit_amplitudes(self) -> np.ndarray:
        amps = np.array([self.coefficient(0), self.coefficient(1)], dtype=complex)
        return amps / np.linalg.norm(amps)

    def register_amplitudes(self, v_bits: int) -> np.ndarray:
        out = np.ones(1, dtype=complex)
        for _ in range(v_bits):
            out = np.kron(out, self.qubit_amplitudes())
        return out

    def is_antisymmetric(self, tol: float = TOL) -> bool:
        return abs(self.alpha) <= tol * max(abs(self.beta), 1.0)


@dataclass(frozen=True)
class PhaseAssignment:
    phases: Mapping[int, float]

    def __post_init__(self):
        for k, angle in self.phases.items():
            if not math.isfinite(angle):
                raise ValueError(f"phase for k={k} is not finite")

    @classmethod
    def uniform(cls) -> PhaseAssignment:
        return cls({})

    @classmethod
    def random(cls, k_dim: int, rng: np.random.Generator) -> PhaseAssignment:
        return cls({k: float(a) for k, a in enumerate(rng.uniform(0.0, 2 * math.pi, k_dim))})

    def amplitudes(self, k_dim: int) -> np.ndarray:
        return np.exp(1j * np.array([self.phases.get(k, 0.0) for k in range(k_dim)]))


def _require_kxv(layout: RegisterLayout) -> None:
    if layout.names != ("K", "X", "V"):
        raise LayoutError(f"expected registers K, X, V; got {layout.names}")


def prepare_extended(
    layout: RegisterLayout,
    vprep: VPreparation | None = None,
    kphases: PhaseAssignment | None = None,
) -> StateVector:
    """Even superposition over K and X, V prepared qubit by qubit from ``vprep``."""
    _require_kxv(layout)
    vprep = vprep if vprep is not None else VPreparation.antisymmetric()
    kphases = kphases if kphases is not None else PhaseAssignment.uniform()
    k_dim, x_dim, _ = layout.dims
    k_amps = kphases.amplitudes(k_dim) / math.sqrt(k_dim)
    x_amps = np.full(x_dim, 1 / math.sqrt(x_dim), dtype=complex)
    amps = np.kron(np.kron(k_amps, x_amps), vprep.register_amplitudes(layout.v_bits))
    return StateVector(layout, amps)


def apply_oracle(state: StateVector, family: FunctionFamily) -> StateVector:
    """Map each basis state ``|k, x, v>`` to ``|k, x, v XOR f_k(x)>``."""
    layout = state.layout
    _require_kxv(layout)
    if family.x_bits != layout.x_bits or family.v_bits != layout.v_bits:
        raise LayoutError(
            f"family {family.name} has x_bits={family.x_bits}, v_bits={family.v_bits}; "
            f"layout has {layout.x_bits}, {layout.v_bits}"
        )
    if len(family) != layout.dim("K"):
        raise LayoutError(f"family {family.name} has {len(family)} members, K has dimension {layout.dim('K')}")
    amps = state.tensor
    values = family.value_array()
    target = np.arange(layout.dim("V"))[None, None, :] ^ values[:, :, None]
    out = np.empty_like(amps)
    np.put_along_axis(out, target, amps, axis=2)
    return state.with_amplitudes(out)


def apply_on_register(state: StateVector, register: str, unitary: np.ndarray) -> StateVector:
    layout = state.layout
    axis = layout.axis(register)
    u = np.asarray(unitary, dtype=complex)
    if u.shape != (layout.dims[axis],) * 2:
        raise LayoutError(f"matrix shape {u.shape} does not fit register {register} of dimension {layout.dims[axis]}")
    if not is_unitary(u):
        raise UnitarityError(f"matrix applied to {register} is not unitary within {TOL}")
    amps = np.moveaxis(state.tensor, axis, 0)
    out = np.tensordot(u, amps, axes=(1, 0))
    return state.with_amplitudes(np.moveaxis(out, 0, axis))


def _require_normalized(state: StateVector) -> None:
    if not state.is_normalized():
        raise NormalizationError(f"state norm^2 is {state.norm ** 2:.12g}, expected 1")


def _marginal(state: StateVector, register: str) -> np.ndarray:
    axis = state.layout.axis(register)
    probs = np.abs(state.tensor) ** 2
    other = tuple(i for i in range(probs.ndim) if i != axis)
    return probs.sum(axis=other)


def measure_distribution(state: StateVector, register: str) -> dict[str, float]:
    """Born-rule marginal over the basis labels of ``register`` (zero entries omitted)."""
    _require_normalized(state)
    probs = _marginal(state, register)
    labels = state.layout.labels(register)
    return {labels[i]: float(p) for i, p in enumerate(probs) if p > 0}


def conditional_distribution(state: StateVector, given: str, register: str) -> dict[str, dict[str, float]]:
    """Distribution of ``register`` conditioned on each outcome of ``given``."""
    _require_normalized(state)
    layout = state.layout
    ga, ra = layout.axis(given), layout.axis(register)
    probs = np.abs(state.tensor) ** 2
    other = tuple(i for i in range(probs.ndim) if i not in (ga, ra))
    joint = probs.sum(axis=other)
    if ga > ra:
        joint = joint.T
    g_labels, r_labels = layout.labels(given), layout.labels(register)
    out = {}
    for i, row in enumerate(joint):
        total = row.sum()
        if total <= 0:
            continue
        out[g_labels[i]] = {r_labels[j]: float(p / total) for j, p in enumerate(row) if p > 0}
    return out


def collapse(state: StateVector, register: str, outcome: str | int) -> StateVector:
    layout = state.layout
    axis = layout.axis(register)
    idx = layout.label_index(register, outcome)
    mask = np.zeros(layout.dims[axis])
    mask[idx] = 1.0
    shape = [1] * len(layout.dims)
    shape[axis] = -1
    projected = state.tensor * mask.reshape(shape)
    n = np.linalg.norm(projected)
    if n <= 1e-12:
        raise ImpossibleOutcomeError(f"outcome {outcome!r} of register {register} has zero probability")
    return state.with_amplitudes(projected / n)


def _bipartition(state: StateVector, partition: Iterable[str]) -> np.ndarray:
    layout = state.layout
    part = set(partition)
    unknown = part - set(layout.names)
    if unknown:
        raise PartitionError(f"unknown registers {sorted(unknown)}")
    if not part or part == set(layout.names):
        raise PartitionError("partition must be a nonempty proper subset of the registers")
    left = [layout.axis(n) for n in layout.names if n in part]
    right = [layout.axis(n) for n in layout.names if n not in part]
    dl = math.prod(layout.dims[i] for i in left)
    return np.transpose(state.tensor, left + right).reshape(dl, -1)


def schmidt_coefficients(state: StateVector, partition: Iterable[str]) -> np.ndarray:
    s = np.linalg.svd(_bipartition(state, partition), compute_uv=False)
    return s[s >= SCHMIDT_CUTOFF]


def entanglement_entropy(state: StateVector, partition: Iterable[str]) -> float:
    """Von Neumann entropy in bits of the reduced state on ``partition``."""
    _require_normalized(state)
    p = schmidt_coefficients(state, partition) ** 2
    return float(max(0.0, -np.sum(p * np.log2(p))))


def log_negativity(state: StateVector, a: str, b: str) -> float:
    """Logarithmic negativity between registers ``a`` and ``b``, other registers traced out."""
    _require_normalized(state)
    layout = state.layout
    if a == b:
        raise PartitionError("registers must differ")
    ia, ib = layout.axis(a), layout.axis(b)
    rest = [i for i in range(len(layout.dims)) if i not in (ia, ib)]
    da, db = layout.dims[ia], layout.dims[ib]
    amps = np.transpose(state.tensor, [ia, ib] + rest).reshape(da, db, -1)
    rho = np.einsum("abr,cdr->abcd", amps, amps.conj())
    pt = rho.transpose(0, 3, 2, 1).reshape(da * db, da * db)
    trace_norm = np.sum(np.abs(np.linalg.eigvalsh(pt)))
    return float(math.log2(trace_norm))


def overlap(a: StateVector, b: StateVector) -> float:
    """``|<a|b>|`` after normalizing both states."""
    if a.layout.dims != b.layout.dims or a.layout.names != b.layout.names:
        raise LayoutError("states have different layouts")
    na, nb = a.norm, b.norm
    if na == 0 or nb == 0:
        return 0.0
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) / (na * nb))


def states_equal_up_to_phase(a: StateVector, b: StateVector, tol: float = TOL) -> bool:
    return overlap(a, b) >= 1 - tol


def canonical_phase(state: StateVector, tol: float = 1e-12) -> StateVector:
    """Rotate the global phase so the first nonzero amplitude is real positive."""
    amps = state.amplitudes
    nz = np.flatnonzero(np.abs(amps) > tol)
    if nz.size == 0:
        return state
    first = amps[nz[0]]
    return state.with_amplitudes(amps * (abs(first) / first))
