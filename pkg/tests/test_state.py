import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qspeedup import reference
from qspeedup.errors import (
    DegeneratePreparationError,
    ImpossibleOutcomeError,
    LayoutError,
    NormalizationError,
    PartitionError,
    UnitarityError,
)
from qspeedup.families import FunctionFamily, OracleFunction, builtin
from qspeedup.state import (
    PhaseAssignment,
    RegisterLayout,
    StateVector,
    VPreparation,
    apply_on_register,
    apply_oracle,
    collapse,
    conditional_distribution,
    entanglement_entropy,
    hadamard,
    measure_distribution,
    overlap,
    prepare_extended,
    states_equal_up_to_phase,
)


def layout_of(family):
    return RegisterLayout.extended(family.k_labels, family.x_bits, family.v_bits)


def test_layout_dims_follow_family_size():
    layout = layout_of(builtin("simon3"))
    assert layout.dims == (168, 8, 4)
    assert layout.total == 168 * 32


def test_layout_rejects_bad_dimensions():
    with pytest.raises(LayoutError):
        RegisterLayout((("K", 2), ("X", 3), ("V", 2)), 1, 1)
    with pytest.raises(LayoutError):
        RegisterLayout((("X", 2), ("K", 2), ("V", 2)), 1, 1)
    with pytest.raises(LayoutError):
        RegisterLayout((("K", 0), ("X", 2), ("V", 2)), 1, 1)


def test_basis_index_is_k_then_x_then_v_msb_first():
    state = reference.grover2_prepared()
    assert state.basis_labels(0) == ("00", "00", "0")
    assert state.basis_labels(1) == ("00", "00", "1")
    assert state.basis_labels(2) == ("00", "01", "0")
    assert state.basis_labels(8) == ("01", "00", "0")


def test_grover_preparation_amplitudes():
    psi = prepare_extended(layout_of(builtin("grover2")), VPreparation.antisymmetric())
    amps = psi.tensor
    assert np.allclose(np.abs(amps), 1 / (4 * math.sqrt(2)))
    assert np.all(amps[:, :, 0].real > 0) and np.all(amps[:, :, 1].real < 0)
    assert states_equal_up_to_phase(psi, reference.grover2_prepared())


def test_single_member_symmetric_preparation():
    psi = prepare_extended(RegisterLayout.extended(1, 0, 1), VPreparation.symmetric())
    assert np.allclose(psi.amplitudes, [1 / math.sqrt(2)] * 2)


def test_deutsch_preparation_matches_published_state():
    psi = prepare_extended(layout_of(builtin("deutsch")), VPreparation.antisymmetric())
    assert np.allclose(np.abs(psi.amplitudes), 0.25)
    assert overlap(psi, reference.deutsch_prepared()) == pytest.approx(1.0, abs=1e-12)


def test_zero_preparation_is_rejected():
    with pytest.raises(DegeneratePreparationError):
        VPreparation(0, 0)


def test_computational_parameterization():
    prep = VPreparation.computational(0.6, 0.8)
    assert np.allclose(prep.qubit_amplitudes(), [0.6, 0.8])
    assert VPreparation.zero().coefficient(1) == 0


@pytest.mark.parametrize(
    "name, before, after",
    [("deutsch", reference.deutsch_prepared, reference.deutsch_evaluated), ("grover2", reference.grover2_prepared, reference.grover2_evaluated)],
)
def test_oracle_reproduces_published_evaluation(name, before, after):
    out = apply_oracle(before(), builtin(name))
    assert states_equal_up_to_phase(out, after())


def test_constant_zero_oracle_is_identity():
    family = FunctionFamily("zero", 1, 1, (OracleFunction("0", (0, 0), 1, 1),), {"0": "0"})
    psi = prepare_extended(layout_of(family), VPreparation(0.3, 0.7j))
    assert np.array_equal(apply_oracle(psi, family).amplitudes, psi.amplitudes)


def test_oracle_layout_mismatch():
    with pytest.raises(LayoutError):
        apply_oracle(reference.grover2_prepared(), builtin("deutsch"))


def test_hadamard_readout_and_identity():
    evaluated = reference.deutsch_evaluated()
    assert states_equal_up_to_phase(apply_on_register(evaluated, "X", hadamard(1)), reference.deutsch_final())
    assert np.array_equal(apply_on_register(evaluated, "X", np.eye(2)).amplitudes, evaluated.amplitudes)


def test_non_unitary_matrix_is_rejected():
    with pytest.raises(UnitarityError):
        apply_on_register(reference.deutsch_evaluated(), "X", np.array([[1, 1], [0, 1]]))


def test_measurement_distributions():
    final = reference.grover2_final()
    assert measure_distribution(final, "K") == pytest.approx({k: 0.25 for k in ("00", "01", "10", "11")})
    sharp = np.zeros(32)
    sharp[0] = 1
    assert measure_distribution(StateVector(final.layout, sharp), "X") == {"00": 1.0}


def test_simon_readout_support_is_orthogonal_to_period():
    cond = conditional_distribution(reference.simon2_final(), "K", "X")
    assert set(cond["0011"]) <= {"00", "10"}


def test_unnormalized_state_is_rejected():
    with pytest.raises(NormalizationError):
        measure_distribution(StateVector(RegisterLayout.extended(1, 1, 1), np.ones(4)), "X")


def test_collapse():
    psi = collapse(reference.grover2_final(), "K", "01")
    assert measure_distribution(psi, "X") == pytest.approx({"01": 1.0})
    assert np.allclose(collapse(psi, "K", "01").amplitudes, psi.amplitudes)
    with pytest.raises(ImpossibleOutcomeError):
        collapse(psi, "K", "10")


def test_collapsed_simon_preparation_is_single_member_run():
    psi = collapse(reference.simon2_prepared(), "K", "0011")
    assert measure_distribution(psi, "K") == pytest.approx({"0011": 1.0})
    assert measure_distribution(psi, "X") == pytest.approx({x: 0.25 for x in ("00", "01", "10", "11")})


def test_entanglement_entropy_examples():
    assert entanglement_entropy(reference.grover2_prepared(), {"K"}) == pytest.approx(0.0, abs=1e-9)
    assert entanglement_entropy(reference.grover2_final(), {"K"}) == pytest.approx(2.0)
    assert entanglement_entropy(reference.deutsch_evaluated(), {"K"}) == pytest.approx(1.0)
    with pytest.raises(PartitionError):
        entanglement_entropy(reference.deutsch_evaluated(), {"K", "X", "V"})


def test_entropy_is_symmetric_in_the_bipartition():
    psi = reference.grover2_evaluated()
    assert entanglement_entropy(psi, {"K"}) == pytest.approx(entanglement_entropy(psi, {"X", "V"}), abs=1e-9)


def test_equality_up_to_global_phase():
    psi = reference.deutsch_final()
    assert states_equal_up_to_phase(psi, psi.with_amplitudes(cmath.exp(1j * math.pi / 3) * psi.amplitudes))
    layout = RegisterLayout.extended(1, 0, 1)
    assert not states_equal_up_to_phase(StateVector(layout, [1, 0]), StateVector(layout, [0, 1]))
    with pytest.raises(LayoutError):
        overlap(psi, reference.grover2_final())


@settings(max_examples=40, deadline=None)
@given(
    size=st.integers(1, 6),
    x_bits=st.integers(0, 2),
    v_bits=st.integers(1, 2),
    seed=st.integers(0, 2**32 - 1),
)
def test_oracle_involution_and_norm(size, x_bits, v_bits, seed):
    rng = np.random.default_rng(seed)
    members = tuple(
        OracleFunction(f"{i:03b}", tuple(int(v) for v in rng.integers(0, 1 << v_bits, 1 << x_bits)), x_bits, v_bits)
        for i in range(size)
    )
    family = FunctionFamily("fuzz", x_bits, v_bits, members, {f.k_label: "0" for f in members})
    prep = VPreparation(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
    psi = prepare_extended(layout_of(family), prep, PhaseAssignment.random(size, rng))
    once = apply_oracle(psi, family)
    assert once.is_normalized()
    assert np.allclose(apply_oracle(once, family).amplitudes, psi.amplitudes, atol=1e-12)


def test_untouched_register_marginals_are_invariant():
    psi = reference.dj2_evaluated()
    rotated = apply_on_register(psi, "X", hadamard(2))
    for reg in ("K", "V"):
        before, after = measure_distribution(psi, reg), measure_distribution(rotated, reg)
        assert before == pytest.approx(after, abs=1e-12)
