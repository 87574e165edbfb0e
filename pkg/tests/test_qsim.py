"""State-vector simulator: gates, Born-rule measurement, collapse."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcontract.qsim import (
    AMP_TOL,
    CNOT,
    CorruptStateError,
    H,
    StateVector,
    X,
    apply_gate,
    get_amplitudes,
    measure_qubit,
    new_state,
    prepare_xor_resource,
    probability_of_one,
    resource_prep_gates,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _amps(state: StateVector) -> np.ndarray:
    return np.asarray(get_amplitudes(state))


class TestStateConstruction:
    def test_new_state_is_all_zeros_ket(self):
        state = new_state(3)
        amps = _amps(state)
        assert amps[0] == 1.0
        assert np.all(amps[1:] == 0.0)
        assert abs(state.norm() - 1.0) < AMP_TOL

    @pytest.mark.parametrize("bad", [0, -1, 9, 100])
    def test_new_state_rejects_bad_qubit_count(self, bad):
        with pytest.raises(ValueError):
            new_state(bad)

    def test_state_vector_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            StateVector(2, np.ones(3, dtype=complex))

    def test_amplitude_buffer_is_read_only(self):
        state = new_state(2)
        with pytest.raises(ValueError):
            state.amplitudes[0] = 0.0

    def test_get_amplitudes_returns_detached_copy(self):
        state = new_state(1)
        amps = get_amplitudes(state)
        amps[0] = 123.0
        assert state.amplitudes[0] == 1.0


class TestGates:
    def test_h_creates_equal_superposition(self):
        state = apply_gate(new_state(1), H(0))
        assert np.allclose(_amps(state), [INV_SQRT2, INV_SQRT2], atol=AMP_TOL)

    def test_h_picks_up_phase_on_one(self):
        state = apply_gate(new_state(1), X(0))
        state = apply_gate(state, H(0))
        assert np.allclose(_amps(state), [INV_SQRT2, -INV_SQRT2], atol=AMP_TOL)

    def test_x_flips_most_significant_qubit(self):
        # big-endian: qubit 0 owns the top bit, so X(0) on |00> gives |10>
        state = apply_gate(new_state(2), X(0))
        assert _amps(state)[0b10] == 1.0

    def test_x_flips_least_significant_qubit(self):
        state = apply_gate(new_state(2), X(1))
        assert _amps(state)[0b01] == 1.0

    def test_cnot_fires_only_when_control_set(self):
        idle = apply_gate(new_state(2), CNOT(control=0, target=1))
        assert _amps(idle)[0b00] == 1.0

        armed = apply_gate(new_state(2), X(0))
        fired = apply_gate(armed, CNOT(control=0, target=1))
        assert _amps(fired)[0b11] == 1.0

    def test_cnot_direction_matters(self):
        state = apply_gate(new_state(2), X(1))
        state = apply_gate(state, CNOT(control=0, target=1))
        # control qubit 0 is |0>, so nothing happens
        assert _amps(state)[0b01] == 1.0

    @pytest.mark.parametrize("gate", [H(0), X(0), CNOT(0, 1)])
    def test_self_inverse_gates_round_trip(self, gate):
        state = apply_gate(new_state(2), H(0))
        state = apply_gate(state, CNOT(0, 1))
        back = apply_gate(apply_gate(state, gate), gate)
        assert np.max(np.abs(_amps(back) - _amps(state))) < AMP_TOL

    def test_cnot_rejects_equal_control_and_target(self):
        with pytest.raises(ValueError):
            apply_gate(new_state(2), CNOT(1, 1))

    @pytest.mark.parametrize("gate", [H(2), X(5), CNOT(0, 7), CNOT(3, 1)])
    def test_out_of_range_qubits_raise_index_error(self, gate):
        with pytest.raises(IndexError):
            apply_gate(new_state(2), gate)

    def test_unknown_gate_object_rejected(self):
        with pytest.raises(TypeError):
            apply_gate(new_state(1), "hadamard")

    def test_gates_leave_input_state_untouched(self):
        state = apply_gate(new_state(1), H(0))
        before = _amps(state)
        apply_gate(state, X(0))
        assert np.array_equal(_amps(state), before)


class TestMeasurement:
    def test_probability_of_one_on_plus_state(self):
        state = apply_gate(new_state(1), H(0))
        assert abs(probability_of_one(state, 0) - 0.5) < AMP_TOL

    def test_outcome_probabilities_are_complete(self):
        state = apply_gate(new_state(2), H(0))
        state = apply_gate(state, CNOT(0, 1))
        for q in range(2):
            p_one = probability_of_one(state, q)
            p_zero = probability_of_one(apply_gate(state, X(q)), q)
            assert abs(p_one + p_zero - 1.0) < AMP_TOL

    def test_threshold_rule_below_gives_one(self):
        state = apply_gate(new_state(1), H(0))
        assert measure_qubit(state, 0, 0.49).bit == 1

    def test_threshold_rule_at_and_above_gives_zero(self):
        state = apply_gate(new_state(1), H(0))
        assert measure_qubit(state, 0, 0.5).bit == 0
        assert measure_qubit(state, 0, 0.51).bit == 0

    def test_deterministic_states_ignore_the_draw(self):
        zero = new_state(1)
        one = apply_gate(zero, X(0))
        for u in (0.0, 0.3, 0.999):
            assert measure_qubit(zero, 0, u).bit == 0
            assert measure_qubit(one, 0, u).bit == 1

    def test_collapse_projects_and_renormalizes(self):
        state = apply_gate(new_state(2), H(0))
        state = apply_gate(state, CNOT(0, 1))  # Bell pair
        result = measure_qubit(state, 0, 0.2)
        assert result.bit == 1
        post = _amps(result.post_state)
        assert abs(post[0b11] - 1.0) < AMP_TOL
        assert abs(result.post_state.norm() - 1.0) < AMP_TOL
        # measuring the partner qubit is now deterministic
        assert abs(probability_of_one(result.post_state, 1) - 1.0) < AMP_TOL

    def test_measurement_does_not_mutate_input(self):
        state = apply_gate(new_state(1), H(0))
        before = _amps(state)
        measure_qubit(state, 0, 0.7)
        assert np.array_equal(_amps(state), before)

    @pytest.mark.parametrize("u", [-0.01, 1.0, 1.5])
    def test_draw_outside_unit_interval_rejected(self, u):
        with pytest.raises(ValueError):
            measure_qubit(new_state(1), 0, u)

    def test_non_normalized_state_raises_corrupt_error(self):
        crooked = StateVector(1, np.array([0.5, 0.5], dtype=complex))
        with pytest.raises(CorruptStateError):
            measure_qubit(crooked, 0, 0.3)

    def test_measure_rejects_out_of_range_qubit(self):
        with pytest.raises(IndexError):
            measure_qubit(new_state(2), 2, 0.1)


class TestXorResource:
    def test_amplitudes_are_half_on_even_parity_states(self):
        amps = _amps(prepare_xor_resource())
        support = {0b000, 0b011, 0b101, 0b110}
        for idx in range(8):
            target = 0.5 if idx in support else 0.0
            assert abs(amps[idx] - target) < AMP_TOL

    def test_every_qubit_is_an_unbiased_coin(self):
        state = prepare_xor_resource()
        for q in range(3):
            assert abs(probability_of_one(state, q) - 0.5) < AMP_TOL

    def test_prep_gates_respect_requested_wires(self):
        # same recipe on the last three wires of a 5-qubit register
        state = new_state(5)
        for gate in resource_prep_gates(2, 3, 4):
            state = apply_gate(state, gate)
        amps = _amps(state)
        nonzero = {idx for idx, a in enumerate(amps) if abs(a) > AMP_TOL}
        assert nonzero == {0b000, 0b011, 0b101, 0b110}


def _random_normalized_state(num_qubits: int, seed: int) -> StateVector:
    gen = np.random.default_rng(seed)
    dim = 2**num_qubits
    raw = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    return StateVector(num_qubits, raw / np.linalg.norm(raw))


@st.composite
def random_circuits(draw):
    num_qubits = draw(st.integers(min_value=1, max_value=5))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    gates = []
    for _ in range(draw(st.integers(min_value=1, max_value=12))):
        kind = draw(st.sampled_from(["h", "x", "cnot"]))
        if kind == "cnot" and num_qubits >= 2:
            control = draw(st.integers(min_value=0, max_value=num_qubits - 1))
            target = draw(
                st.integers(min_value=0, max_value=num_qubits - 1).filter(
                    lambda t, c=control: t != c
                )
            )
            gates.append(CNOT(control, target))
        else:
            qubit = draw(st.integers(min_value=0, max_value=num_qubits - 1))
            gates.append(H(qubit) if kind == "h" else X(qubit))
    return num_qubits, seed, gates


class TestCircuitProperties:
    @given(random_circuits())
    @settings(max_examples=60, deadline=None)
    def test_gates_preserve_norm(self, circuit):
        num_qubits, seed, gates = circuit
        state = _random_normalized_state(num_qubits, seed)
        for gate in gates:
            state = apply_gate(state, gate)
        assert abs(state.norm() - 1.0) < AMP_TOL

    @given(random_circuits())
    @settings(max_examples=60, deadline=None)
    def test_reversed_circuit_undoes_itself(self, circuit):
        # H, X, and CNOT are each their own inverse
        num_qubits, seed, gates = circuit
        start = _random_normalized_state(num_qubits, seed)
        state = start
        for gate in gates:
            state = apply_gate(state, gate)
        for gate in reversed(gates):
            state = apply_gate(state, gate)
        assert np.max(np.abs(state.amplitudes - start.amplitudes)) < AMP_TOL
