"""Dense state-vector simulator for small qubit registers.

Indexing is big-endian over qubit ids: qubit 0 is the most significant bit
of a basis index, so for three qubits |110> sits at index 6. Gates and
measurements are pure functions returning fresh states; randomness enters
only through an explicit uniform draw passed to each measurement, so whole
runs replay from a single caller-owned seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 8
AMP_TOL = 1e-12
MEASURE_NORM_TOL = 1e-9


class CorruptStateError(ValueError):
    """Raised when a state offered for measurement is not unit norm."""


@dataclass(frozen=True)
class H:
    qubit: int


@dataclass(frozen=True)
class X:
    qubit: int


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int


Gate = H | X | CNOT


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over the 2**num_qubits computational basis.

    Treated as immutable after construction: the amplitude buffer is copied
    in and marked read-only, so states can be shared freely.
    """

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(
                f"num_qubits must be in [1, {MAX_QUBITS}], got {self.num_qubits}"
            )
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes, got shape {amps.shape}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))


@dataclass(frozen=True)
class MeasurementResult:
    bit: int
    post_state: StateVector
    probability_of_one: float


def new_state(num_qubits: int) -> StateVector:
    """All-zeros basis state on the given number of qubits."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}")
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.num_qubits:
        raise IndexError(
            f"qubit {qubit} out of range for {state.num_qubits}-qubit state"
        )


def _bitmask(state: StateVector, qubit: int) -> int:
    # big-endian: qubit 0 owns the highest bit of the basis index
    return 1 << (state.num_qubits - 1 - qubit)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply H, X, or CNOT and return the new state."""
    if isinstance(gate, H):
        return _apply_h(state, gate.qubit)
    if isinstance(gate, X):
        return _apply_x(state, gate.qubit)
    if isinstance(gate, CNOT):
        return _apply_cnot(state, gate.control, gate.target)
    raise TypeError(f"unsupported gate: {gate!r}")


def _apply_h(state: StateVector, qubit: int) -> StateVector:
    _check_qubit(state, qubit)
    mask = _bitmask(state, qubit)
    idx = np.arange(2**state.num_qubits)
    lo = state.amplitudes[idx & ~mask]
    hi = state.amplitudes[idx | mask]
    sign = np.where(idx & mask, -1.0, 1.0)
    return StateVector(state.num_qubits, (lo + sign * hi) / math.sqrt(2.0))


def _apply_x(state: StateVector, qubit: int) -> StateVector:
    _check_qubit(state, qubit)
    mask = _bitmask(state, qubit)
    idx = np.arange(2**state.num_qubits)
    return StateVector(state.num_qubits, state.amplitudes[idx ^ mask])


def _apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    _check_qubit(state, control)
    _check_qubit(state, target)
    if control == target:
        raise ValueError("CNOT control and target must be distinct qubits")
    cmask = _bitmask(state, control)
    tmask = _bitmask(state, target)
    idx = np.arange(2**state.num_qubits)
    src = np.where(idx & cmask, idx ^ tmask, idx)
    return StateVector(state.num_qubits, state.amplitudes[src])


def probability_of_one(state: StateVector, qubit: int) -> float:
    """Born-rule probability that measuring `qubit` yields 1."""
    _check_qubit(state, qubit)
    mask = _bitmask(state, qubit)
    idx = np.arange(2**state.num_qubits)
    sel = state.amplitudes[(idx & mask) != 0]
    return float(np.sum(sel.real**2 + sel.imag**2))


def measure_qubit(state: StateVector, qubit: int, u: float) -> MeasurementResult:
    """Projective measurement of one qubit with caller-supplied randomness.

    `u` must be a uniform draw from [0, 1); the outcome is 1 iff
    u < P(bit = 1). The returned post-state is projected onto the observed
    outcome and renormalized; the input state is left untouched.
    """
    _check_qubit(state, qubit)
    if not 0.0 <= u < 1.0:
        raise ValueError(f"uniform draw must lie in [0, 1), got {u}")
    amps = state.amplitudes
    nrm = np.vdot(amps, amps).real
    if abs(nrm - 1.0) > MEASURE_NORM_TOL:
        raise CorruptStateError(f"state norm {math.sqrt(nrm)} deviates too far from 1")

    p_one = probability_of_one(state, qubit)
    bit = 1 if u < p_one else 0
    p_outcome = p_one if bit else 1.0 - p_one

    mask = _bitmask(state, qubit)
    idx = np.arange(2**state.num_qubits)
    keep = ((idx & mask) != 0) == bool(bit)
    post = np.where(keep, amps, 0.0) / math.sqrt(p_outcome)
    return MeasurementResult(
        bit=bit,
        post_state=StateVector(state.num_qubits, post),
        probability_of_one=p_one,
    )


def resource_prep_gates(a: int, b: int, c: int) -> list[Gate]:
    """Gate sequence producing the shared XOR resource on qubits (a, b, c).

    GHZ preparation followed by a Hadamard on every qubit; the result is the
    uniform superposition of the four even-parity basis states.
    """
    return [H(a), CNOT(a, b), CNOT(a, c), H(a), H(b), H(c)]


def prepare_xor_resource() -> StateVector:
    """Three-qubit entangled resource: amplitude 1/2 on |000>, |011>, |110>, |101>."""
    state = new_state(3)
    for gate in resource_prep_gates(0, 1, 2):
        state = apply_gate(state, gate)
    return state


def get_amplitudes(state: StateVector) -> list[complex]:
    """Copy of the amplitude vector in basis-index order."""
    return [complex(a) for a in state.amplitudes]
