"""Deterministic simulator for entanglement-assisted fair contract signing.

Core layers: `qsim` (dense state-vector simulation), `nonlocal_xor` (the
three-party XOR gadget), `rsa` (unpadded RSA as the signature scheme),
`netsim` (message bus and transcripts), and `protocol` (the signing
session with arbitration). `service` wraps everything in an HTTP API and
`cli` is a thin client over it.
"""

__version__ = "0.1.0"

from .netsim import MessageBus, MessageKind, Party, ProtocolMessage, SessionTranscript
from .nonlocal_xor import BitString, ProtocolError, XorRound, run_xor_round, xor_bitstrings
from .protocol import (
    ScenarioConfig,
    SignatureBits,
    Verdict,
    VerdictKind,
    arbitrate,
    run_session,
)
from .qsim import StateVector, apply_gate, measure_qubit, new_state, prepare_xor_resource
from .rsa import PublicKey, RsaKeyPair, generate_keypair, sign, verify

__all__ = [
    "BitString",
    "MessageBus",
    "MessageKind",
    "Party",
    "ProtocolError",
    "ProtocolMessage",
    "PublicKey",
    "RsaKeyPair",
    "ScenarioConfig",
    "SessionTranscript",
    "SignatureBits",
    "StateVector",
    "Verdict",
    "VerdictKind",
    "XorRound",
    "apply_gate",
    "arbitrate",
    "generate_keypair",
    "measure_qubit",
    "new_state",
    "prepare_xor_resource",
    "run_session",
    "run_xor_round",
    "sign",
    "verify",
    "xor_bitstrings",
]
