"""Synchronous in-memory message fabric for one signing session.

The bus stamps every message with a unique, strictly increasing step
number, delivers to per-party FIFO queues, and keeps a complete ordered
log. Transcripts serialize to JSON with every integer rendered as a
decimal string so arbitrary-precision key material survives any JSON
parser.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import TYPE_CHECKING, Any, Mapping

if TYPE_CHECKING:
    from .protocol import Verdict


class Party(str, Enum):
    ALICE = "Alice"
    BOB = "Bob"
    CHARLIE = "Charlie"


class MessageKind(str, Enum):
    CONTRACT_PROPOSAL = "ContractProposal"
    PUBLIC_KEY_ANNOUNCE = "PublicKeyAnnounce"
    XOR_BIT_REPORT = "XorBitReport"
    XOR_BROADCAST = "XorBroadcast"
    VALIDATION_REPORT = "ValidationReport"
    DISPUTE_CLAIM = "DisputeClaim"
    DISPUTE_EVIDENCE = "DisputeEvidenceMsg"
    VERDICT = "VerdictMsg"


class BusError(RuntimeError):
    pass


class BusClosedError(BusError):
    pass


@dataclass(frozen=True)
class ProtocolMessage:
    """One classical message; `step` is assigned by the bus on send."""

    sender: Party
    recipient: Party
    kind: MessageKind
    payload: Mapping[str, Any]
    step: int | None = None


class MessageBus:
    """FIFO bus between Alice, Bob, and Charlie with a full transcript log."""

    def __init__(self) -> None:
        self._queues: dict[Party, deque[ProtocolMessage]] = {p: deque() for p in Party}
        self._log: list[ProtocolMessage] = []
        self._next_step = 0
        self._closed = False

    def send(self, msg: ProtocolMessage) -> ProtocolMessage:
        """Stamp, log, and enqueue one message; returns the stamped copy."""
        if self._closed:
            raise BusClosedError("session is closed")
        stamped = replace(msg, step=self._next_step)
        self._next_step += 1
        self._queues[stamped.recipient].append(stamped)
        self._log.append(stamped)
        return stamped

    def atomic_broadcast(self, msgs: list[ProtocolMessage]) -> list[ProtocolMessage]:
        """Send several messages from one sender at consecutive steps.

        The bus is driven by a single session loop, so stamping the batch in
        one call is what guarantees nothing interleaves.
        """
        if self._closed:
            raise BusClosedError("session is closed")
        if not msgs:
            return []
        senders = {m.sender for m in msgs}
        if len(senders) != 1:
            raise BusError(f"atomic broadcast requires a single sender, got {senders}")
        return [self.send(m) for m in msgs]

    def drain(self, party: Party) -> list[ProtocolMessage]:
        """Return and clear the party's pending messages, oldest first."""
        queue = self._queues[party]
        out = list(queue)
        queue.clear()
        return out

    def close(self) -> None:
        self._closed = True

    @property
    def log(self) -> tuple[ProtocolMessage, ...]:
        return tuple(self._log)


@dataclass
class SessionTranscript:
    """Immutable record of one finished session, ready for serialization."""

    session_id: str
    seed: int
    scenario: str
    contract_hex: str
    keys: Mapping[str, Mapping[str, int]]
    width_l: int
    messages: tuple[ProtocolMessage, ...]
    verdict: "Verdict"
    stats: Mapping[str, int] = field(default_factory=dict)


def _stringify(value: Any) -> Any:
    # bool is an int subclass; keep real booleans as booleans
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Mapping):
        return {str(k): _stringify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_stringify(v) for v in value]
    return value


def message_to_dict(msg: ProtocolMessage) -> dict[str, Any]:
    return {
        "step": _stringify(msg.step),
        "from": msg.sender.value,
        "to": msg.recipient.value,
        "kind": msg.kind.value,
        "payload": _stringify(msg.payload),
    }


def transcript_to_dict(transcript: SessionTranscript) -> dict[str, Any]:
    """Canonical JSON-ready form; key order is part of the format."""
    return {
        "session_id": transcript.session_id,
        "seed": _stringify(transcript.seed),
        "scenario": transcript.scenario,
        "contract_hex": transcript.contract_hex,
        "keys": _stringify(transcript.keys),
        "width_L": _stringify(transcript.width_l),
        "messages": [message_to_dict(m) for m in transcript.messages],
        "verdict": transcript.verdict.to_payload(),
        "stats": _stringify(transcript.stats),
    }


def json_text(obj: Mapping[str, Any]) -> str:
    """Render a transcript dict to its canonical JSON text."""
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def transcript_json(transcript: SessionTranscript) -> str:
    return json_text(transcript_to_dict(transcript))
