"""Three-party contract signing over the XOR gadget, with arbitration.

A session runs three stages: initialization (contract agreement, key
generation, public key exchange), simultaneous message passing (Charlie
learns the XOR of the two signatures bit by bit through gadget rounds and
broadcasts it), and validation (each signer recovers the counterpart's
signature from the broadcast and checks it against the contract). A party
reporting a bad signature triggers Charlie's four-point dispute check:

    I   the claimed counterpart signature verifies the contract
    II  the two claimed signatures XOR to Charlie's recorded broadcast
    III re-signing the contract with the claimant's disclosed private
        exponent reproduces the claimant's own claimed signature
    IV  the claimant's own claimed signature verifies the contract

The contract is cancelled (counterpart held the cheater) exactly when I
fails while II-IV all hold; every other pattern rejects the claim and the
contract stands.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .netsim import MessageBus, MessageKind, Party, ProtocolMessage, SessionTranscript
from .nonlocal_xor import BitString, ProtocolError, XorRound, run_xor_round
from .rsa import (
    Contract,
    PublicKey,
    RsaKeyPair,
    encode_contract,
    generate_keypair,
    keypair_from_primes,
    mod_exp,
    sign,
    verify,
)

SCENARIOS = (
    "honest",
    "bob-forges",
    "alice-forges",
    "alice-false-claim",
    "bob-false-claim",
)


def other_party(party: Party) -> Party:
    if party == Party.ALICE:
        return Party.BOB
    if party == Party.BOB:
        return Party.ALICE
    raise ValueError("only Alice and Bob have a counterpart")


@dataclass(frozen=True)
class SignatureBits:
    """A signature integer together with its fixed-width bit view."""

    value: int
    bits: BitString

    def __post_init__(self) -> None:
        if self.bits.to_int() != self.value:
            raise ValueError("bits must be the big-endian encoding of value")

    @classmethod
    def from_value(cls, value: int, width: int) -> "SignatureBits":
        return cls(value=value, bits=BitString.from_int(value, width))

    @property
    def width(self) -> int:
        return len(self.bits)

    def __xor__(self, other: "SignatureBits") -> "SignatureBits":
        bits = self.bits ^ other.bits
        return SignatureBits(value=bits.to_int(), bits=bits)

    def to_payload(self) -> dict[str, Any]:
        return {"value": self.value, "bits": str(self.bits)}


@dataclass(frozen=True)
class Honest:
    pass


@dataclass(frozen=True)
class ForgeSignature:
    """Substitute a wrong signature at the XOR input stage.

    With forged_value unset, the honest signature with its lowest bit
    flipped is used.
    """

    forged_value: int | None = None


@dataclass(frozen=True)
class FalseClaim:
    """Sign honestly but report the counterpart's valid signature as false."""


PartyBehavior = Honest | ForgeSignature | FalseClaim


class VerdictKind(str, Enum):
    VALID = "Valid"
    CANCELLED = "Cancelled"
    CLAIM_REJECTED = "ClaimRejected"


@dataclass(frozen=True)
class ArbitrationChecks:
    i: bool
    ii: bool
    iii: bool
    iv: bool

    @property
    def cancellation_pattern(self) -> bool:
        return (not self.i) and self.ii and self.iii and self.iv

    def to_payload(self) -> dict[str, bool]:
        return {"I": self.i, "II": self.ii, "III": self.iii, "IV": self.iv}


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    cheater: Party | None = None
    claimant: Party | None = None
    checks: ArbitrationChecks | None = None

    def __post_init__(self) -> None:
        if self.kind == VerdictKind.VALID:
            if self.cheater or self.claimant or self.checks:
                raise ValueError("a Valid verdict carries no dispute data")
        elif self.kind == VerdictKind.CANCELLED:
            if self.cheater is None or self.checks is None:
                raise ValueError("a Cancelled verdict needs a cheater and checks")
            if not self.checks.cancellation_pattern:
                raise ValueError("Cancelled requires I false and II-IV true")
        elif self.kind == VerdictKind.CLAIM_REJECTED:
            if self.claimant is None or self.checks is None:
                raise ValueError("a ClaimRejected verdict needs a claimant and checks")
            if self.checks.cancellation_pattern:
                raise ValueError("this check pattern mandates cancellation")

    @property
    def contract_remains_valid(self) -> bool:
        return self.kind != VerdictKind.CANCELLED

    def label(self) -> str:
        if self.kind == VerdictKind.CANCELLED:
            return f"Cancelled({self.cheater.value})"
        if self.kind == VerdictKind.CLAIM_REJECTED:
            return f"ClaimRejected({self.claimant.value})"
        return "Valid"

    def to_payload(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"kind": self.label()}
        if self.checks is not None:
            payload["checks"] = self.checks.to_payload()
        return payload


@dataclass(frozen=True)
class DisputeEvidence:
    """What the claimant hands Charlie, plus Charlie's own broadcast record."""

    claimant: Party
    s_counterpart_claimed: SignatureBits
    s_own_claimed: SignatureBits
    private_exponent: int
    s_ab: SignatureBits


@dataclass(frozen=True)
class ForcedKey:
    p: int
    q: int
    d: int | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    contract: bytes
    prime_bits: int = 32
    seed: int = 0
    forced_alice: ForcedKey | None = None
    forced_bob: ForcedKey | None = None
    forged_value: int | None = None

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ValueError(
                f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}"
            )
        if self.prime_bits < 4:
            raise ValueError(f"prime_bits must be >= 4, got {self.prime_bits}")


def behaviors_for(
    scenario: str, forged_value: int | None = None
) -> tuple[PartyBehavior, PartyBehavior]:
    """(Alice's, Bob's) behavior for a named scenario."""
    table: dict[str, tuple[PartyBehavior, PartyBehavior]] = {
        "honest": (Honest(), Honest()),
        "bob-forges": (Honest(), ForgeSignature(forged_value)),
        "alice-forges": (ForgeSignature(forged_value), Honest()),
        "alice-false-claim": (FalseClaim(), Honest()),
        "bob-false-claim": (Honest(), FalseClaim()),
    }
    if scenario not in table:
        raise ValueError(f"unknown scenario {scenario!r}")
    return table[scenario]


@dataclass
class SessionState:
    scenario: str
    seed: int
    rng: random.Random
    bus: MessageBus
    behaviors: dict[Party, PartyBehavior]
    keys: dict[Party, RsaKeyPair]
    contract: Contract
    width: int
    honest_sigs: dict[Party, SignatureBits] = field(default_factory=dict)
    fed_sigs: dict[Party, SignatureBits] = field(default_factory=dict)
    rounds: list[XorRound] = field(default_factory=list)
    s_ab: SignatureBits | None = None

    def public(self, party: Party) -> PublicKey:
        return self.keys[party].public


def _make_keypair(
    forced: ForcedKey | None, prime_bits: int, rng: random.Random
) -> RsaKeyPair:
    if forced is not None:
        return keypair_from_primes(forced.p, forced.q, forced.d)
    return generate_keypair(prime_bits, rng)


def initialize_session(
    contract_text: bytes,
    prime_bits: int,
    behaviors: tuple[PartyBehavior, PartyBehavior],
    seed: int,
    forced_alice: ForcedKey | None = None,
    forced_bob: ForcedKey | None = None,
    scenario: str = "honest",
) -> SessionState:
    """Stage one: agree on the contract, build keys, announce public halves.

    Charlie manages the contract text; each signer announces (n, e) to the
    other signer and to Charlie. The message integer is bounded by the
    smaller modulus and the exchange width is fixed to the larger modulus
    bit length so both signatures fit losslessly.
    """
    if prime_bits < 4:
        raise ValueError(f"prime_bits must be >= 4, got {prime_bits}")
    rng = random.Random(seed)
    bus = MessageBus()

    contract_hex = contract_text.hex()
    for signer in (Party.ALICE, Party.BOB):
        bus.send(
            ProtocolMessage(
                sender=Party.CHARLIE,
                recipient=signer,
                kind=MessageKind.CONTRACT_PROPOSAL,
                payload={"contract_hex": contract_hex},
            )
        )

    keys = {
        Party.ALICE: _make_keypair(forced_alice, prime_bits, rng),
        Party.BOB: _make_keypair(forced_bob, prime_bits, rng),
    }
    for signer in (Party.ALICE, Party.BOB):
        pub = keys[signer].public
        for recipient in (other_party(signer), Party.CHARLIE):
            bus.send(
                ProtocolMessage(
                    sender=signer,
                    recipient=recipient,
                    kind=MessageKind.PUBLIC_KEY_ANNOUNCE,
                    payload={"n": pub.n, "e": pub.e},
                )
            )

    bound = min(keys[Party.ALICE].n, keys[Party.BOB].n)
    contract = encode_contract(contract_text, bound)
    width = max(keys[Party.ALICE].n.bit_length(), keys[Party.BOB].n.bit_length())

    return SessionState(
        scenario=scenario,
        seed=seed,
        rng=rng,
        bus=bus,
        behaviors={Party.ALICE: behaviors[0], Party.BOB: behaviors[1]},
        keys=keys,
        contract=contract,
        width=width,
    )


def _fed_signature(session: SessionState, party: Party) -> SignatureBits:
    honest = session.honest_sigs[party]
    behavior = session.behaviors[party]
    if isinstance(behavior, ForgeSignature):
        forged = behavior.forged_value
        if forged is None:
            forged = honest.value ^ 1
        if forged == honest.value:
            raise ProtocolError("forged signature must differ from the honest one")
        return SignatureBits.from_value(forged, session.width)
    return honest


def exchange_signatures(session: SessionState) -> SignatureBits:
    """Stage two: per-bit gadget rounds, then Charlie's atomic XOR broadcast.

    One fresh entangled triple is consumed per bit position. Charlie never
    sees a signature bit: he assembles the XOR string from the parity of
    the three measured bits of each round.
    """
    m = session.contract.m
    for party in (Party.ALICE, Party.BOB):
        session.honest_sigs[party] = SignatureBits.from_value(
            sign(m, session.keys[party]), session.width
        )
        session.fed_sigs[party] = _fed_signature(session, party)

    alice_bits = session.fed_sigs[Party.ALICE].bits
    bob_bits = session.fed_sigs[Party.BOB].bits
    xor_bits: list[int] = []
    for position in range(session.width):
        rnd = run_xor_round(
            alice_bits.bits[position], bob_bits.bits[position], session.rng
        )
        session.rounds.append(rnd)
        session.bus.send(
            ProtocolMessage(
                sender=Party.ALICE,
                recipient=Party.CHARLIE,
                kind=MessageKind.XOR_BIT_REPORT,
                payload={"round": position, "bit": rnd.d},
            )
        )
        session.bus.send(
            ProtocolMessage(
                sender=Party.BOB,
                recipient=Party.CHARLIE,
                kind=MessageKind.XOR_BIT_REPORT,
                payload={"round": position, "bit": rnd.e},
            )
        )
        xor_bits.append(rnd.xor)

    bits = BitString(tuple(xor_bits))
    s_ab = SignatureBits(value=bits.to_int(), bits=bits)
    session.s_ab = s_ab
    session.bus.atomic_broadcast(
        [
            ProtocolMessage(
                sender=Party.CHARLIE,
                recipient=recipient,
                kind=MessageKind.XOR_BROADCAST,
                payload=s_ab.to_payload(),
            )
            for recipient in (Party.ALICE, Party.BOB)
        ]
    )
    return s_ab


def recover_counterpart(s_ab: SignatureBits, own: SignatureBits) -> SignatureBits:
    """Flip own-signature bits per the broadcast to obtain the counterpart's."""
    if s_ab.width != own.width:
        raise ProtocolError(
            f"width mismatch: broadcast is {s_ab.width} bits, own is {own.width}"
        )
    return s_ab ^ own


def validate_signature(s: SignatureBits, pub: PublicKey, m: int) -> bool:
    """True iff the signature recovers the contract under the public key.

    Raises ValueError for values outside [0, n); session code treats that
    as a validation failure rather than a crash, since a forger can force
    the recovered value out of range.
    """
    return verify(s.value, pub) == m


def arbitrate(
    evidence: DisputeEvidence,
    m: int,
    pub_counterpart: PublicKey,
    pub_claimant: PublicKey,
    n_claimant: int,
) -> Verdict:
    """Charlie's dispute procedure over the claimant's evidence.

    Out-of-range or otherwise unusable values simply fail the affected
    check; arbitration always returns a verdict.
    """
    widths = {
        evidence.s_counterpart_claimed.width,
        evidence.s_own_claimed.width,
        evidence.s_ab.width,
    }
    if len(widths) != 1:
        raise ProtocolError(f"evidence widths differ: {sorted(widths)}")

    def safe(check) -> bool:
        try:
            return bool(check())
        except ValueError:
            return False

    checks = ArbitrationChecks(
        i=safe(lambda: verify(evidence.s_counterpart_claimed.value, pub_counterpart) == m),
        ii=safe(
            lambda: (evidence.s_counterpart_claimed ^ evidence.s_own_claimed).value
            == evidence.s_ab.value
        ),
        iii=safe(
            lambda: evidence.s_own_claimed.value
            == mod_exp(m, evidence.private_exponent, n_claimant)
        ),
        iv=safe(lambda: verify(evidence.s_own_claimed.value, pub_claimant) == m),
    )
    if checks.cancellation_pattern:
        return Verdict(
            kind=VerdictKind.CANCELLED,
            cheater=other_party(evidence.claimant),
            checks=checks,
        )
    return Verdict(
        kind=VerdictKind.CLAIM_REJECTED, claimant=evidence.claimant, checks=checks
    )


def _validation_stage(session: SessionState) -> Verdict:
    """Stage three: recover, check, report; arbitrate the first claim if any."""
    assert session.s_ab is not None
    m = session.contract.m
    recovered: dict[Party, SignatureBits] = {}
    claimants: list[Party] = []

    for party in (Party.ALICE, Party.BOB):
        counterpart = other_party(party)
        recovered[party] = recover_counterpart(session.s_ab, session.fed_sigs[party])
        try:
            ok = validate_signature(recovered[party], session.public(counterpart), m)
        except ValueError:
            ok = False
        reported_ok = False if isinstance(session.behaviors[party], FalseClaim) else ok
        session.bus.send(
            ProtocolMessage(
                sender=party,
                recipient=Party.CHARLIE,
                kind=MessageKind.VALIDATION_REPORT,
                payload={"ok": reported_ok},
            )
        )
        if not reported_ok:
            claimants.append(party)

    if not claimants:
        return Verdict(kind=VerdictKind.VALID)

    # Multiple simultaneous claims are not covered by the dispute procedure;
    # the first reported claim is arbitrated, later ones are only logged.
    for claimant in claimants:
        session.bus.send(
            ProtocolMessage(
                sender=claimant,
                recipient=Party.CHARLIE,
                kind=MessageKind.DISPUTE_CLAIM,
                payload={"against": other_party(claimant).value},
            )
        )
    claimant = claimants[0]
    evidence = DisputeEvidence(
        claimant=claimant,
        s_counterpart_claimed=recovered[claimant],
        s_own_claimed=session.fed_sigs[claimant],
        private_exponent=session.keys[claimant].d,
        s_ab=session.s_ab,
    )
    session.bus.send(
        ProtocolMessage(
            sender=claimant,
            recipient=Party.CHARLIE,
            kind=MessageKind.DISPUTE_EVIDENCE,
            payload={
                "s_counterpart_claimed": evidence.s_counterpart_claimed.to_payload(),
                "s_own_claimed": evidence.s_own_claimed.to_payload(),
                "private_exponent": evidence.private_exponent,
            },
        )
    )
    counterpart = other_party(claimant)
    return arbitrate(
        evidence,
        m,
        pub_counterpart=session.public(counterpart),
        pub_claimant=session.public(claimant),
        n_claimant=session.keys[claimant].n,
    )


def _session_id(scenario: str, seed: int, contract_hex: str) -> str:
    digest = hashlib.sha256(f"{scenario}:{seed}:{contract_hex}".encode())
    return digest.hexdigest()[:16]


def run_session(config: ScenarioConfig) -> tuple[SessionTranscript, Verdict]:
    """Execute one full session and return its transcript and verdict."""
    behaviors = behaviors_for(config.scenario, config.forged_value)
    session = initialize_session(
        config.contract,
        config.prime_bits,
        behaviors,
        config.seed,
        forced_alice=config.forced_alice,
        forced_bob=config.forced_bob,
        scenario=config.scenario,
    )
    exchange_signatures(session)
    verdict = _validation_stage(session)

    session.bus.atomic_broadcast(
        [
            ProtocolMessage(
                sender=Party.CHARLIE,
                recipient=recipient,
                kind=MessageKind.VERDICT,
                payload=verdict.to_payload(),
            )
            for recipient in (Party.ALICE, Party.BOB)
        ]
    )
    session.bus.close()

    contract_hex = session.contract.text.hex()
    transcript = SessionTranscript(
        session_id=_session_id(config.scenario, config.seed, contract_hex),
        seed=config.seed,
        scenario=config.scenario,
        contract_hex=contract_hex,
        keys={
            "alice": {"n": session.keys[Party.ALICE].n, "e": session.keys[Party.ALICE].e},
            "bob": {"n": session.keys[Party.BOB].n, "e": session.keys[Party.BOB].e},
        },
        width_l=session.width,
        messages=session.bus.log,
        verdict=verdict,
        stats={"rounds": session.width, "triples_consumed": len(session.rounds)},
    )
    return transcript, verdict
