"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field, model_validator

ScenarioName = Literal[
    "honest",
    "bob-forges",
    "alice-forges",
    "alice-false-claim",
    "bob-false-claim",
]


class ForcedKeyModel(BaseModel):
    p: int
    q: int
    d: int | None = None


class ForcedKeysModel(BaseModel):
    alice: ForcedKeyModel | None = None
    bob: ForcedKeyModel | None = None


class SessionRequest(BaseModel):
    scenario: ScenarioName
    contract_hex: str | None = None
    contract_text: str | None = None
    prime_bits: int = Field(default=32, ge=4, le=256)
    seed: int = 0
    forced_keys: ForcedKeysModel | None = None
    forged_value: int | None = None

    @model_validator(mode="after")
    def _exactly_one_contract(self) -> "SessionRequest":
        if (self.contract_hex is None) == (self.contract_text is None):
            raise ValueError("provide exactly one of contract_hex or contract_text")
        return self


class SessionResponse(BaseModel):
    verdict: str
    verdict_kind: str
    cheater: str | None = None
    claimant: str | None = None
    contract_valid: bool
    transcript: dict[str, Any]


class XorDemoRequest(BaseModel):
    k: Literal[0, 1]
    r: Literal[0, 1]
    rounds: int = Field(default=10_000, ge=1, le=1_000_000)
    seed: int = 0


class OutcomeCount(BaseModel):
    outcome: str
    count: int
    frequency: float


class XorDemoResponse(BaseModel):
    k: int
    r: int
    rounds: int
    seed: int
    outcomes: list[OutcomeCount]
    expected_support: list[str]
    inferred_xor: int
    unanimous: bool


class CircuitCaseReport(BaseModel):
    k: int
    r: int
    max_deviation: float
    within_tolerance: bool
    support: list[str]


class CircuitVerificationResponse(BaseModel):
    tolerance: float
    cases: list[CircuitCaseReport]
    all_within_tolerance: bool
