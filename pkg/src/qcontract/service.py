"""HTTP front end over the signing simulator.

Stateless by design: every request carries its own seed, so identical
requests return identical responses and many clients can share one
deployment. Run with `uvicorn qcontract.service:app`.
"""

from __future__ import annotations

import random
from collections import Counter

from fastapi import FastAPI, HTTPException

from . import __version__, netsim, nonlocal_xor, protocol
from .rsa import ContractEncodingError
from .schemas import (
    CircuitCaseReport,
    CircuitVerificationResponse,
    OutcomeCount,
    SessionRequest,
    SessionResponse,
    XorDemoRequest,
    XorDemoResponse,
)

CIRCUIT_TOLERANCE = 1e-12

app = FastAPI(
    title="qcontract",
    description=(
        "Deterministic simulator for entanglement-assisted fair contract "
        "signing with RSA signatures and third-party arbitration."
    ),
    version=__version__,
)


def _scenario_config(req: SessionRequest) -> protocol.ScenarioConfig:
    if req.contract_hex is not None:
        try:
            contract = bytes.fromhex(req.contract_hex)
        except ValueError as exc:
            raise HTTPException(
                status_code=400, detail=f"contract_hex is not valid hex: {exc}"
            ) from exc
    else:
        assert req.contract_text is not None
        contract = req.contract_text.encode("utf-8")

    def forced(side) -> protocol.ForcedKey | None:
        if side is None:
            return None
        return protocol.ForcedKey(p=side.p, q=side.q, d=side.d)

    keys = req.forced_keys
    return protocol.ScenarioConfig(
        scenario=req.scenario,
        contract=contract,
        prime_bits=req.prime_bits,
        seed=req.seed,
        forced_alice=forced(keys.alice if keys else None),
        forced_bob=forced(keys.bob if keys else None),
        forged_value=req.forged_value,
    )


@app.get("/health")
def health() -> dict[str, str]:
    return {"status": "ok", "version": __version__}


@app.post("/sessions", response_model=SessionResponse)
def run_session(req: SessionRequest) -> SessionResponse:
    """Run one full signing session and return its verdict and transcript."""
    config = _scenario_config(req)
    try:
        transcript, verdict = protocol.run_session(config)
    except (ContractEncodingError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return SessionResponse(
        verdict=verdict.label(),
        verdict_kind=verdict.kind.value,
        cheater=verdict.cheater.value if verdict.cheater else None,
        claimant=verdict.claimant.value if verdict.claimant else None,
        contract_valid=verdict.contract_remains_valid,
        transcript=netsim.transcript_to_dict(transcript),
    )


@app.post("/xor-demo", response_model=XorDemoResponse)
def xor_demo(req: XorDemoRequest) -> XorDemoResponse:
    """Sample gadget rounds for fixed inputs and tally the measured outcomes."""
    rng = random.Random(req.seed)
    counts: Counter[str] = Counter()
    xor_counts: Counter[int] = Counter()
    for _ in range(req.rounds):
        rnd = nonlocal_xor.run_xor_round(req.k, req.r, rng)
        counts[f"{rnd.d}{rnd.e}{rnd.c}"] += 1
        xor_counts[rnd.xor] += 1
    outcomes = [
        OutcomeCount(outcome=o, count=c, frequency=c / req.rounds)
        for o, c in sorted(counts.items())
    ]
    return XorDemoResponse(
        k=req.k,
        r=req.r,
        rounds=req.rounds,
        seed=req.seed,
        outcomes=outcomes,
        expected_support=list(nonlocal_xor.outcome_support(req.k, req.r)),
        inferred_xor=xor_counts.most_common(1)[0][0],
        unanimous=len(xor_counts) == 1,
    )


@app.get("/circuit-verification", response_model=CircuitVerificationResponse)
def circuit_verification() -> CircuitVerificationResponse:
    """Compare the simulated round circuit against its closed form for all inputs."""
    cases = []
    for k in (0, 1):
        for r in (0, 1):
            deviation = nonlocal_xor.circuit_deviation(k, r)
            cases.append(
                CircuitCaseReport(
                    k=k,
                    r=r,
                    max_deviation=deviation,
                    within_tolerance=deviation < CIRCUIT_TOLERANCE,
                    support=list(nonlocal_xor.outcome_support(k, r)),
                )
            )
    return CircuitVerificationResponse(
        tolerance=CIRCUIT_TOLERANCE,
        cases=cases,
        all_within_tolerance=all(c.within_tolerance for c in cases),
    )
