"""Shared fixtures: small hand-checkable keypairs used across the suite.

Alice signs with p=5, q=11, d=7 (n=55, e=23) and Bob with p=7, q=11, d=13
(n=77, e=37). For the one-byte contract 0x08 these give signatures 2 and
50, XOR 48, exchange width 7; every derived number in the tests below was
checked by hand against these keys.
"""

import pytest

from qcontract.protocol import ForcedKey, ScenarioConfig
from qcontract.rsa import keypair_from_primes


@pytest.fixture(scope="session")
def alice_keys():
    return keypair_from_primes(5, 11, d=7)


@pytest.fixture(scope="session")
def bob_keys():
    return keypair_from_primes(7, 11, d=13)


@pytest.fixture()
def worked_config():
    def make(scenario: str, seed: int = 0, **overrides) -> ScenarioConfig:
        params = dict(
            scenario=scenario,
            contract=bytes([8]),
            seed=seed,
            forced_alice=ForcedKey(5, 11, 7),
            forced_bob=ForcedKey(7, 11, 13),
        )
        params.update(overrides)
        return ScenarioConfig(**params)

    return make
