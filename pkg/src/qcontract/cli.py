"""Thin command-line client for the signing service.

By default every command is served by an in-process instance of the HTTP
app, so no server has to be running; `--server URL` routes the same
requests to a remote deployment instead.

Exit codes for `run`: 0 the contract is validated, 2 it is cancelled with
a named cheater, 3 a claim was rejected (contract stands), 1 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Any

import httpx

EXIT_USAGE = 1
_VERDICT_EXIT = {"Valid": 0, "Cancelled": 2, "ClaimRejected": 3}


def _request(method: str, path: str, body: dict | None, server: str | None) -> httpx.Response:
    async def call() -> httpx.Response:
        if server is None:
            from .service import app

            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://qcontract.internal"
            ) as client:
                return await client.request(method, path, json=body)
        async with httpx.AsyncClient(base_url=server, timeout=600.0) as client:
            return await client.request(method, path, json=body)

    return asyncio.run(call())


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _coerce_int(value: Any, label: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ValueError(f"{label} must be an integer, got {value!r}")


def _load_forced_keys(path: str) -> dict[str, dict[str, int]]:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("forced-keys file must hold a JSON object")
    out: dict[str, dict[str, int]] = {}
    for party in ("alice", "bob"):
        if party not in raw:
            continue
        entry = raw[party]
        params = {
            "p": _coerce_int(entry.get("p"), f"{party}.p"),
            "q": _coerce_int(entry.get("q"), f"{party}.q"),
        }
        if entry.get("d") is not None:
            params["d"] = _coerce_int(entry["d"], f"{party}.d")
        out[party] = params
    return out


def cmd_run(args: argparse.Namespace) -> int:
    body: dict[str, Any] = {
        "scenario": args.scenario,
        "prime_bits": args.prime_bits,
        "seed": args.seed,
    }
    if args.contract is not None:
        body["contract_hex"] = args.contract
    else:
        body["contract_text"] = args.contract_text
    if args.forced_keys:
        try:
            body["forced_keys"] = _load_forced_keys(args.forced_keys)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            return _fail(f"cannot load forced keys: {exc}")

    resp = _request("POST", "/sessions", body, args.server)
    if resp.status_code != 200:
        return _fail(_detail(resp))
    data = resp.json()

    from .netsim import json_text

    transcript_text = json_text(data["transcript"])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(transcript_text)
    else:
        sys.stdout.write(transcript_text)
    print(f"VERDICT: {data['verdict']}")
    return _VERDICT_EXIT.get(data["verdict_kind"], EXIT_USAGE)


def cmd_xor_demo(args: argparse.Namespace) -> int:
    body = {"k": args.k, "r": args.r, "rounds": args.rounds, "seed": args.seed}
    resp = _request("POST", "/xor-demo", body, args.server)
    if resp.status_code != 200:
        return _fail(_detail(resp))
    data = resp.json()

    print(f"non-local XOR demo  k={data['k']} r={data['r']}  "
          f"rounds={data['rounds']} seed={data['seed']}")
    print("outcome (d,e,c)    count  frequency")
    for row in data["outcomes"]:
        print(f"  {row['outcome']}            {row['count']:>8}     {row['frequency']:.4f}")
    print(f"expected support: {' '.join(data['expected_support'])}")
    if not data["unanimous"]:
        return _fail("rounds disagree on the XOR value; parity theorem violated")
    print(f"inferred k^r: {data['inferred_xor']} (all {data['rounds']} rounds agree)")
    return 0


def cmd_verify_circuit(args: argparse.Namespace) -> int:
    resp = _request("GET", "/circuit-verification", None, args.server)
    if resp.status_code != 200:
        return _fail(_detail(resp))
    data = resp.json()
    for case in data["cases"]:
        status = "ok" if case["within_tolerance"] else "MISMATCH"
        print(
            f"k={case['k']} r={case['r']}  max deviation {case['max_deviation']:.3e}  "
            f"[{status}]  support (d,e,c): {' '.join(case['support'])}"
        )
    if data["all_within_tolerance"]:
        print(f"circuit matches the closed form within {data['tolerance']:g} "
              "for all four input pairs")
        return 0
    print("circuit deviates from the closed form", file=sys.stderr)
    return 1


def _detail(resp: httpx.Response) -> str:
    try:
        return str(resp.json().get("detail", resp.text))
    except ValueError:
        return f"HTTP {resp.status_code}: {resp.text}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcontract",
        description="Run fair contract-signing sessions against the simulator service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute one signing session")
    run.add_argument(
        "--scenario",
        required=True,
        choices=["honest", "bob-forges", "alice-forges", "alice-false-claim", "bob-false-claim"],
    )
    contract = run.add_mutually_exclusive_group(required=True)
    contract.add_argument("--contract", help="contract bytes as hex, e.g. 08")
    contract.add_argument("--contract-text", help="contract as UTF-8 text")
    run.add_argument("--prime-bits", type=int, default=32)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", help="write the transcript JSON here instead of stdout")
    run.add_argument("--forced-keys", help="JSON file with {alice|bob: {p, q, d}}")
    run.add_argument("--server", help="base URL of a running service")
    run.set_defaults(func=cmd_run)

    demo = sub.add_parser("xor-demo", help="sample gadget rounds for fixed inputs")
    demo.add_argument("--k", type=int, required=True, choices=[0, 1])
    demo.add_argument("--r", type=int, required=True, choices=[0, 1])
    demo.add_argument("--rounds", type=int, default=10_000)
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--server", help="base URL of a running service")
    demo.set_defaults(func=cmd_xor_demo)

    vc = sub.add_parser("verify-circuit", help="compare the round circuit to its closed form")
    vc.add_argument("--server", help="base URL of a running service")
    vc.set_defaults(func=cmd_verify_circuit)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help
        return 0 if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except httpx.HTTPError as exc:
        return _fail(f"request failed: {exc}")


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
