"""Command-line client for the correlation toolkit.

Every subcommand builds a JSON request and posts it to the HTTP service.
By default the service app runs in-process over an ASGI transport, so
`bellscope membership vec.json` exercises the same code path as a
deployed server; pass --url to talk to a remote instance instead.

Exit codes: 0 success (inside / scenario passed), 1 negative result
(outside / scenario failed), 2 input or transport error, 3 refusal to
condition on a nonlinear rule without --allow-nonlinear.
"""

from __future__ import annotations

import argparse
import asyncio
import contextlib
import json
import os
import sys
import tempfile

import httpx

from .scenarios import DEFAULT_SEED

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_REFUSED = 3

_LOCAL_BASE = "http://bellscope.internal"
_REMOTE_TIMEOUT = 600.0


class CliError(Exception):
    """Input or transport problem that maps to exit code 2."""


def post(path: str, payload: dict, url: str | None) -> httpx.Response:
    """Send one request, in-process unless a remote base URL is given."""
    if url is None:
        from .service.app import app

        async def _go() -> httpx.Response:
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(transport=transport, base_url=_LOCAL_BASE) as client:
                return await client.post(path, json=payload)

        return asyncio.run(_go())
    try:
        with httpx.Client(base_url=url, timeout=_REMOTE_TIMEOUT) as client:
            return client.post(path, json=payload)
    except httpx.HTTPError as exc:
        raise CliError(f"request to {url} failed: {exc}") from exc


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from exc


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".bellscope-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def _emit(document: dict, output: str | None) -> None:
    text = json.dumps(document, indent=2, sort_keys=True) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        _write_atomic(output, text)


def _detail(response: httpx.Response) -> object:
    try:
        return response.json().get("detail", response.text)
    except ValueError:
        return response.text


def _fail(response: httpx.Response) -> int:
    """Print an error response and pick the matching exit code."""
    detail = _detail(response)
    if response.status_code == 409 and isinstance(detail, dict):
        print(f"error: {detail.get('reason', 'refused')}", file=sys.stderr)
        _emit({"format": 1, "refused": True, **detail}, None)
        return EXIT_REFUSED
    if response.status_code == 404 and isinstance(detail, dict):
        print(f"error: {detail.get('reason', 'not found')}", file=sys.stderr)
        scenarios = detail.get("scenarios")
        if scenarios:
            print("available scenarios: " + ", ".join(scenarios), file=sys.stderr)
        return EXIT_INPUT
    print(f"error: {detail}", file=sys.stderr)
    return EXIT_INPUT


def resolve_seed(value: int | None) -> int:
    """Explicit flag, then BELLSCOPE_SEED, then the package default."""
    if value is not None:
        return value
    env = os.environ.get("BELLSCOPE_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env, 0)
    except ValueError as exc:
        raise CliError(f"BELLSCOPE_SEED={env!r} is not an integer") from exc


def _bits_text(x: int, k: int) -> str:
    """Conditioning string with x_1 printed leftmost."""
    return "".join(str((x >> j) & 1) for j in range(k))


def _correlator_csv(correlator: list, selection: list) -> str:
    k = max(len(correlator).bit_length() - 1, 0)
    lines = ["bits,probability,selection_probability"]
    for x, (p, q) in enumerate(zip(correlator, selection)):
        lines.append(f"{_bits_text(x, k)},{p},{q}")
    return "\n".join(lines) + "\n"


def cmd_membership(args: argparse.Namespace) -> int:
    data = _load_json(args.vector)
    if isinstance(data, list):
        data = {"entries": data}
    if not isinstance(data, dict) or "entries" not in data:
        raise CliError(f"{args.vector} does not contain a correlator entry array")
    payload = {"format": data.get("format", 1), "entries": data["entries"]}
    if args.exact is not None:
        payload["exact"] = args.exact
    response = post("/v1/membership", payload, args.url)
    if response.status_code != 200:
        return _fail(response)
    document = response.json()
    _emit(document, args.output)
    return EXIT_OK if document["status"] == "inside" else EXIT_NEGATIVE


def cmd_apply(args: argparse.Namespace) -> int:
    payload: dict = {
        "rule": _load_json(args.rule),
        "allow_nonlinear": args.allow_nonlinear,
    }
    if args.lhv_model is not None:
        payload["lhv_model"] = _load_json(args.lhv_model)
    if args.quantum_strategy is not None:
        payload["quantum_strategy"] = _load_json(args.quantum_strategy)
    response = post("/v1/apply", payload, args.url)
    if response.status_code != 200:
        return _fail(response)
    document = response.json()
    _emit(document, args.output)
    if args.csv is not None:
        _write_atomic(
            args.csv,
            _correlator_csv(document["correlator"], document["selection_probability"]),
        )
    return EXIT_OK


def cmd_scenario(args: argparse.Namespace) -> int:
    options: dict = {}
    if args.n is not None:
        options["n"] = args.n
    for knob in ("restarts", "anchor_restarts", "rounds", "golden_iters"):
        value = getattr(args, knob)
        if value is not None:
            options[knob] = value
    for knob in ("initial_step", "shrink"):
        value = getattr(args, knob)
        if value is not None:
            options[knob] = value
    payload = {"name": args.name, "seed": resolve_seed(args.seed), "options": options}
    response = post("/v1/scenario", payload, args.url)
    if response.status_code != 200:
        return _fail(response)
    document = response.json()
    _emit(document, args.output)
    return EXIT_OK if document["passed"] else EXIT_NEGATIVE


def cmd_enumerate_linear(args: argparse.Namespace) -> int:
    response = post("/v1/enumerate-linear", {"arity": args.arity}, args.url)
    if response.status_code != 200:
        return _fail(response)
    _emit(response.json(), args.output)
    return EXIT_OK


def cmd_success_bound(args: argparse.Namespace) -> int:
    response = post("/v1/success-bound", {"function": args.function}, args.url)
    if response.status_code != 200:
        return _fail(response)
    _emit(response.json(), args.output)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("bellscope.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--url", help="base URL of a running service (default: in-process)")
    parser.add_argument("-o", "--output", help="write the JSON response to this file atomically")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellscope",
        description="Decide local-polytope membership, post-select correlation"
        " tables, and reproduce the bundled Bell scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("membership", help="test a correlator vector against the local polytope")
    p.add_argument("vector", help="JSON file with the correlator entries")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument(
        "--exact", dest="exact", action="store_true", default=None,
        help="force exact rational arithmetic",
    )
    mode.add_argument(
        "--float", dest="exact", action="store_false",
        help="force floating-point arithmetic",
    )
    _add_common(p)
    p.set_defaults(handler=cmd_membership)

    p = sub.add_parser("apply", help="condition a correlation table on a selection rule")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--lhv-model", help="JSON file with a weighted deterministic model")
    source.add_argument("--quantum-strategy", help="JSON file with a state and observables")
    p.add_argument("--rule", required=True, help="JSON file with the selection rule")
    p.add_argument(
        "--allow-nonlinear", action="store_true",
        help="condition even when the rule is not linear over GF(2)",
    )
    p.add_argument("--csv", help="also dump the correlator as CSV (one row per x)")
    _add_common(p)
    p.set_defaults(handler=cmd_apply)

    p = sub.add_parser("scenario", help="run a bundled scenario and report its checks")
    p.add_argument("name", help="scenario name (see the scenario list on error)")
    p.add_argument("--seed", type=int, help="RNG seed (falls back to BELLSCOPE_SEED)")
    p.add_argument("--n", type=int, help="party count for the strategy-image scenario")
    p.add_argument("--restarts", type=int, help="search restarts per rule template")
    p.add_argument("--anchor-restarts", dest="anchor_restarts", type=int,
                   help="search restarts for the unconditioned anchor")
    p.add_argument("--rounds", type=int, help="coordinate-sweep rounds per restart")
    p.add_argument("--golden-iters", dest="golden_iters", type=int,
                   help="golden-section iterations per coordinate")
    p.add_argument("--initial-step", dest="initial_step", type=float,
                   help="initial coordinate search window half-width")
    p.add_argument("--shrink", type=float, help="window shrink factor per round")
    _add_common(p)
    p.set_defaults(handler=cmd_scenario)

    p = sub.add_parser("enumerate-linear", help="list all linear Boolean functions of an arity")
    p.add_argument("arity", type=int)
    _add_common(p)
    p.set_defaults(handler=cmd_enumerate_linear)

    p = sub.add_parser("success-bound", help="best agreement with any linear function")
    p.add_argument("function", help="target function as arity:hex truth table, e.g. 2:8")
    _add_common(p)
    p.set_defaults(handler=cmd_success_bound)

    p = sub.add_parser("serve", help="run the HTTP service under uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
