"""Command-line client for the service.

Every subcommand builds a request from JSON files on disk, sends it to the
HTTP API (an in-process instance by default, or a remote server via
--server), and formats the response.  Exit codes: 0 success / all suites
pass, 1 verification failure (a counterexample or witness was emitted),
2 input or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx

from .harness.serialization import (
    load_matrix,
    matrix_to_payload,
    save_report,
)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2


class CliError(Exception):
    pass


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=3600.0)
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app, raise_server_exceptions=False)


def _matrix_arg(path) -> dict:
    return matrix_to_payload(load_matrix(path))


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code in (400, 422):
        raise CliError(f"{path}: {response.json().get('detail', response.text)}")
    if response.status_code != 200:
        raise CliError(f"{path}: HTTP {response.status_code}: {response.text}")
    return response.json()


def _emit(data, out_path=None):
    text = json.dumps(data, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_repr_build(client, args) -> int:
    result = _post(
        client,
        "/repr/build",
        {"p": _matrix_arg(args.p), "q": _matrix_arg(args.q)},
    )
    _emit(result, args.out)
    return EXIT_OK


def _cmd_interp(client, args) -> int:
    result = _post(
        client,
        "/interpolate",
        {"p": _matrix_arg(args.p), "q": _matrix_arg(args.q), "t": args.t},
    )
    _emit(result["matrix"], args.out)
    return EXIT_OK


def _cmd_geomean(client, args) -> int:
    result = _post(
        client,
        "/geomean",
        {"p": _matrix_arg(args.p), "q": _matrix_arg(args.q)},
    )
    _emit(result["matrix"], args.out)
    return EXIT_OK


def _cmd_entropy(client, args) -> int:
    result = _post(
        client,
        "/entropy",
        {
            "omega": _matrix_arg(args.omega),
            "nu": _matrix_arg(args.nu),
            "method": args.method,
        },
    )
    value = result["value"]
    print(value if value == "inf" else f"{value:.10g}")
    if args.diagnostics and result.get("diagnostics"):
        _emit(result["diagnostics"], None)
    return EXIT_OK


def _cmd_channel_apply(client, args) -> int:
    result = _post(
        client,
        "/channel/apply",
        {"channel": _load_json(args.channel), "input": _matrix_arg(args.input)},
    )
    _emit(result["matrix"], args.out)
    return EXIT_OK


def _cmd_channel_pullback(client, args) -> int:
    result = _post(
        client,
        "/channel/pullback",
        {"channel": _load_json(args.channel), "omega": _matrix_arg(args.omega)},
    )
    _emit(result["matrix"], args.out)
    return EXIT_OK


def _cmd_channel_schwarz(client, args) -> int:
    result = _post(
        client,
        "/channel/check-schwarz",
        {
            "channel": _load_json(args.channel),
            "trials": args.trials,
            "seed": args.seed,
        },
    )
    if result["passed"]:
        print(f"pass ({result['trials']} trials, min eigenvalue {result['min_eigenvalue']:.3e})")
        return EXIT_OK
    print(
        f"FAIL: Schwarz inequality violated, eigenvalue {result['min_eigenvalue']:.6g}"
    )
    _emit({"witness": result["witness"]}, args.out)
    return EXIT_VERIFICATION_FAILED


def _cmd_verify(client, args) -> int:
    payload: dict = {"trials": args.trials, "dims": args.dims}
    if args.suites:
        payload["suites"] = args.suites
    if args.seed is not None:
        payload["seed"] = args.seed
    if args.tolerances:
        payload["tolerances"] = json.loads(args.tolerances)
    result = _post(client, "/verify", payload)
    report = result["report"]
    for name, entry in report["results"].items():
        status = "pass" if entry["passed"] else "FAIL"
        print(f"{status}  {name}  (min margin {entry['min_margin']:.3e})")
    if args.out:
        save_report(report, args.out)
    if not result["passed"]:
        failing = [n for n, e in report["results"].items() if not e["passed"]]
        for name in failing:
            cex = report["results"][name]["counterexample"]
            if cex is not None:
                cex_path = args.counterexample or f"counterexample_{name}.json"
                with open(cex_path, "w", encoding="utf-8") as fh:
                    json.dump(cex, fh, indent=2, sort_keys=True)
                print(f"counterexample written to {cex_path}")
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def _cmd_recheck(client, args) -> int:
    result = _post(
        client, "/verify/recheck", {"counterexample": _load_json(args.file)}
    )
    print(
        f"suite {result['suite']}: excess {result['excess']:.6g} "
        f"({'reproduced' if result['reproduced'] else 'not reproduced'})"
    )
    return EXIT_VERIFICATION_FAILED if result["reproduced"] else EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("formcalc.service:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formcalc",
        description="Quadratic-form calculus, relative entropy, and channel verification.",
    )
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running service; omit to run in-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_repr = sub.add_parser("repr", help="quotient-representation operations")
    repr_sub = p_repr.add_subparsers(dest="repr_command", required=True)
    p_build = repr_sub.add_parser("build", help="build the whitened representation")
    p_build.add_argument("--p", required=True, help="JSON file with the first form matrix")
    p_build.add_argument("--q", required=True, help="JSON file with the second form matrix")
    p_build.add_argument("--out", default=None)
    p_build.set_defaults(func=_cmd_repr_build)

    p_interp = sub.add_parser("interp", help="interpolate two positive forms")
    p_interp.add_argument("--p", required=True)
    p_interp.add_argument("--q", required=True)
    p_interp.add_argument("--t", type=float, required=True)
    p_interp.add_argument("--out", default=None)
    p_interp.set_defaults(func=_cmd_interp)

    p_gm = sub.add_parser("geomean", help="geometric mean of two positive forms")
    p_gm.add_argument("--p", required=True)
    p_gm.add_argument("--q", required=True)
    p_gm.add_argument("--out", default=None)
    p_gm.set_defaults(func=_cmd_geomean)

    p_ent = sub.add_parser("entropy", help="relative entropy between two densities")
    p_ent.add_argument("--omega", required=True)
    p_ent.add_argument("--nu", required=True)
    p_ent.add_argument("--method", choices=["closed", "limit"], default="closed")
    p_ent.add_argument("--diagnostics", action="store_true")
    p_ent.set_defaults(func=_cmd_entropy)

    p_chan = sub.add_parser("channel", help="channel operations")
    chan_sub = p_chan.add_subparsers(dest="channel_command", required=True)
    p_apply = chan_sub.add_parser("apply", help="apply the Heisenberg action")
    p_apply.add_argument("--channel", required=True, help="JSON channel description")
    p_apply.add_argument("--input", required=True)
    p_apply.add_argument("--out", default=None)
    p_apply.set_defaults(func=_cmd_channel_apply)
    p_pull = chan_sub.add_parser("pullback", help="pull a state back through a channel")
    p_pull.add_argument("--channel", required=True)
    p_pull.add_argument("--omega", required=True)
    p_pull.add_argument("--out", default=None)
    p_pull.set_defaults(func=_cmd_channel_pullback)
    p_schwarz = chan_sub.add_parser("check-schwarz", help="randomized Schwarz test")
    p_schwarz.add_argument("--channel", required=True)
    p_schwarz.add_argument("--trials", type=int, default=1000)
    p_schwarz.add_argument("--seed", type=int, default=0)
    p_schwarz.add_argument("--out", default=None)
    p_schwarz.set_defaults(func=_cmd_channel_schwarz)

    p_verify = sub.add_parser("verify", help="run verification suites")
    p_verify.add_argument(
        "--suites",
        default=None,
        help="comma-separated suite names (default: all)",
        type=lambda s: [x for x in s.split(",") if x],
    )
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--trials", type=int, default=200)
    p_verify.add_argument(
        "--dims",
        default=[2, 3, 4],
        type=lambda s: [int(x) for x in s.split(",") if x],
    )
    p_verify.add_argument("--tolerances", default=None, help="JSON object of overrides")
    p_verify.add_argument("--out", default=None, help="write the full report here")
    p_verify.add_argument(
        "--counterexample", default=None, help="path for a failing counterexample"
    )
    p_verify.set_defaults(func=_cmd_verify)

    p_recheck = sub.add_parser(
        "recheck", help="re-run a serialized counterexample"
    )
    p_recheck.add_argument("--file", required=True)
    p_recheck.set_defaults(func=_cmd_recheck)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage already; normalize other codes
        return EXIT_INPUT_ERROR if exc.code else EXIT_OK
    if args.command == "serve":
        return _cmd_serve(args)
    try:
        with _client(args.server) as client:
            return args.func(client, args)
    except (CliError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
