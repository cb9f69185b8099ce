"""Command-line front end: a thin client of the HTTP service.

By default each command talks to an in-process instance of the FastAPI app
(no network, no server to start); pass --server to target a running
deployment instead.  Commands write the same CSV/JSON artifacts either way.

Exit codes: 0 success; 1 verification failure; 2 invalid parameters;
3 --require-transition unmet; 4 requested boundary absent in the window.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_NO_TRANSITION = 3
EXIT_NO_BRACKET = 4

#: parameter sets behind --preset (the figure-reproduction defaults);
#: only fills options the user did not set explicitly
PRESETS = {
    "fig2": dict(J=1.0, Jz=-0.9, B=1.7, T=0.5, kind="deficit",
                 t_min=0.05, t_max=3.0, b_min=0.05, b_max=2.5),
    "fig3": dict(J=1.0, Jz=-0.9, B=1.7, kind="deficit", t_min=0.2, t_max=0.7),
    "fig5": dict(J=1.0, Jz=-1.5, B=1.9, T=0.63329, kind="deficit",
                 t_min=0.05, t_max=1.0, b_min=0.05, b_max=2.4),
    "fig6": dict(J=1.0, Jz=-1.5, B=1.9, kind="deficit", t_min=0.55, t_max=0.7),
    "fig7": dict(J=1.0, Jz=1.02, B=1.0, T=0.83, kind="discord",
                 t_min=0.7, t_max=1.0, b_min=0.8, b_max=1.2),
    "fig8": dict(J=1.0, Jz=1.02, B=1.0, kind="discord", t_min=0.7, t_max=0.95),
}


class InProcessTransport(httpx.BaseTransport):
    """Serve httpx requests by calling the ASGI app directly.

    One event loop per request; plenty for a CLI, and it keeps the client
    exercising the exact wire format of a deployed service.
    """

    def __init__(self, app):
        self._app = app

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        import asyncio

        body = request.read()
        scope = {
            "type": "http",
            "asgi": {"version": "3.0", "spec_version": "2.1"},
            "http_version": "1.1",
            "method": request.method,
            "scheme": request.url.scheme,
            "path": request.url.path,
            "raw_path": request.url.raw_path,
            "query_string": request.url.query,
            "headers": request.headers.raw,
            "client": ("127.0.0.1", 0),
            "server": (request.url.host or "inprocess", request.url.port or 80),
            "root_path": "",
        }

        async def run() -> tuple[int, list, bytes]:
            status: dict = {}
            chunks: list[bytes] = []
            delivered = False

            async def receive():
                nonlocal delivered
                if delivered:
                    return {"type": "http.disconnect"}
                delivered = True
                return {"type": "http.request", "body": body, "more_body": False}

            async def send(message):
                if message["type"] == "http.response.start":
                    status["code"] = message["status"]
                    status["headers"] = message.get("headers", [])
                elif message["type"] == "http.response.body":
                    chunks.append(message.get("body", b""))

            await self._app(scope, receive, send)
            return status["code"], status["headers"], b"".join(chunks)

        code, headers, content = asyncio.run(run())
        return httpx.Response(code, headers=headers, content=content, request=request)


def _make_client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    from .service import create_app

    return httpx.Client(
        transport=InProcessTransport(create_app()), base_url="http://inprocess"
    )


def _add_model_args(p: argparse.ArgumentParser, with_t: bool = True) -> None:
    p.add_argument("--J", type=float, default=None, help="transverse coupling (default 1)")
    p.add_argument("--Jz", type=float, default=None, help="longitudinal coupling (default 0)")
    p.add_argument("--B", type=float, default=None, help="magnetic field (default 0)")
    if with_t:
        p.add_argument("--T", type=float, default=None, help="temperature, energy units")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None,
                   help="fill unset parameters from a figure preset")


def _apply_preset(args: argparse.Namespace, keys: list[str]) -> dict:
    """Resolve CLI options against the preset (explicit flags win)."""
    preset = PRESETS.get(getattr(args, "preset", None) or "", {})
    fallback = {"J": 1.0, "Jz": 0.0, "B": 0.0, "kind": "deficit"}
    out = {}
    for key in keys:
        val = getattr(args, key.replace("-", "_"), None)
        if val is None:
            val = preset.get(key, fallback.get(key))
        if val is None:
            raise SystemExit(f"missing required option --{key}")
        out[key] = val
    return out


def _write(path: str | None, text: str, *, default_stdout: bool = False) -> None:
    if path:
        Path(path).write_text(text)
    elif default_stdout:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _fail_from_response(resp: httpx.Response) -> int:
    try:
        payload = resp.json()
    except ValueError:
        payload = {"detail": resp.text}
    sys.stderr.write(f"error: {json.dumps(payload)}\n")
    if resp.status_code == 409 and payload.get("error") in ("no_bracket", "pair_not_born"):
        return EXIT_NO_BRACKET
    return EXIT_INVALID


def cmd_point(args: argparse.Namespace, client: httpx.Client) -> int:
    body = _apply_preset(args, ["J", "Jz", "B", "T", "kind"])
    body["unit"] = args.unit
    body["grid_n"] = args.grid_n
    resp = client.post("/point", json=body)
    if resp.status_code != 200:
        return _fail_from_response(resp)
    text = json.dumps(resp.json(), indent=2)
    _write(args.out, text, default_stdout=True)
    return EXIT_OK


def cmd_profile(args: argparse.Namespace, client: httpx.Client) -> int:
    body = _apply_preset(args, ["J", "Jz", "B", "T"])
    body.update(n_theta=args.n_theta, unit=args.unit)
    resp = client.post("/profile", json=body)
    if resp.status_code != 200:
        return _fail_from_response(resp)
    _write(args.out, resp.text, default_stdout=True)
    return EXIT_OK


def cmd_scan(args: argparse.Namespace, client: httpx.Client) -> int:
    body = _apply_preset(args, ["J", "Jz", "B", "kind", "t-min", "t-max"])
    body = {
        "J": body["J"], "Jz": body["Jz"], "B": body["B"], "kind": body["kind"],
        "t_min": body["t-min"], "t_max": body["t-max"],
        "n": args.n, "unit": args.unit, "fit_window": args.fit_window,
    }
    resp = client.post("/scan", json=body)
    if resp.status_code != 200:
        return _fail_from_response(resp)
    payload = resp.json()
    _write(args.out, payload["csv"], default_stdout=True)
    reports_path = args.reports or (
        str(Path(args.out).with_suffix("")) + "_transitions.json" if args.out else None
    )
    sidecar = json.dumps(
        {"schema": payload["schema"], "transitions": payload["transitions"]}, indent=2
    )
    if reports_path:
        Path(reports_path).write_text(sidecar + "\n")
    if args.require_transition and not payload["transitions"]:
        sys.stderr.write("error: no transition found in the scanned range\n")
        return EXIT_NO_TRANSITION
    return EXIT_OK


def cmd_boundary(args: argparse.Namespace, client: httpx.Client) -> int:
    body = _apply_preset(args, ["J", "Jz"])
    body.update(
        boundary=args.kind,
        kind=args.correlation,
        b_min=args.b_min, b_max=args.b_max, n_b=args.n_b,
        t_min=args.t_min, t_max=args.t_max,
    )
    resp = client.post("/boundary", json=body)
    if resp.status_code != 200:
        return _fail_from_response(resp)
    _write(args.out, resp.text, default_stdout=True)
    return EXIT_OK


def cmd_phase_diagram(args: argparse.Namespace, client: httpx.Client) -> int:
    body = _apply_preset(args, ["J", "Jz", "kind", "t-min", "t-max", "b-min", "b-max"])
    body = {
        "J": body["J"], "Jz": body["Jz"], "kind": body["kind"],
        "t_min": body["t-min"], "t_max": body["t-max"],
        "b_min": body["b-min"], "b_max": body["b-max"],
        "resolution": args.resolution,
    }
    resp = client.post("/phase-diagram", json=body)
    if resp.status_code != 200:
        return _fail_from_response(resp)
    payload = resp.json()
    prefix = args.out_prefix
    Path(f"{prefix}_grid.csv").write_text(payload["grid_csv"])
    for name, text in payload["boundaries"].items():
        Path(f"{prefix}_boundary_{name.replace('-', '_')}.csv").write_text(text)
    sys.stdout.write(
        f"wrote {prefix}_grid.csv and {len(payload['boundaries'])} boundary files\n"
    )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, client: httpx.Client) -> int:
    body: dict = {"seed": args.seed}
    if args.suite:
        body["suites"] = args.suite
    resp = client.post("/verify", json=body)
    if resp.status_code != 200:
        return _fail_from_response(resp)
    payload = resp.json()
    for suite in payload["suites"]:
        flag = "PASS" if suite["passed"] else "FAIL"
        sys.stdout.write(f"{flag}  {suite['name']}: {suite['detail']}\n")
    return EXIT_OK if payload["passed"] else EXIT_VERIFY_FAILED


def cmd_serve(args: argparse.Namespace, client: httpx.Client) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xxzcorr",
        description=(
            "Quantum discord and one-way work deficit of the two-qubit XXZ "
            "dimer: point evaluation, angle profiles, temperature scans with "
            "transition reports, phase boundaries and phase diagrams."
        ),
    )
    parser.add_argument(
        "--server", default=None,
        help="base URL of a running service (default: in-process)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="optimized correlation at one (T, B)")
    _add_model_args(p)
    p.add_argument("--kind", choices=["deficit", "discord"], default=None)
    p.add_argument("--unit", choices=["nats", "bits"], default="nats")
    p.add_argument("--grid-n", type=int, default=181)
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("profile", help="entropy/correlation profile over theta (CSV)")
    _add_model_args(p)
    p.add_argument("--n-theta", type=int, default=181)
    p.add_argument("--unit", choices=["nats", "bits"], default="bits")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("scan", help="temperature path scan + transition reports")
    _add_model_args(p, with_t=False)
    p.add_argument("--kind", choices=["deficit", "discord"], default=None)
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--unit", choices=["nats", "bits"], default="bits")
    p.add_argument("--fit-window", type=float, default=0.02)
    p.add_argument("--out", default=None, help="CSV path (transitions JSON beside it)")
    p.add_argument("--reports", default=None, help="explicit transitions JSON path")
    p.add_argument("--require-transition", action="store_true",
                   help="exit 3 when the scan contains no transition")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("boundary", help="trace one phase boundary (CSV)")
    _add_model_args(p, with_t=False)
    p.add_argument("--kind", required=True,
                   choices=["zero", "pi-half", "zero-prime", "branch-swap"],
                   help="which boundary to trace")
    p.add_argument("--correlation", choices=["deficit", "discord"], default="deficit")
    p.add_argument("--b-min", type=float, default=0.5)
    p.add_argument("--b-max", type=float, default=2.5)
    p.add_argument("--n-b", type=int, default=41)
    p.add_argument("--t-min", type=float, default=0.02)
    p.add_argument("--t-max", type=float, default=60.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("phase-diagram", help="branch labels on a (T, B) grid + boundaries")
    _add_model_args(p, with_t=False)
    p.add_argument("--kind", choices=["deficit", "discord"], default=None)
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--b-min", type=float, default=None)
    p.add_argument("--b-max", type=float, default=None)
    p.add_argument("--resolution", type=int, default=32)
    p.add_argument("--out-prefix", default="phase_diagram")
    p.set_defaults(func=cmd_phase_diagram)

    p = sub.add_parser("verify", help="run the cross-route property suites")
    p.add_argument("--suite", action="append", default=None,
                   help="suite name (repeatable); default: all")
    p.add_argument("--seed", type=int, default=20240817)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP service with uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args, None)
    with _make_client(args.server) as client:
        try:
            return args.func(args, client)
        except httpx.HTTPError as exc:
            sys.stderr.write(f"error: cannot reach service: {exc}\n")
            return EXIT_INVALID


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
