"""Command-line front end: a thin client over the service handlers.

Every command builds a typed request, dispatches it (in-process by default,
or to a running service with ``--server``), and writes the response as
canonical JSON.  With a fixed ``--seed`` the written output is byte
identical across runs and thread counts; the wall clock is therefore
reported on stderr, not embedded in the output file.

Exit codes: 0 success, 2 input or schema error, 3 internal contradiction.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import pydantic

from . import __version__, schemas
from .criteria import ContradictionError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONTRADICTION = 3

_ENDPOINTS = {
    "analyze": ("/analyze", schemas.AnalyzeRequest, schemas.AnalyzeResponse),
    "extinction-curve": ("/extinction-curve", schemas.CurveRequest, schemas.CurveResponse),
    "certificate": ("/certificate", schemas.CertificateRequest, schemas.CertificateResponse),
    "simulate": ("/simulate", schemas.SimulateRequest, schemas.SimulateResponse),
    "select": ("/select", schemas.SelectRequest, schemas.SelectResponse),
    "percolate": ("/percolate", schemas.PercolateRequest, schemas.PercolateResponse),
    "reproduce": ("/reproduce", schemas.ReproduceRequest, schemas.ReproduceResponse),
}


def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _schedule_doc(path: str):
    """A schedule file holds either a bare schedule document or an analysis
    config with a ``schedule`` key; unknown fields are rejected either way."""
    payload = _load_json(path)
    if isinstance(payload, dict) and "schedule" in payload:
        return schemas.AnalysisConfigDoc.model_validate(payload).schedule
    return schemas.parse_schedule_document(payload)


def _dispatch(command: str, request, server: str | None):
    path, _, response_cls = _ENDPOINTS[command]
    if server is None:
        from .service import handlers

        fn = {
            "analyze": handlers.analyze,
            "extinction-curve": handlers.curve,
            "certificate": handlers.certificate,
            "simulate": handlers.simulate,
            "select": handlers.select,
            "percolate": handlers.percolate,
            "reproduce": handlers.reproduce,
        }[command]
        return fn(request)
    import httpx

    reply = httpx.post(server.rstrip("/") + path,
                       json=request.model_dump(mode="json"), timeout=600.0)
    if reply.status_code != 200:
        raise ValueError(f"server returned {reply.status_code}: {reply.text}")
    return response_cls.model_validate(reply.json())


def _canonical(payload: dict) -> bytes:
    return (json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n").encode()


def _emit(response, out: str | None, fmt: str = "json", csv_rows=None,
          csv_header: str | None = None) -> None:
    payload = response.model_dump(mode="json")
    wall = payload.get("meta", {}).pop("wall_clock_s", None)
    if fmt == "csv":
        body = (csv_header + "\n" + "\n".join(
            ",".join(str(v) for v in row) for row in csv_rows) + "\n").encode()
    else:
        body = _canonical(payload)
    if out:
        Path(out).write_bytes(body)
    else:
        sys.stdout.buffer.write(body)
    if wall is not None:
        print(f"wall clock: {wall}s", file=sys.stderr)


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--server", help="dispatch to a running service at this URL")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bpve",
        description="Survival/extinction analysis and Monte Carlo for "
                    "branching processes in varying environment.")
    parser.add_argument("--version", action="version", version=f"bpve {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the criteria battery on a config file")
    p.add_argument("--config", required=True, help="JSON config (schedule + options)")
    p.add_argument("--horizon", type=int)
    p.add_argument("--bpws-horizon", type=int)
    p.add_argument("--n0", type=int)
    p.add_argument("--stabilization-rel-tol", type=float)
    _add_out(p)

    p = sub.add_parser("extinction-curve", help="backward extinction recursion")
    p.add_argument("--schedule", required=True)
    p.add_argument("--horizon", type=int, default=200)
    _add_out(p)

    p = sub.add_parser("certificate", help="build a survival certificate")
    p.add_argument("--schedule", required=True)
    p.add_argument("--n0", type=int, default=0)
    p.add_argument("--horizon", type=int)
    p.add_argument("--tolerance", type=float, default=1e-10)
    _add_out(p)

    p = sub.add_parser("simulate", help="population Monte Carlo")
    p.add_argument("--schedule", required=True)
    p.add_argument("--horizon", type=int, default=200)
    p.add_argument("--replicas", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=10_000_000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--trajectory", action="store_true",
                   help="include the replica-0 trajectory in the output")
    _add_out(p)

    p = sub.add_parser("select", help="selection-process Monte Carlo")
    p.add_argument("--schedule", required=True)
    p.add_argument("--start-label", type=float, default=0.0)
    p.add_argument("--horizon", type=int, default=200)
    p.add_argument("--replicas", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=1_000_000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--interval", type=float, nargs=2, metavar=("A", "B"),
                   help="watch interval [A, B) for local survival")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--trajectory", action="store_true")
    _add_out(p)

    p = sub.add_parser("percolate", help="accessible-path counting on trees")
    p.add_argument("--schedule", required=True)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--replicas", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--engine", choices=("frontier", "dfs"), default="frontier")
    _add_out(p)

    p = sub.add_parser("reproduce", help="run a catalogued worked example")
    p.add_argument("example_id")
    p.add_argument("--seed", type=int)
    _add_out(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _run(args: argparse.Namespace) -> int:
    cmd = args.command
    if cmd == "serve":
        import uvicorn

        from .service import app as service_app

        uvicorn.run(service_app.app, host=args.host, port=args.port)
        return EXIT_OK

    if cmd == "analyze":
        payload = _load_json(args.config)
        cfg = schemas.AnalysisConfigDoc.model_validate(payload)
        overrides = {
            k: v for k, v in (
                ("horizon", args.horizon),
                ("bpws_horizon", args.bpws_horizon),
                ("n0", args.n0),
                ("stabilization_rel_tol", args.stabilization_rel_tol),
            ) if v is not None
        }
        if overrides:
            cfg = cfg.model_copy(update=overrides)
        request = schemas.AnalyzeRequest(config=cfg)
        response = _dispatch(cmd, request, args.server)
        _emit(response, args.out)
        return EXIT_OK

    if cmd == "extinction-curve":
        request = schemas.CurveRequest(schedule=_schedule_doc(args.schedule),
                                       horizon=args.horizon)
        _emit(_dispatch(cmd, request, args.server), args.out)
        return EXIT_OK

    if cmd == "certificate":
        request = schemas.CertificateRequest(
            schedule=_schedule_doc(args.schedule), n0=args.n0,
            horizon=args.horizon, tolerance=args.tolerance)
        _emit(_dispatch(cmd, request, args.server), args.out)
        return EXIT_OK

    if cmd == "simulate":
        fmt = args.format
        if fmt == "csv" and args.replicas != 1:
            raise ValueError("csv output is a single-trajectory dump; use --replicas 1")
        request = schemas.SimulateRequest(
            schedule=_schedule_doc(args.schedule), horizon=args.horizon,
            replicas=args.replicas, seed=args.seed, cap=args.cap,
            threads=args.threads, trajectory=args.trajectory or fmt == "csv")
        response = _dispatch(cmd, request, args.server)
        _emit(response, args.out, fmt=fmt, csv_rows=response.trajectory,
              csv_header="generation,Z_n")
        return EXIT_OK

    if cmd == "select":
        fmt = args.format
        if fmt == "csv" and args.replicas != 1:
            raise ValueError("csv output is a single-trajectory dump; use --replicas 1")
        interval = tuple(args.interval) if args.interval else None
        request = schemas.SelectRequest(
            schedule=_schedule_doc(args.schedule), start_label=args.start_label,
            horizon=args.horizon, replicas=args.replicas, seed=args.seed,
            cap=args.cap, threads=args.threads, interval=interval,
            trajectory=args.trajectory or fmt == "csv")
        response = _dispatch(cmd, request, args.server)
        _emit(response, args.out, fmt=fmt, csv_rows=response.trajectory,
              csv_header="generation,N_n,l_n,count_in_I")
        return EXIT_OK

    if cmd == "percolate":
        request = schemas.PercolateRequest(
            schedule=_schedule_doc(args.schedule), depth=args.depth,
            replicas=args.replicas, seed=args.seed, engine=args.engine)
        _emit(_dispatch(cmd, request, args.server), args.out)
        return EXIT_OK

    if cmd == "reproduce":
        request = schemas.ReproduceRequest(example_id=args.example_id, seed=args.seed)
        response = _dispatch(cmd, request, args.server)
        _emit(response, args.out)
        for check in response.checks:
            flag = "PASS" if check["passed"] else "FAIL"
            print(f"[{flag}] {check['name']}: expected {check['expected']}, "
                  f"observed {check['observed']}", file=sys.stderr)
        return EXIT_OK if response.passed else 1

    raise ValueError(f"unknown command {cmd!r}")


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _run(args)
    except ContradictionError as exc:
        print(f"contradiction: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    except (pydantic.ValidationError, json.JSONDecodeError, OSError,
            ValueError, OverflowError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
