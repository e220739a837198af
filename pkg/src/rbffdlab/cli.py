"""Thin command-line client of the experiment service.

The CLI never computes anything itself: it assembles a config, POSTs it to
the service, and writes the returned artifacts to the output directory. By
default the service app is mounted in-process (no server needed); pass
--server to target a running instance instead. `rbffdlab serve` starts one.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

RUN_KINDS = ("solve", "sweep", "converge", "split", "signfield")

_REGION_FLAG = {"none": "none", "near": "near_boundary", "far": "far"}


def _floats_csv(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints_csv(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _add_run_flags(p: argparse.ArgumentParser):
    # Defaults stay None so only flags the user typed override --config.
    p.add_argument("--h", type=float, help="discretization spacing (default 0.01)")
    p.add_argument("--n", type=int, help="stencil size for a single solve")
    p.add_argument("--n-min", type=int, help="sweep lower bound (default 13)")
    p.add_argument("--n-max", type=int, help="sweep upper bound (default 69)")
    p.add_argument("--h-list", type=_floats_csv, metavar="H1,H2,...",
                   help="spacings for converge (default 0.04,0.02,0.01)")
    p.add_argument("--n-list", type=_ints_csv, metavar="N1,N2,...",
                   help="stencil sizes for converge/signfield (default 17,28,35,46)")
    p.add_argument("--seed", type=int, help="node generation seed (default 0)")
    p.add_argument("--solver", choices=["iterative", "dense"],
                   help="linear solver (default iterative)")
    p.add_argument("--tol", type=float, help="iterative solver tolerance (default 1e-10)")
    p.add_argument("--r-split", type=float, help="near-boundary split radius (default 0.4)")
    p.add_argument("--fixed-region", choices=["none", "near", "far"],
                   help="region pinned at --fixed-n in the split experiment")
    p.add_argument("--fixed-n", type=int, help="pinned stencil size (default 28)")
    p.add_argument("--radius", type=float, help="disc radius (default 0.5)")
    p.add_argument("--center", type=_floats_csv, metavar="X,Y",
                   help="disc center (default 0.5,0.5)")
    p.add_argument("--out", type=str, help="artifact directory (default runs/<command>)")
    p.add_argument("--config", type=str, metavar="FILE",
                   help="JSON config file; explicit flags override it")
    p.add_argument("--server", type=str, metavar="URL",
                   help="remote service URL (default: run in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbffdlab",
        description="Meshless RBF-FD Poisson experiments over a disc",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "solve": "solve one (h, n) configuration and dump its sign field",
        "sweep": "sweep the stencil size over a fixed node set",
        "converge": "h-refinement study with log-log slopes",
        "split": "sweep with one region pinned at a fixed stencil size",
        "signfield": "signed error fields for selected stencil sizes",
    }
    for kind in RUN_KINDS:
        _add_run_flags(sub.add_parser(kind, help=helps[kind]))
    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _config_payload(args: argparse.Namespace) -> dict:
    payload: dict = {}
    if args.config:
        payload.update(json.loads(Path(args.config).read_text()))
    overrides = {
        "h": args.h,
        "n": args.n,
        "n_min": args.n_min,
        "n_max": args.n_max,
        "h_list": args.h_list,
        "n_list": args.n_list,
        "seed": args.seed,
        "solver": args.solver,
        "tol": args.tol,
        "r_split": args.r_split,
        "fixed_n": args.fixed_n,
        "radius": args.radius,
        "out": args.out,
    }
    if args.center is not None:
        overrides["center"] = args.center
    if args.fixed_region is not None:
        overrides["fixed_region"] = _REGION_FLAG[args.fixed_region]
    payload.update({k: v for k, v in overrides.items() if v is not None})
    return payload


async def _post(kind: str, payload: dict, server: str | None) -> httpx.Response:
    if server:
        async with httpx.AsyncClient(base_url=server, timeout=None) as client:
            return await client.post(f"/{kind}", json=payload)
    from .service import app

    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(
        transport=transport, base_url="http://rbffdlab.internal", timeout=None
    ) as client:
        return await client.post(f"/{kind}", json=payload)


def _print_summary(kind: str, summary: dict):
    if kind == "solve":
        for key in ("e_poiss_max", "e_poiss_avg", "e_lap_max", "e_lap_avg",
                    "dN_poiss", "dN_lap", "iters", "residual"):
            print(f"{key} = {summary[key]}")
    elif kind == "sweep":
        print(f"rows = {summary['rows']}")
        print(f"minima at n = {summary['minima_n']}")
        print(f"maxima at n = {summary['maxima_n']}")
        if summary["failures"]:
            print(f"failures: {summary['failures']}")
    elif kind == "converge":
        for n, slope in summary["slopes"].items():
            print(f"n={n}: slope = {slope:.4f}")
    elif kind == "split":
        print(f"mode = {summary['mode']} (fixed_n = {summary['fixed_n']})")
        print(f"baseline minima at n = {summary['baseline_minima_n']}")
        print(f"fixed minima at n = {summary['fixed_minima_n']}")
    elif kind == "signfield":
        for n, dns in summary["dN"].items():
            print(f"n={n}: dN_poiss = {dns['dN_poiss']:+.4f}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    payload = _config_payload(args)
    try:
        response = asyncio.run(_post(args.command, payload, args.server))
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return 1
    if response.status_code != 200:
        try:
            detail = response.json().get("detail")
        except ValueError:
            detail = response.text
        print(f"error ({response.status_code}): {json.dumps(detail)}", file=sys.stderr)
        return 1

    body = response.json()
    out_dir = Path(args.out or payload.get("out") or Path("runs") / args.command)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, content in body["artifacts"].items():
        (out_dir / name).write_text(content)
    _print_summary(args.command, body["summary"])
    print(f"artifacts written to {out_dir}/: {', '.join(sorted(body['artifacts']))}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
