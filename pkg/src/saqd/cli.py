"""Command-line interface: `saqd run`, `saqd verify`, `saqd distance`.

Exit codes: 0 success, 2 parameter-table mismatch, 3 decoder-contract
violation, 4 configuration error.
"""

from __future__ import annotations

import argparse
import sys

from .channel import DecoderContractError
from .code import build_code
from .experiment import RunConfig, run_sweep
from .lattice import Manifold

EXIT_OK = 0
EXIT_TABLE_MISMATCH = 2
EXIT_DECODER_CONTRACT = 3
EXIT_CONFIG = 4


def _parse_ints(text):
    return tuple(int(x) for x in text.split(","))


def _parse_floats(text):
    """Comma list or start:stop:step range (stop inclusive)."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        out = []
        v = start
        while v <= stop + 1e-12:
            out.append(round(v, 12))
            v += step
        return tuple(out)
    return tuple(float(x) for x in text.split(","))


def _load_config_file(path) -> dict:
    """Flat key = value document mirroring RunConfig."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                key, val = line.split("=", 1)
            elif ":" in line:
                key, val = line.split(":", 1)
            else:
                raise ValueError(f"malformed config line: {line!r}")
            out[key.strip()] = val.strip()
    return out


def _build_parser():
    ap = argparse.ArgumentParser(prog="saqd", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Monte Carlo sweep over a parameter grid")
    run.add_argument("--config", help="flat key=value config file")
    run.add_argument("--manifold", default=None)
    run.add_argument("--d", default=None, help="comma list of local dimensions")
    run.add_argument("--L", default=None, help="comma list of linear sizes")
    run.add_argument("--p", default=None, help="comma list or start:stop:step")
    run.add_argument("--t", default=None, help="comma list of QEC cycle counts")
    run.add_argument("--trials", type=int, default=None)
    run.add_argument("--val", default=None, help="validation decoder")
    run.add_argument("--corr", default=None, help="correction decoder")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--out", default=None, help="results CSV path")
    run.add_argument("--workers", type=int, default=None)
    run.add_argument("--quiet", action="store_true")

    verify = sub.add_parser("verify", help="check (n, k) against the parameter table")
    verify.add_argument("--manifold", default="all")
    verify.add_argument("--L", default="2,4")
    verify.add_argument("--d", default="2,3,5,16")

    dist = sub.add_parser("distance", help="brute-force dressed distance")
    dist.add_argument("--manifold", required=True)
    dist.add_argument("--L", type=int, required=True)
    dist.add_argument("--d", type=int, required=True)
    dist.add_argument("--cap", type=int, default=3)
    return ap


def cmd_run(args) -> int:
    settings = {}
    if args.config:
        settings.update(_load_config_file(args.config))
    for key, val in (
        ("manifold", args.manifold),
        ("d", args.d),
        ("L", args.L),
        ("p", args.p),
        ("t", args.t),
        ("trials", args.trials),
        ("validator", args.val),
        ("corrector", args.corr),
        ("seed", args.seed),
        ("out", args.out),
    ):
        if val is not None:
            settings[key] = val
    try:
        config = RunConfig(
            manifold=str(settings["manifold"]),
            ds=_parse_ints(str(settings["d"])),
            Ls=_parse_ints(str(settings["L"])),
            ps=_parse_floats(str(settings["p"])),
            ts=_parse_ints(str(settings["t"])),
            trials=int(settings["trials"]),
            validator=str(settings.get("validator", "clustering")),
            corrector=str(settings.get("corrector", "clustering")),
            seed=int(settings.get("seed", 0)),
            out=settings.get("out"),
            z=float(settings.get("z", 1.96)),
        )
    except (KeyError, ValueError) as exc:
        print(f"saqd: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        results = run_sweep(config, workers=args.workers, progress=not args.quiet)
    except DecoderContractError as exc:
        print(f"saqd: decoder contract violation: {exc}", file=sys.stderr)
        return EXIT_DECODER_CONTRACT
    if not config.out:
        from .experiment import CSV_COLUMNS

        print(",".join(CSV_COLUMNS))
        for dp in results:
            print(dp.csv_row())
    return EXIT_OK


def cmd_verify(args) -> int:
    kinds = Manifold.KINDS if args.manifold == "all" else (args.manifold,)
    try:
        Ls = _parse_ints(args.L)
        ds = _parse_ints(args.d)
    except ValueError as exc:
        print(f"saqd: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status = EXIT_OK
    print(f"{'manifold':<12} {'L':>3} {'d':>3} {'n':>6} {'k':>3}  result")
    for kind in kinds:
        for L in Ls:
            for d in ds:
                try:
                    code = build_code(Manifold(kind, L), d)
                    n, k = code.verify_parameters()
                    print(f"{kind:<12} {L:>3} {d:>3} {n:>6} {k:>3}  ok")
                except AssertionError as exc:
                    print(f"{kind:<12} {L:>3} {d:>3} {'-':>6} {'-':>3}  MISMATCH: {exc}")
                    status = EXIT_TABLE_MISMATCH
    return status


def cmd_distance(args) -> int:
    try:
        code = build_code(Manifold(args.manifold, args.L), args.d)
    except ValueError as exc:
        print(f"saqd: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    result = code.brute_force_distance("dressed-Z", cap=args.cap)
    print(f"dressed-Z distance ({args.manifold}, L={args.L}, d={args.d}): {result}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "distance":
        return cmd_distance(args)
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
