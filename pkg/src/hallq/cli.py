"""Batch driver: quiver ingestion, table exports, verification suites.

Quiver spec files are flat JSON: vertices (names), arrows
({name, from, to}), aut_vertices / aut_arrows (name maps, optional),
p, e.  Names are sorted before anything else happens, so reordered
declarations canonicalize to the same digests and cache keys.

Exit codes: 0 all checks passed, 1 a check failed, 2 a resource bound
was hit (the offending grading is named), 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from hallq.cache import TableCache, quiver_digest
from hallq.checks import CHECKS, Workbench, check_serre, check_shift
from hallq.quiver import QuiverError, QuiverWithAut, splittings
from hallq.repspace import Bounds, SpaceTooLarge


class InputError(Exception):
    pass


def load_quiver_file(path: str):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    try:
        quiver = QuiverWithAut.build(
            doc["vertices"],
            [(a["name"], a["from"], a["to"]) for a in doc["arrows"]],
            doc.get("aut_vertices"),
            doc.get("aut_arrows"),
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: malformed quiver document ({exc})") from exc
    except QuiverError as exc:
        raise InputError(f"{path}: {exc}") from exc
    p = doc.get("p", 2)
    e = doc.get("e", 1)
    return quiver, p, e


def parse_dim(text: str):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"bad dimension vector {text!r}") from exc


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_orbits(bench: Workbench, args) -> int:
    nu = bench.space.check_dim(parse_dim(args.dim))
    tab = bench.space.orbit_table(nu)
    lines = ["orbit_id\trep_code\tsize\taut_order"]
    for k in range(tab.n_orbits):
        lines.append(f"{k}\t{int(tab.reps[k])}\t{int(tab.sizes[k])}\t{tab.auts[k]}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_hall(bench: Workbench, args) -> int:
    nu = bench.space.check_dim(parse_dim(args.dim))
    lines = ["dim\tsub_dim\tM_id\tN_id\tL_id\tg"]
    dim_s = ",".join(map(str, nu))
    for nu1, nu2 in splittings(bench.space.orbits, nu):
        sub_s = ",".join(map(str, nu2))
        for L in bench.space.classes(nu):
            for (kq, kn), g in sorted(bench.hall.census(L, nu2).items()):
                lines.append(f"{dim_s}\t{sub_s}\t{kq}\t{kn}\t{L.orbit}\t{g}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_check(bench: Workbench, args) -> int:
    name = args.name
    if name == "serre":
        report = check_serre(bench, jobs=args.jobs)
    elif name == "shift":
        report = check_shift(bench, samples=args.samples, seed=args.seed, jobs=args.jobs)
    else:
        report = CHECKS[name](bench, args.max_total_dim, jobs=args.jobs)
    report["quiver"] = quiver_digest(bench.space.quiver, bench.space.field.p, bench.space.field.e)
    _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    return 0 if report["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hallq", description=__doc__)
    ap.add_argument("--quiver", required=True, help="path to a quiver spec JSON file")
    ap.add_argument("--q-power", type=int, default=None, metavar="E",
                    help="override the base extension degree e (p comes from the file)")
    ap.add_argument("--cache", default=os.environ.get("HALLQ_CACHE") or None,
                    help="cache directory (default: env HALLQ_CACHE)")
    ap.add_argument("--jobs", type=int, default=1, help="worker threads for the instance loop")
    ap.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    ap.add_argument("--max-points", type=int, default=Bounds.max_points,
                    help="point-space enumeration bound")
    ap.add_argument("--out", default=None, help="write output to this file instead of stdout")

    sub = ap.add_subparsers(dest="command", required=True)

    p_orb = sub.add_parser("orbits", help="emit the orbit table for one grading as TSV")
    p_orb.add_argument("--dim", required=True, help="dimension vector, comma separated")

    p_hall = sub.add_parser("hall", help="emit submodule counts for one grading as TSV")
    p_hall.add_argument("--dim", required=True, help="dimension vector, comma separated")

    p_chk = sub.add_parser("check", help="run a verification suite, emit a JSON report")
    p_chk.add_argument("name", choices=sorted(CHECKS))
    p_chk.add_argument("--max-total-dim", type=int, default=3)
    p_chk.add_argument("--samples", type=int, default=500, help="sample count for shift")

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        quiver, p, e = load_quiver_file(args.quiver)
        if args.q_power is not None:
            e = args.q_power
        cache = TableCache(args.cache) if args.cache else None
        bounds = Bounds(max_points=args.max_points)
        bench = Workbench(quiver, p, e, bounds=bounds, cache=cache)
        if args.command == "orbits":
            return cmd_orbits(bench, args)
        if args.command == "hall":
            return cmd_hall(bench, args)
        return cmd_check(bench, args)
    except InputError as exc:
        print(f"hallq: input error: {exc}", file=sys.stderr)
        return 3
    except QuiverError as exc:
        print(f"hallq: input error: {exc}", file=sys.stderr)
        return 3
    except SpaceTooLarge as exc:
        print(f"hallq: resource bound: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
