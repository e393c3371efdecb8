import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

import envs
import storage
from local_codes import cacode, harness, lattice, stabilizer, surface, tradeoff
from local_codes.errors import GuardExceeded, InconsistencyError, StorageError

logging.basicConfig(
    format="%(asctime)s - %(name)s - %(levelname)s - %(thread)d - %(message)s",
    level=logging.DEBUG if envs.DEBUG_MODE else envs.LOG_LEVEL,
)
logger = logging.getLogger(__name__)


def _output(args, records: Sequence[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> None:
    if args.out:
        storage.write_records(records, args.out, args.format, columns)
    elif args.format == "csv":
        storage.write_csv(records, sys.stdout, columns)
    else:
        print(json.dumps([storage.json_value(r) for r in records], indent=2))


def _exit_code(reports) -> int:
    bad = [r for r in reports if not r.consistent]
    if bad:
        logger.error(f"{len(bad)} of {len(reports)} checks are inconsistent")
        return 1
    return 0


def cmd_ca_distance(args) -> int:
    code = cacode.CaCode(args.L)
    d_prime = cacode.single_seed_weight(args.L)
    d = cacode.exhaustive_distance(args.L, force=args.force, workers=args.threads)
    row = harness.CaTableRow(L=args.L, n=code.n, k=code.k, d_prime=d_prime, d_exhaustive=d)
    _output(args, [row.to_dict()], storage.CA_TABLE_COLUMNS)
    return 0


def cmd_ca_seed_weight(args) -> int:
    if args.L_max is None:
        _output(args, [{"L": args.L, "d_prime": cacode.single_seed_weight(args.L)}])
        return 0
    scan = cacode.seed_weight_scan(args.L, args.L_max, workers=args.threads)
    _output(args, [{"L": L, "d_prime": d} for L, d in scan])
    if len(scan) >= 2:
        slope, _, residual = cacode.fit_power_law([(L, d) for L, d in scan])
        storage_slope, _, storage_residual = cacode.fit_power_law(
            [(L * L, (L - 1) * d**0.5) for L, d in scan]
        )
        logger.info(f"d' ~ L^{slope:.4f} (rms {residual:.2e}); k*sqrt(d') ~ n^{storage_slope:.4f} (rms {storage_residual:.2e})")
    return 0


def cmd_ca_scan(args) -> int:
    rows = harness.scan_ca_table(args.min, args.max, args.exhaustive_up_to, args.threads)
    points = [row.to_point() for row in rows]
    if args.ca_table:
        storage.write_ca_table([row.to_dict() for row in rows], args.ca_table, args.format)
    if args.out:
        harness.emit(points, args.out, args.format)
    else:
        _output(args, [storage.point_to_record(p) for p in points], storage.POINT_COLUMNS)
    return 0


def cmd_sierpinski(args) -> int:
    records = []
    for p in range(args.p + 1) if args.all else [args.p]:
        weight = cacode.sierpinski_weight(p)
        records.append({"p": p, "weight": weight, "three_to_p": 3**p, "matches": weight == 3**p})
    _output(args, records)
    return 0 if all(r["matches"] for r in records) else 1


def cmd_surface(args) -> int:
    code = surface.surface_code(args.kind, args.size)
    if args.save_code:
        storage.save_code(code, args.save_code)
    d = args.size
    if args.verify_distance:
        d = stabilizer.min_distance_bruteforce(code, force=args.force, workers=args.threads)
    point = tradeoff.TradeoffPoint(family=args.kind, n=code.n, k=code.k, d=d)
    if args.out:
        harness.emit([point], args.out, args.format)
    else:
        _output(args, [storage.point_to_record(point)], storage.POINT_COLUMNS)
    if args.verify_distance and d != args.size:
        logger.error(f"{code.name}: brute-force distance {d} differs from the nominal {args.size}")
        return 1
    return 0


def cmd_entropy(args) -> int:
    code = storage.load_code(args.code_file)
    region = storage.load_region(args.region_file, code.lattice)
    report = stabilizer.entropy_report(code, region)
    record = report.to_dict()
    record["correctable"] = stabilizer.correctable_region(code, region)
    _output(args, [record])
    return 0


def cmd_fact1(args) -> int:
    code = storage.load_code(args.code_file)
    reports = stabilizer.fact1_sweep(code, args.max_region_size)
    _output(args, [r.to_dict() for r in reports])
    return _exit_code(reports)


def cmd_partition_abc(args) -> int:
    lat = lattice.Lattice(
        width=args.side, height=args.side, periodic_x=args.periodic, periodic_y=args.periodic
    )
    partition = lattice.abc_partition(lat, args.R, args.w, tuple(args.offset))
    if args.save_separator:
        storage.save_region(partition.c, args.save_separator)
    window = lattice.verify_window_property(partition)
    separator_bound = 16 * args.w**2 * lat.n
    record = {
        "side": args.side,
        "R": args.R,
        "w": args.w,
        "size_a": len(partition.a),
        "size_b": len(partition.b),
        "size_c": len(partition.c),
        "c_times_r2": len(partition.c) * args.R**2,
        "separator_bound": separator_bound,
        **{f"window_{k}": v for k, v in window.to_dict().items()},
    }
    _output(args, [record])
    return 0 if window.passed and record["c_times_r2"] <= separator_bound else 1


def cmd_union_check(args) -> int:
    code = storage.load_code(args.code_file)
    pairs = storage.load_region_pairs(args.regions_file, code.lattice)
    reports = [stabilizer.union_lemma_check(code, m1, m2) for m1, m2 in pairs]
    _output(args, [r.to_dict() for r in reports])
    return _exit_code(reports)


def cmd_bounds(args) -> int:
    points = storage.read_points(args.input)
    reports = harness.check_bound(points, args.which)
    _output(args, [r.to_dict() for r in reports])
    return 0


def cmd_classical_partition(args) -> int:
    code = cacode.CaCode(args.L)
    report = cacode.verify_classical_partition(code, args.b, args.w)
    _output(args, [report.to_dict()])
    return 0 if report.consistent else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="local-codes", description="Storage tradeoffs of 2D local classical and quantum codes"
    )
    parser.add_argument("--out", help="write results to this file instead of stdout")
    parser.add_argument("--format", choices=storage.FORMATS, help="csv or json (default from suffix)")
    parser.add_argument("--threads", type=int, default=None, help="worker processes")
    parser.add_argument("--force", action="store_true", help="override enumeration guards")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ca-distance", help="exhaustive distance of C_L^L")
    p.add_argument("--L", type=int, required=True)
    p.set_defaults(handler=cmd_ca_distance)

    p = sub.add_parser("ca-seed-weight", help="single-seed weight d' (optionally over a range)")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--L-max", dest="L_max", type=int, default=None)
    p.set_defaults(handler=cmd_ca_seed_weight)

    p = sub.add_parser("ca-scan", help="tradeoff points of the CA family")
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--exhaustive-up-to", dest="exhaustive_up_to", type=int, default=0)
    p.add_argument("--ca-table", dest="ca_table", default=None)
    p.set_defaults(handler=cmd_ca_scan)

    p = sub.add_parser("sierpinski", help="weight of the single-seed history over 2^p rows")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--all", action="store_true", help="every level from 0 to p")
    p.set_defaults(handler=cmd_sierpinski)

    p = sub.add_parser("surface", help="build a planar or toric code")
    p.add_argument("--kind", choices=("planar", "toric"), required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--verify-distance", dest="verify_distance", action="store_true")
    p.add_argument("--save-code", dest="save_code", default=None)
    p.set_defaults(handler=cmd_surface)

    p = sub.add_parser("entropy", help="entropies of a region")
    p.add_argument("--code-file", dest="code_file", required=True)
    p.add_argument("--region-file", dest="region_file", required=True)
    p.set_defaults(handler=cmd_entropy)

    p = sub.add_parser("fact1", help="conditional entropy identity on all small regions")
    p.add_argument("--code-file", dest="code_file", required=True)
    p.add_argument("--max-region-size", dest="max_region_size", type=int, required=True)
    p.set_defaults(handler=cmd_fact1)

    p = sub.add_parser("partition-abc", help="checkerboard partition with corner separator")
    p.add_argument("--side", type=int, required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--periodic", action="store_true")
    p.add_argument("--offset", type=int, nargs=2, default=(0, 0), metavar=("ROW", "COL"))
    p.add_argument("--save-separator", dest="save_separator", default=None, help="write region C as JSON")
    p.set_defaults(handler=cmd_partition_abc)

    p = sub.add_parser("union-check", help="union lemma on pairs of separated regions")
    p.add_argument("--code-file", dest="code_file", required=True)
    p.add_argument("--regions-file", dest="regions_file", required=True)
    p.set_defaults(handler=cmd_union_check)

    p = sub.add_parser("bounds", help="empirical constants of the tradeoff bounds")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--which", choices=harness.BOUNDS, required=True)
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("classical-partition", help="k <= |A| through separated correctable blocks")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--w", type=int, default=None)
    p.set_defaults(handler=cmd_classical_partition)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except GuardExceeded as e:
        logger.error(f"Refused: {e}")
        return 2
    except (ValueError, StorageError, InconsistencyError) as e:
        logger.error(f"Error in {args.command}: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
