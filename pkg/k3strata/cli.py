"""
Command-line front end.

    k3strata [--config PATH] [--format json|csv] [--output PATH] [--verbose]
             [--seed-fixtures [DIR]] <group> <command> [flags]

JSON output is canonical (sorted keys, deterministic witnesses); CSV is a flat
projection without witnesses. Exit codes: 0 on success, 1 on domain errors, 2 on
usage errors.
"""
import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

from .config import Config, settings_workers
from .core import unlock
from .coverage import (
    LEMMA_MODULUS,
    REMARK_N_MAX,
    REMARK_N_MIN,
    achievable_degrees,
    coverage_threshold,
    paper_bounds_report,
    reachable_residues,
    report_to_rows,
    verify_lemma_res,
    verify_remark_range,
)
from .errors import K3StrataError
from .fieldarith import (
    EllipticCurveData,
    classify_kummer_of_product,
    classify_kummer_of_profile,
    count_points_batch,
    curve_row,
    read_curves,
)
from .fixtures import seed_fixtures
from .kummer import (
    NUM_PARTS,
    AbelianSlopeProfile,
    KummerParams,
    check_ampleness,
    kummer_slopes,
    polarization_degree,
    self_intersection_on_blowup,
    variant_from_name,
)
from .polygon import NewtonPolygon, classify, height_of, make_newton, newton_from_height, parse_slopes

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


@dataclass
class Output:
    """A command result; rows is the flat CSV projection, [payload] when absent."""

    payload: object
    rows: Optional[List[dict]] = None


def _parse_int_list(text: str) -> List[int]:
    """"1,2,2" or "1,2*15"; `v*k` repeats v k times."""
    values: List[int] = []
    for item in filter(None, (part.strip() for part in text.split(","))):
        value, _, count = item.partition("*")
        try:
            values.extend([int(value)] * (int(count) if count else 1))
        except ValueError:
            raise argparse.ArgumentTypeError(f"cannot read '{item}' as an integer or v*count")
    return values


def _read_json(path: str) -> dict:
    with open(path, "r") as handle:
        return json.load(handle)


def _read_lines(path: str) -> List[str]:
    with open(path, "r") as handle:
        return handle.readlines()


# polygon

def _load_polygon(args) -> NewtonPolygon:
    if args.input is not None:
        return NewtonPolygon.from_dict(_read_json(args.input))
    return make_newton(args.weight, args.rank, parse_slopes(args.slopes))


def polygon_classify(args, settings: Config) -> Output:
    return Output(classify(_load_polygon(args)).to_dict())


def polygon_from_height(args, settings: Config) -> Output:
    polygon = newton_from_height(args.height)
    return Output(polygon.to_dict(), [{"height": height_of(polygon).to_json(), "slopes": " ".join(map(str, polygon.slopes()))}])


# kummer

def _load_profile(args) -> AbelianSlopeProfile:
    if args.profile is not None:
        return AbelianSlopeProfile.parse(args.profile)
    return {
        "ordinary": AbelianSlopeProfile.ordinary,
        "p-rank-one": AbelianSlopeProfile.p_rank_one,
        "supersingular": AbelianSlopeProfile.supersingular,
    }[args.type]()


def _load_params(args) -> KummerParams:
    if args.input is not None:
        return KummerParams.from_dict(_read_json(args.input))
    if args.n is None or args.dprime is None:
        raise argparse.ArgumentTypeError("give --n and --dprime, or --input")
    parts = args.parts if args.parts is not None else [1] * NUM_PARTS
    return KummerParams(args.n, args.dprime, tuple(parts))


def kummer_slopes_command(args, settings: Config) -> Output:
    profile = _load_profile(args)
    polygon = kummer_slopes(profile)
    payload = {"profile": profile.to_json(), "polygon": polygon.to_dict(), "height": height_of(polygon).to_json()}
    return Output(payload, [{"profile": str(profile), "height": payload["height"]}])


def kummer_degree(args, settings: Config) -> Output:
    params = _load_params(args)
    payload = {"d": polarization_degree(params)}
    if args.self_intersection:
        payload["self_intersection"] = self_intersection_on_blowup(params)
    return Output(payload)


def kummer_check_ampleness(args, settings: Config) -> Output:
    report = check_ampleness(_load_params(args), variant_from_name(args.variant, args.m))
    row = {"d": report.degree, "ample": report.ample, "failures": " ".join(report.failures())}
    return Output(report.to_dict(), [row])


# coverage

def coverage_residues(args, settings: Config) -> Output:
    residues = reachable_residues(args.modulus, args.k, args.max_part, method=args.method)
    row = {"modulus": residues.modulus, "count": len(residues.members), "full": residues.is_full}
    return Output(residues.to_dict(), [row])


def coverage_verify_lemma_res(args, settings: Config) -> Output:
    payload = {"verified": verify_lemma_res(args.max_part), "modulus": LEMMA_MODULUS, "max_part": args.max_part}
    return Output(payload)


def coverage_verify_remark(args, settings: Config) -> Output:
    if args.n is None:
        remark = settings.get("remark", Config({}))
        n_min, n_max = remark.get("n_min", REMARK_N_MIN), remark.get("n_max", REMARK_N_MAX)
    else:
        n_min, n_max = args.n, args.through if args.through is not None else args.n
    results = verify_remark_range(n_min, n_max, settings_workers(settings))
    rows = [{"n": n, "verified": ok} for n, ok in sorted(results.items())]
    return Output({"verified": all(results.values()), "results": rows}, rows)


def coverage_threshold_command(args, settings: Config) -> Output:
    result = coverage_threshold(args.n, args.dprime_min, args.max_part, variant_from_name(args.variant, args.m))
    return Output(result.to_dict(), [result.to_row()])


def coverage_degrees(args, settings: Config) -> Output:
    degrees = achievable_degrees(
        args.n, (args.dprime_low, args.dprime_high), args.max_part, args.parts, args.parity, args.p
    )
    return Output({"count": len(degrees), "degrees": degrees}, [{"d": d} for d in degrees])


def coverage_report(args, settings: Config) -> Output:
    sample = args.sample if args.sample is not None else settings.get("report", Config({})).get("sample_degrees", 10)
    report = paper_bounds_report(settings.get("families"), p=args.p, sample=sample)
    return Output(report, report_to_rows(report))


# curves and surfaces

def _load_curves(args) -> List[EllipticCurveData]:
    if args.input is not None:
        return read_curves(_read_lines(args.input))
    if args.p is None or args.a is None or args.b is None:
        raise argparse.ArgumentTypeError("give --p, --a and --b, or --input")
    return [EllipticCurveData.create(args.p, args.a, args.b)]


def curve_count(args, settings: Config) -> Output:
    curves = _load_curves(args)
    counts = count_points_batch(curves, settings_workers(settings))
    rows = [dict(curve.to_dict(), **frobenius.to_dict()) for curve, frobenius in zip(curves, counts)]
    return Output(rows if args.input is not None else rows[0], rows)


def surface_classify(args, settings: Config) -> Output:
    if args.profile is not None:
        classification = classify_kummer_of_profile(AbelianSlopeProfile.parse(args.profile), args.sigma0)
        return Output(classification.to_dict())
    if args.input is not None:
        rows = [curve_row(curve) for curve in read_curves(_read_lines(args.input))]
        return Output(rows, rows)
    if None in (args.p, args.a1, args.b1, args.a2, args.b2):
        raise argparse.ArgumentTypeError("give --p --a1 --b1 --a2 --b2, --profile, or --input")
    e1 = EllipticCurveData.create(args.p, args.a1, args.b1)
    e2 = EllipticCurveData.create(args.p, args.a2, args.b2)
    classification = classify_kummer_of_product(e1, e2)
    row = {
        "p": args.p,
        "profile": str(classification.profile),
        "height": classification.height.to_json(),
        "stratum": str(classification.stratum),
    }
    return Output(classification.to_dict(), [row])


def _add_params_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int)
    parser.add_argument("--dprime", type=int)
    parser.add_argument("--parts", type=_parse_int_list, help="sixteen parts, e.g. 1,2*15 (default: 1*16)")
    parser.add_argument("--input", help="JSON file {\"n\", \"dprime\", \"parts\"}")


def _add_variant_flags(parser: argparse.ArgumentParser, default: str) -> None:
    parser.add_argument("--variant", default=default, choices=("general_surface", "non_product", "min_elliptic_intersection"))
    parser.add_argument("--m", type=int, help="bound for min_elliptic_intersection")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="k3strata", description="Exact computations on height strata of K3 surfaces.", allow_abbrev=False)
    parser.add_argument("--format", choices=FORMATS, default=None)
    parser.add_argument("--output", default=None, help="write here instead of stdout")
    parser.add_argument("--verbose", action="store_true")
    parser.add_argument("--seed-fixtures", nargs="?", const="", default=None, metavar="DIR")
    groups = parser.add_subparsers(dest="group")

    def command(group, name: str, handler: Callable, summary: str) -> argparse.ArgumentParser:
        sub = group.add_parser(name, help=summary, allow_abbrev=False)
        sub.set_defaults(handler=handler)
        return sub

    polygon = groups.add_parser("polygon").add_subparsers(dest="command", required=True)
    sub = command(polygon, "classify", polygon_classify, "ordinary, finite height or supersingular")
    source = sub.add_mutually_exclusive_group(required=True)
    source.add_argument("--slopes", help='e.g. "1/2*2,1*18,3/2*2"')
    source.add_argument("--input", help="JSON polygon object")
    sub.add_argument("--weight", type=int, default=2)
    sub.add_argument("--rank", type=int, default=22)
    sub = command(polygon, "from-height", polygon_from_height, "the K3 polygon of a height")
    sub.add_argument("--height", required=True, help="1..10 or infinite")

    kummer = groups.add_parser("kummer").add_subparsers(dest="command", required=True)
    sub = command(kummer, "slopes", kummer_slopes_command, "Kummer polygon of an abelian slope profile")
    source = sub.add_mutually_exclusive_group(required=True)
    source.add_argument("--profile", help='e.g. "0,1/2,1/2,1"')
    source.add_argument("--type", choices=("ordinary", "p-rank-one", "supersingular"))
    sub = command(kummer, "degree", kummer_degree, "d = 2 n^2 d' - sum n_j^2")
    _add_params_flags(sub)
    sub.add_argument("--self-intersection", action="store_true")
    sub = command(kummer, "check-ampleness", kummer_check_ampleness, "positivity and both Seshadri bounds")
    _add_params_flags(sub)
    _add_variant_flags(sub, "general_surface")

    coverage = groups.add_parser("coverage").add_subparsers(dest="command", required=True)
    sub = command(coverage, "residues", coverage_residues, "residues of sums of squares")
    sub.add_argument("--modulus", type=int, required=True)
    sub.add_argument("--k", type=int, default=NUM_PARTS)
    sub.add_argument("--max-part", type=int, required=True)
    sub.add_argument("--method", choices=("dp", "sums"), default="dp")
    sub = command(coverage, "verify-lemma-res", coverage_verify_lemma_res, "all residues mod 162 with parts <= 4")
    sub.add_argument("--max-part", type=int, default=4)
    sub = command(coverage, "verify-remark", coverage_verify_remark, "all residues mod 2n^2 with parts < n/2")
    sub.add_argument("--n", type=int)
    sub.add_argument("--through", type=int, help="check every n up to this value")
    sub = command(coverage, "threshold", coverage_threshold_command, "degree from which every d is reached")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--dprime-min", type=int, required=True)
    sub.add_argument("--max-part", type=int, required=True)
    _add_variant_flags(sub, "non_product")
    sub = command(coverage, "degrees", coverage_degrees, "achievable degrees over a range of d'")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--dprime-low", type=int, required=True)
    sub.add_argument("--dprime-high", type=int, required=True)
    parts = sub.add_mutually_exclusive_group(required=True)
    parts.add_argument("--max-part", type=int)
    parts.add_argument("--parts", type=_parse_int_list)
    sub.add_argument("--parity", choices=("even", "odd"))
    sub.add_argument("--p", type=int, help="keep degrees prime to p")
    sub = command(coverage, "report-paper-bounds", coverage_report, "thresholds and audits for every family")
    sub.add_argument("--p", type=int, help="also list sample degrees prime to p")
    sub.add_argument("--sample", type=int)

    curve = groups.add_parser("curve").add_subparsers(dest="command", required=True)
    sub = command(curve, "count", curve_count, "#E(F_p) and the Frobenius trace")
    sub.add_argument("--p", type=int)
    sub.add_argument("--a", type=int)
    sub.add_argument("--b", type=int)
    sub.add_argument("--input", help="JSON lines {\"p\", \"a\", \"b\"}")

    surface = groups.add_parser("surface").add_subparsers(dest="command", required=True)
    sub = command(surface, "classify", surface_classify, "stratum of the Kummer surface of E1 x E2")
    sub.add_argument("--p", type=int)
    for name in ("a1", "b1", "a2", "b2"):
        sub.add_argument(f"--{name}", type=int)
    sub.add_argument("--profile", help="classify from abelian slopes instead of curves")
    sub.add_argument("--sigma0", type=int, help="Artin invariant for a supersingular --profile")
    sub.add_argument("--input", help="JSON lines of curves; classifies E x E for each")

    return parser


def configure_logging(settings: Config, verbose: bool) -> None:
    level = "DEBUG" if verbose else str(settings.get("logging", Config({})).get("level", "WARNING")).upper()
    # basicConfig is a no-op when the root logger already has handlers
    logging.basicConfig(level=level, stream=sys.stderr, format=LOG_FORMAT)
    logging.getLogger("k3strata").setLevel(level)


def render(output: Output, fmt: str, indent: Optional[int]) -> str:
    if fmt == "json":
        return json.dumps(output.payload, indent=indent, sort_keys=True) + "\n"

    rows = output.rows if output.rows is not None else [output.payload]
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()) if rows else [], lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buffer.getvalue()


def emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w") as handle:
        handle.write(text)


@unlock()
def _dispatch(settings: Config, argv: Sequence[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(settings, args.verbose)

    fixtures_path = None
    if args.seed_fixtures is not None:
        directory = args.seed_fixtures or settings.get("fixtures", Config({})).get("directory", "fixtures")
        fixtures_path = seed_fixtures(directory)

    if getattr(args, "handler", None) is None:
        if fixtures_path is None:
            parser.error("a command is required")
        output = Output({"fixtures": fixtures_path})
    else:
        try:
            output = args.handler(args, settings)
        except argparse.ArgumentTypeError as error:
            parser.error(str(error))

    output_settings = settings.get("output", Config({}))
    fmt = args.format or output_settings.get("format", "json")
    emit(render(output, fmt, output_settings.get("indent", 2)), args.output)
    return 0


def _report(error: BaseException) -> None:
    sys.stderr.write(json.dumps({"error": type(error).__name__, "message": str(error)}, sort_keys=True) + "\n")


def run(argv: Optional[Sequence[str]] = None, config: Optional[dict] = None) -> int:
    """
    Run one command and return its exit code; nothing is raised.

    Args:
        argv (list): The arguments, without the program name. Defaults to sys.argv[1:].
        config (dict): Settings overrides in dot notation, e.g. {"output.indent": None}.
    """
    try:
        return _dispatch(argv, config=config)
    except SystemExit as exit:
        if exit.code is None:
            return 0
        return exit.code if isinstance(exit.code, int) else 2
    except K3StrataError as error:
        _report(error)
        return 1
    except OSError as error:
        _report(error)
        return 1
    except Exception as error:
        logger.exception("unexpected failure")
        _report(error)
        return 1


def main() -> None:
    sys.exit(run())
