"""Command-line interface.

Subcommands: generate, verify, analyze, sweep-users, sweep-power,
sweep-distance, simulate, compare.  Exit codes: 0 success, 1 verification
failure, 2 usage or parse error.  All output is deterministic for a given
flag set and seed.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from contextlib import contextmanager

from . import codebook, linkmodel, montecarlo
from .errors import DomainError, MatrixFormatError

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

# Published comparison values at 30 users: family -> (weight, length).
PUBLISHED_30_USERS = {
    "Hadamard": (16, 32),
    "MFH": (7, 42),
    "MQC": (7, 49),
    "KS": (4, 81),
    "DSC": (4, 30),
    "RD": (4, 35),
    "MS": (4, 75),
    "SW-ZCC": (1, 30),
    "ZCC": (4, 120),
    "MD": (4, 120),
    "CS": (4, 120),
}

COMPARE_COLUMNS = ("family", "users_requested", "users", "weight", "length",
                   "cross_correlation", "param", "published_length", "flagged", "note")


def parse_power_watts(text: str) -> float:
    """Power flag value: '−10dBm', '1e-4W', or a bare number meaning dBm."""
    raw = text.strip()
    lower = raw.lower()
    try:
        if lower.endswith("dbm"):
            return linkmodel.dbm_to_watts(float(raw[:-3]))
        if lower.endswith("w"):
            value = float(raw[:-1])
            if value <= 0:
                raise DomainError(f"power must be > 0 W, got {raw!r}")
            return value
        return linkmodel.dbm_to_watts(float(raw))
    except ValueError:
        raise DomainError(f"cannot parse power value {raw!r} (use e.g. -10dBm or 1e-4W)") from None


def parse_range(text: str, *, integer: bool = False) -> list:
    """'start:stop[:step]' inclusive; a single number is a one-point range."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            value = float(parts[0])
            return [int(value) if integer else value]
        if len(parts) not in (2, 3):
            raise ValueError
        start, stop = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else 1.0
    except ValueError:
        raise DomainError(f"cannot parse range {text!r} (use start:stop[:step])") from None
    if step <= 0:
        raise DomainError(f"range step must be > 0, got {step}")
    if stop < start:
        raise DomainError(f"range stop must be >= start in {text!r}")
    count = int((stop - start) / step + 1e-9) + 1
    values = [start + i * step for i in range(count)]
    if integer:
        ints = [int(round(v)) for v in values]
        if any(abs(v - i) > 1e-9 for v, i in zip(values, ints)):
            raise DomainError(f"range {text!r} must contain integers")
        return ints
    return values


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _resolve_params(args) -> linkmodel.PhysicalParams:
    params = linkmodel.PhysicalParams()
    if getattr(args, "params", None):
        params = linkmodel.load_params(args.params, base=params)
    if getattr(args, "rl", None) is not None:
        params = params.replace(load_resistance_ohm=args.rl)
    return params


def _build_matrix(args) -> codebook.CodeMatrix:
    family = args.family.lower()
    if family == "cs":
        if args.users is None or args.weight is None:
            raise DomainError("--family cs requires --users and --weight")
        return codebook.build_cs(args.users, args.weight)
    if family == "hadamard":
        if args.order is None:
            raise DomainError("--family hadamard requires --order")
        return codebook.build_hadamard(args.order)
    raise DomainError(f"unsupported family {args.family!r} (supported: cs, hadamard)")


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def cmd_generate(args) -> int:
    matrix = _build_matrix(args)
    report = codebook.correlation_check(matrix)
    with _open_out(args.out) as fh:
        fh.write(codebook.format_matrix(matrix))
    summary = (f"family={matrix.family} users={matrix.users} weight={matrix.weight} "
               f"length={matrix.length} max_cross={report.max_cross}")
    print(summary, file=sys.stderr if args.out == "-" else sys.stdout)
    return EXIT_OK


def cmd_verify(args) -> int:
    matrix = codebook.load_matrix(args.matrix_file)
    report = codebook.correlation_check(matrix)
    ok, problems = codebook.verify_family_properties(matrix)
    print(f"family {matrix.family}: {matrix.users} users, length {matrix.length}, "
          f"declared weight {matrix.weight}")
    print("autocorrelation: " + " ".join(str(v) for v in report.autocorrelation))
    print(f"max cross-correlation: {report.max_cross}")
    if ok:
        print("OK: declared family properties hold")
        return EXIT_OK
    for problem in problems:
        print(f"violation: {problem}")
    print("FAIL: declared family properties do not hold")
    return EXIT_VERIFY_FAILED


def cmd_analyze(args) -> int:
    params = _resolve_params(args)
    op = linkmodel.OperatingPoint(
        users=args.users, weight=args.weight,
        received_power_w=parse_power_watts(args.power),
        fiber_length_km=args.length_km,
        attenuation_db_per_km=args.alpha)
    point = linkmodel.evaluate(op, params)
    payload = point.as_dict()
    payload["inputs"] = {
        "users": op.users, "weight": op.weight, "code_length": op.code_length,
        "power_w": op.effective_power_w,
        "power_dbm": linkmodel.watts_to_dbm(op.effective_power_w),
        **params.as_dict(),
    }
    with _open_out(args.out) as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


def _emit_sweep(result: linkmodel.SweepResult, args) -> int:
    with _open_out(args.out) as fh:
        if args.format == "csv":
            result.to_csv(fh)
        else:
            result.to_json(fh)
    return EXIT_OK


def cmd_sweep_users(args) -> int:
    params = _resolve_params(args)
    result = linkmodel.sweep_users(parse_range(args.k, integer=True), args.weight,
                                   parse_power_watts(args.power), params)
    return _emit_sweep(result, args)


def cmd_sweep_power(args) -> int:
    params = _resolve_params(args)
    result = linkmodel.sweep_power(parse_range(args.p), args.users, args.weight, params)
    return _emit_sweep(result, args)


def cmd_sweep_distance(args) -> int:
    params = _resolve_params(args)
    launch_dbm = linkmodel.watts_to_dbm(parse_power_watts(args.power))
    result = linkmodel.sweep_distance(parse_range(args.length), launch_dbm,
                                      args.users, args.weight, params,
                                      attenuation_db_per_km=args.alpha)
    return _emit_sweep(result, args)


def cmd_simulate(args) -> int:
    params = _resolve_params(args)
    matrix = _build_matrix(args)
    op = linkmodel.OperatingPoint(
        users=matrix.users, weight=matrix.weight,
        received_power_w=parse_power_watts(args.power))
    mc = montecarlo.MonteCarloConfig(
        bits_per_user=args.bits, rng_seed=args.seed,
        target_user=args.target, threshold_fraction=args.threshold)
    estimate = montecarlo.run_monte_carlo(matrix, op, params, mc, engine=args.engine)
    payload = montecarlo.estimate_to_json_dict(estimate, mc)
    payload["engine"] = montecarlo.active_engine(args.engine)
    payload["analytic_ber"] = linkmodel.evaluate(op, params).ber
    with _open_out(args.out) as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


def compare_rows(users: int, weight: int) -> list[dict]:
    """One row per known family at the requested design point.

    At the 30-user reference point, rows whose published length cannot be
    reproduced from the family's printed formulas are flagged.
    """
    rows = []
    for family in codebook.KNOWN_FAMILIES:
        published = PUBLISHED_30_USERS.get(family) if users == 30 else None
        note = ""
        flagged = False
        try:
            if family == "DSC":
                d = users - (2 ** weight - 2)
                if d < 1:
                    raise DomainError(
                        f"no positive D gives {users} users at weight {weight}")
                fp = codebook.family_parameters(family, users, weight, dsc_d=d)
                note = f"D={d} derived so length equals users"
            elif family == "MS":
                fp, note = _ms_row(users, weight, published)
            else:
                fp = codebook.family_parameters(family, users, weight)
        except DomainError as exc:
            rows.append({"family": family, "users_requested": users, "users": "",
                         "weight": "", "length": "", "cross_correlation": "",
                         "param": "", "published_length": published[1] if published else "",
                         "flagged": False, "note": str(exc)})
            continue
        if published is not None:
            pub_weight, pub_length = published
            if (fp.weight, fp.length) != (pub_weight, pub_length):
                flagged = True
                detail = (f"published row (w={pub_weight}, L={pub_length}) not "
                          f"reproduced by the printed formula")
                note = f"{note}; {detail}" if note else detail
        rows.append({
            "family": family,
            "users_requested": users,
            "users": fp.users,
            "weight": fp.weight,
            "length": fp.length,
            "cross_correlation": fp.cross_correlation,
            "param": f"{fp.param_name}={fp.param_value}" if fp.param_name else "",
            "published_length": published[1] if published else "",
            "flagged": flagged,
            "note": note,
        })
    return rows


def _ms_row(users, weight, published):
    """Pick the served-weight count k_B: nearest the published length when a
    reference exists, otherwise all weights served (k_B = weight)."""
    candidates = [(kb, codebook.family_parameters("MS", users, weight, ms_kb=kb))
                  for kb in range(1, weight + 1)]
    if published is not None:
        target = published[1]
        kb, fp = min(candidates, key=lambda pair: abs(pair[1].length - target))
        return fp, f"k_B={kb} chosen nearest the published length"
    kb, fp = candidates[-1]
    return fp, f"k_B={kb} assumed (all weights served)"


def cmd_compare(args) -> int:
    rows = compare_rows(args.users, args.weight)
    with _open_out(args.out) as fh:
        if args.format == "json":
            json.dump(rows, fh, indent=2)
            fh.write("\n")
        else:
            fh.write(",".join(COMPARE_COLUMNS) + "\n")
            for row in rows:
                fh.write(",".join(_compare_cell(row[c]) for c in COMPARE_COLUMNS) + "\n")
    return EXIT_OK


def _compare_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    text = str(value)
    if "," in text or '"' in text:
        text = '"' + text.replace('"', '""') + '"'
    return text


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csocdma",
        description="Cyclic-shift SAC-OCDMA code construction and performance analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params_flags(p):
        p.add_argument("--params", help="physical-parameter file (key = value lines)")
        p.add_argument("--rl", type=float, help="receiver load resistance override, ohms")

    def add_out(p, default="-"):
        p.add_argument("--out", default=default, help="output path, '-' for stdout")

    def add_format(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("generate", help="construct a code matrix and write it as text")
    p.add_argument("--family", required=True, help="cs or hadamard")
    p.add_argument("--users", type=int)
    p.add_argument("--weight", type=int)
    p.add_argument("--order", type=int, help="Hadamard order exponent")
    add_out(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a code-matrix file's family properties")
    p.add_argument("matrix_file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="closed-form performance at one operating point")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--power", required=True, help="received power, e.g. -10dBm or 1e-4W")
    p.add_argument("--length-km", type=float, default=None, help="fiber span, km")
    p.add_argument("--alpha", type=float, default=0.25, help="attenuation, dB/km")
    add_params_flags(p)
    add_out(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep-users", help="BER versus number of users")
    p.add_argument("--k", required=True, help="user range start:stop[:step]")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--power", required=True)
    add_params_flags(p)
    add_format(p)
    add_out(p)
    p.set_defaults(func=cmd_sweep_users)

    p = sub.add_parser("sweep-power", help="BER versus received power")
    p.add_argument("--p", required=True, help="power range in dBm start:stop[:step]")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)
    add_params_flags(p)
    add_format(p)
    add_out(p)
    p.set_defaults(func=cmd_sweep_power)

    p = sub.add_parser("sweep-distance", help="BER versus fiber length (attenuation only)")
    p.add_argument("--length", required=True, help="distance range in km start:stop[:step]")
    p.add_argument("--power", required=True, help="launch power")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.25, help="attenuation, dB/km")
    add_params_flags(p)
    add_format(p)
    add_out(p)
    p.set_defaults(func=cmd_sweep_distance)

    p = sub.add_parser("simulate", help="Monte Carlo bit simulation")
    p.add_argument("--family", default="cs")
    p.add_argument("--users", type=int)
    p.add_argument("--weight", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--power", required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--engine", choices=montecarlo.ENGINES, default="auto")
    add_params_flags(p)
    add_out(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="family parameter comparison table")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--weight", type=int, default=4)
    add_format(p)
    add_out(p)
    p.set_defaults(func=cmd_compare)

    return parser


# Flags whose single value may legitimately begin with '-' (negative dBm,
# descending-looking ranges).  Joined into --flag=value so argparse does not
# mistake the value for an option.
_NEGATIVE_VALUE_FLAGS = {"--power", "--p", "--k", "--length"}


def _merge_negative_values(argv: list[str]) -> list[str]:
    merged = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if (token in _NEGATIVE_VALUE_FLAGS and i + 1 < len(argv)
                and argv[i + 1].startswith("-") and len(argv[i + 1]) > 1):
            merged.append(f"{token}={argv[i + 1]}")
            i += 2
        else:
            merged.append(token)
            i += 1
    return merged


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    args = parser.parse_args(_merge_negative_values(argv))
    try:
        return args.func(args)
    except MatrixFormatError as exc:
        print(f"error: malformed matrix file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
