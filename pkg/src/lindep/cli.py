"""Command-line entry point.

Exit codes: 0 consistent/success, 1 usage error, 2 hypothesis failed,
3 anomaly (a relation where none should exist), 4 undecided at the precision ceiling.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path

from . import harness
from ._version import __version__
from .cache import ValueCache, default_cache_dir
from .characters import PeriodicFunction, enumerate_characters
from .cyclotomic import absolute_norm
from .errors import HypothesisFailed, LindepError, PrecisionExhausted, PrecisionTooLow, ValuesTooUncertain
from .lvalues import l_one_cot, l_one_digamma, l_one_logform, l_one_series
from .numerics import PrecisionContext, Real, format_decimal, format_err
from .relations import DEFAULT_BOUND, find_field_relation
from .report import FORMATS, render
from .units import multiplicative_independence_rank, units_of

EXIT_OK, EXIT_USAGE, EXIT_HYPOTHESIS, EXIT_ANOMALY, EXIT_UNDECIDED = 0, 1, 2, 3, 4
VERDICT_EXIT = {harness.CONSISTENT: EXIT_OK, harness.ANOMALY: EXIT_ANOMALY, harness.UNDECIDED: EXIT_UNDECIDED}

log = logging.getLogger("lindep")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    precision: int | None = None
    bound: int = DEFAULT_BOUND
    m: int = 1
    moduli: list = field(default_factory=list)
    out: str | None = None
    cache: str | None = None
    fmt: str | None = None

    def __post_init__(self):
        if self.precision is not None and self.precision < 64:
            raise UsageError(f"--precision must be >= 64, got {self.precision}")
        if self.bound < 2:
            raise UsageError(f"--bound must be >= 2, got {self.bound}")
        if self.m < 1:
            raise UsageError(f"--m must be >= 1, got {self.m}")
        if any(q <= 2 for q in self.moduli):
            raise UsageError(f"moduli must all exceed 2, got {self.moduli}")

    def context(self, default=None):
        bits = self.precision if self.precision is not None else default
        return PrecisionContext(bits) if bits is not None else None


def _int_list(text):
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _pair(text):
    values = _int_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected i,j, got {text!r}")
    return tuple(values)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=int, help="working precision in bits")
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="max |coefficient| in relation searches")
    common.add_argument("--cache", help="value cache directory (default: $LINDEP_CACHE)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", dest="fmt", choices=FORMATS, help="output format")

    parser = _Parser(prog="lindep", description="Linear independence checks for L(1, chi) values.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("chars", parents=[common], help="list the characters mod q")
    p.add_argument("q", type=int)

    p = sub.add_parser("lvalue", parents=[common], help="evaluate L(1, chi) or L(1, f)")
    p.add_argument("q", type=int)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--char", type=int, help="index into the character list of `chars q`")
    group.add_argument("--erdos", help="sign pattern of f(1..q-1), e.g. +--+")
    p.add_argument("--series", type=int, metavar="N", help="also sum the series to N terms")

    p = sub.add_parser("units", parents=[common], help="Ramachandra units mod q and their rank")
    p.add_argument("q", type=int)

    p = sub.add_parser("cot-identity", parents=[common], help="exact cotangent identity check")
    p.add_argument("q", type=int)

    p = sub.add_parser("relation", parents=[common], help="relation search over values read from a file")
    p.add_argument("file", help="one value per line: `value`, `id value` or `id value err`")
    p.add_argument("--m", type=int, default=1, help="coefficient field Q(zeta_m)")

    p = sub.add_parser("verify", parents=[common], help="theorem-level experiments")
    p.add_argument("theorem", choices=("thm1", "thm3", "thm4", "okada", "erdos"))
    p.add_argument("--q", type=_int_list, required=True, help="comma-separated moduli (primes for erdos)")
    p.add_argument("--k", type=int, default=1, help="derivative order for okada")
    p.add_argument("--m", type=int, default=1, help="coefficient field Q(zeta_m)")
    p.add_argument("--inject", type=_pair, action="append", default=[], metavar="I,J",
                   help="add the sum of pooled values I and J (anomaly self-test)")
    p.add_argument("--ceiling", type=int, default=harness.CEILING_BITS, help="precision escalation ceiling")

    p = sub.add_parser("sophie", parents=[common], help="Sophie Germain primes and the thinned chain")
    p.add_argument("--limit", type=int, required=True)

    p = sub.add_parser("report", parents=[common], help="re-render and re-verify a saved JSON report")
    p.add_argument("--in", dest="infile", required=True)
    return parser


def _emit(text, cfg):
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_data(data, cfg, default_fmt):
    _emit(render(data, cfg.fmt or default_fmt), cfg)


def _cache(cfg):
    directory = cfg.cache or default_cache_dir()
    return ValueCache(directory) if directory else None


# -- commands -----------------------------------------------------------------


def cmd_chars(args, cfg):
    subjects = []
    for index, chi in enumerate(enumerate_characters(args.q)):
        subjects.append({
            "id": chi.id,
            "kind": "character",
            "index": index,
            "parity": chi.parity() if args.q > 2 else "even",
            "order": chi.order,
            "method": "exact",
            "value": " ".join(str(chi.log_value(g)) for g, _ in chi.structure.generators),
            "imag": "",
            "err": "0",
        })
    gens = ", ".join(f"{g} (order {o})" for g, o in enumerate_characters(args.q)[0].structure.generators)
    data = {
        "experiment": "chars",
        "config": {"moduli": [args.q]},
        "subjects": subjects,
        "notes": [f"generators: {gens or 'none'}",
                  "value column: chi(g) = exp(2 pi i t / phi(q)), t listed per generator"],
        "verdict": harness.CONSISTENT,
    }
    _emit_data(data, cfg, "table")
    return EXIT_OK


def cmd_lvalue(args, cfg):
    ctx = cfg.context(256)
    q = args.q
    subjects, notes = [], []
    if args.erdos is not None:
        pattern = args.erdos.strip()
        if len(pattern) != q - 1 or set(pattern) - set("+-"):
            raise UsageError(f"--erdos needs {q - 1} characters from '+-', got {pattern!r}")
        targets = [PeriodicFunction.from_signs([1 if c == "+" else -1 for c in pattern])]
    else:
        chars = enumerate_characters(q)
        if args.char is not None:
            if not 0 <= args.char < len(chars):
                raise UsageError(f"--char must be in [0, {len(chars) - 1}]")
            targets = [chars[args.char]]
        else:
            targets = [c for c in chars if not c.is_trivial()]
    for t in targets:
        subjects.append(l_one_digamma(t, ctx).to_json())
        if isinstance(t, PeriodicFunction) or q <= 2:
            pass
        elif t.is_odd():
            subjects.append(l_one_cot(t, ctx).to_json())
        elif q > 4 and not t.is_trivial():
            record, delta, usum = l_one_logform(t, ctx)
            subjects.append(record.to_json())
            notes.append(f"{t.id}: delta = {format_decimal(delta.re.value, 20)} + {format_decimal(delta.im.value, 20)} i, "
                         f"unit sum = {format_decimal(usum.re.value, 20)} + {format_decimal(usum.im.value, 20)} i")
        if args.series:
            subjects.append(l_one_series(t, args.series, ctx).to_json())
    data = {"experiment": "lvalue", "config": {"precision": ctx.bits, "moduli": [q]},
            "subjects": subjects, "notes": notes, "verdict": harness.CONSISTENT}
    _emit_data(data, cfg, "table")
    return EXIT_OK


def cmd_units(args, cfg):
    ctx = cfg.context(256)
    units = units_of(args.q)
    subjects = []
    for u in units:
        v = u.embed(ctx)
        subjects.append({
            "id": u.id, "kind": "unit", "method": "exact", "d_exp": u.d_exp,
            "norm": str(absolute_norm(u.elt)),
            "value": format_decimal(v.value, 30), "imag": "0", "err": format_err(v.err), "precision": ctx.bits,
        })
    data = {"experiment": "units", "config": {"precision": ctx.bits, "moduli": [args.q]},
            "subjects": subjects, "certificates": [], "checks": [], "notes": []}
    if units:
        rank, cert = multiplicative_independence_rank(units, ctx)
        data["certificates"].append({**cert.to_json(), "kind": "rank"})
        data["checks"].append({"name": "unit rank", "passed": rank == len(units), "detail": f"{rank} of {len(units)}"})
    else:
        data["notes"].append("no unit indices 1 < a < q/2 coprime to q")
    data["verdict"] = harness.verdict_from_evidence(data)
    _emit_data(data, cfg, "table")
    return VERDICT_EXIT[data["verdict"]]


def cmd_cot_identity(args, cfg):
    check = harness.verify_cot_identity(args.q, cfg.context(128))
    data = {"experiment": "cot-identity", "config": {"moduli": [args.q]}, "checks": [check.to_json()]}
    data["verdict"] = harness.verdict_from_evidence(data)
    _emit_data(data, cfg, "table")
    return VERDICT_EXIT[data["verdict"]]


def _read_values(path):
    """Parse a value file into (ids, decimal strings, extra errs)."""
    ids, texts, errs = [], [], []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            ident, text, err = f"x{len(ids)}", parts[0], None
        elif len(parts) == 2:
            (ident, text), err = parts, None
        elif len(parts) == 3:
            ident, text, err = parts
        else:
            raise UsageError(f"{path}:{lineno}: expected `value`, `id value` or `id value err`")
        try:
            Decimal(text)
            if err is not None:
                Decimal(err)
        except ArithmeticError:
            raise UsageError(f"{path}:{lineno}: not a decimal number") from None
        ids.append(ident)
        texts.append(text)
        errs.append(err)
    if len(ids) < 2:
        raise UsageError(f"{path}: need at least two values")
    return ids, texts, errs


def _is_integer_literal(text):
    return text.lstrip("+-").isdigit()


def _parse_value(text, err, bits):
    """Integer literals are exact; other decimals carry half a unit in their last digit."""
    if err is None and _is_integer_literal(text):
        return Real.from_rational(int(text), bits)
    return Real.from_decimal(text, err, bits)


def _bits_from_digits(texts):
    """Largest precision whose detection scale the decimal inputs can support."""
    exponents = [Decimal(t).as_tuple().exponent for t in texts if not _is_integer_literal(t)]
    if not exponents:
        return 1024
    finest = max(exponents)
    return max(64, int(-finest * math.log2(10)) + 62)


def cmd_relation(args, cfg):
    ids, texts, errs = _read_values(args.file)
    bits = cfg.precision or _bits_from_digits(texts)
    ctx = PrecisionContext(bits)
    xs = [_parse_value(t, e, bits) for t, e in zip(texts, errs)]
    cert = find_field_relation(xs, args.m, cfg.bound, ctx, ids=ids)
    data = {
        "experiment": "relation",
        "config": {"precision": bits, "bound": cfg.bound, "m": args.m, "moduli": []},
        "subjects": [{"id": i, "kind": "input", "method": "file", "value": t, "imag": "0",
                      "err": format_err(x.err), "precision": bits} for i, t, x in zip(ids, texts, xs)],
        "certificates": [cert.to_json()],
        "checks": [],
        "notes": ["a relation certificate is reported as an anomaly (exit 3)"],
    }
    data["verdict"] = harness.verdict_from_evidence(data)
    _emit_data(data, cfg, "json")
    return VERDICT_EXIT[data["verdict"]]


def cmd_verify(args, cfg):
    ctx = cfg.context()
    cache = _cache(cfg)
    qs = args.q
    if args.theorem == "thm1":
        report = harness.verify_theorem_all(qs, args.m, cfg.bound, ctx, args.ceiling, cache, args.inject)
    elif args.theorem == "thm3":
        report = harness.verify_theorem_even(qs, args.m, cfg.bound, ctx, args.ceiling, cache, args.inject)
    elif args.theorem == "thm4":
        report = harness.verify_theorem_odd(qs, args.m, cfg.bound, ctx, args.ceiling, cache, args.inject)
    elif args.theorem == "okada":
        report = harness.verify_okada(qs, args.k, cfg.bound, ctx, args.ceiling)
    else:
        report = harness.erdos_survey(qs, cfg.bound, ctx, args.ceiling, args.m)
    _emit_data(report.to_json(), cfg, "json")
    return VERDICT_EXIT[report.verdict]


def cmd_sophie(args, cfg):
    b_set, c_set = harness.sophie_germain_chain(args.limit)
    fmt = cfg.fmt or "table"
    if fmt == "table":
        _emit(f"B = {','.join(map(str, b_set))}\nC = {','.join(map(str, c_set))}\n", cfg)
    elif fmt == "json":
        _emit(json.dumps({"limit": args.limit, "B": b_set, "C": c_set}, indent=2) + "\n", cfg)
    else:
        _emit("set,prime\n" + "".join(f"B,{p}\n" for p in b_set) + "".join(f"C,{p}\n" for p in c_set), cfg)
    return EXIT_OK


def cmd_report(args, cfg):
    try:
        data = json.loads(Path(args.infile).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read report {args.infile}: {exc}") from None
    results = harness.reverify_certificates(data)
    for ids, holds in results:
        if not holds:
            print(f"certificate over {', '.join(ids)} does NOT re-verify", file=sys.stderr)
    recomputed = harness.verdict_from_evidence(data)
    if recomputed != data.get("verdict"):
        print(f"stored verdict {data.get('verdict')!r} differs from recomputed {recomputed!r}", file=sys.stderr)
    data = {**data, "verdict": recomputed}
    _emit_data(data, cfg, "table")
    if any(not holds for _, holds in results):
        return EXIT_UNDECIDED
    return VERDICT_EXIT.get(recomputed, EXIT_USAGE)


COMMANDS = {
    "chars": cmd_chars,
    "lvalue": cmd_lvalue,
    "units": cmd_units,
    "cot-identity": cmd_cot_identity,
    "relation": cmd_relation,
    "verify": cmd_verify,
    "sophie": cmd_sophie,
    "report": cmd_report,
}


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    cfg = RunConfig()
    try:
        args = build_parser().parse_args(argv)
        moduli = list(getattr(args, "q", []) or []) if args.command == "verify" else []
        cfg = RunConfig(args.precision, args.bound, getattr(args, "m", 1), moduli, args.out, args.cache, args.fmt)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except HypothesisFailed as exc:
        print(f"hypothesis failed: {exc}", file=sys.stderr)
        if exc.report is not None:
            _emit_data(exc.report.to_json(), cfg, "json")
        return EXIT_HYPOTHESIS
    except (PrecisionTooLow, ValuesTooUncertain, PrecisionExhausted) as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (LindepError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry():
    sys.exit(main())
