"""Command line front end.

Each subcommand maps onto one library operation and emits a single
report on stdout in one of three formats: json (compact, sorted keys),
csv (fixed documented columns, header row first), or text.  Identical
configurations produce byte-identical output; exact integers that can
exceed 2**53 are emitted as decimal strings.

Exit codes: 0 success, 2 rejected input, 3 resource limit hit, 1
internal error or failed selftest.  Diagnostics go to stderr.

The node budget resolves in order: --budget flag, PERMX_BUDGET
environment variable, library default.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .avoidance import (
    count_avoiders,
    merge_count_upper_check,
    sw_estimate_sequence,
    verify_jv_inclusion,
)
from .bounds import (
    BoundParams,
    build_schedule,
    certify_schedule,
    crude_fpts_bound,
    fox_rhs,
    lemma21_bound,
    lemma22_rhs,
    marcus_tardos_bound,
    theorem12_exponent,
    theorem24_alpha,
)
from .core import (
    BinaryMatrix,
    blockable_decompositions,
    contains,
    direct_sum,
    inflate,
    matrix_contains,
    parse_permutation,
    skew_sum,
    to_matrix,
)
from .errors import MalformedInput, PermxError, PreconditionViolated, ResourceLimit
from .extremal import (
    check_lemma21,
    check_lemma22,
    exfn_exact,
    fpts_exact,
    gpts_exact,
)
from .limits import DEFAULT_NODE_BUDGET, DEFAULT_ROW_CAP

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_BAD_INPUT = 2
EXIT_RESOURCE = 3

FORMATS = ("json", "csv", "text")

# csv table layouts per command; commands not listed flatten their
# scalar fields into a single row
CSV_TABLES = {
    "decompose": ("decompositions", ["skeleton", "blocks"]),
    "sw-estimate": ("sequence", ["n", "count", "estimate"]),
    "bounds schedule": ("states", ["i", "log2_t", "log2_s", "t", "s"]),
    "bounds certify": ("checks", ["name", "holds", "lhs", "rhs"]),
    "selftest": ("criteria", ["id", "pass", "description", "detail"]),
}


@dataclass(frozen=True)
class RunConfig:
    """One invocation, fully determining the emitted report bytes."""

    command: str
    options: tuple[tuple[str, object], ...] = ()
    output_format: str = "text"
    node_budget: int = DEFAULT_NODE_BUDGET
    seed: int | None = None

    def __post_init__(self):
        if self.output_format not in FORMATS:
            raise PreconditionViolated(
                f"format must be one of {FORMATS}, got {self.output_format!r}"
            )
        if self.node_budget < 1:
            raise PreconditionViolated(f"budget must be positive, got {self.node_budget}")
        object.__setattr__(self, "options", tuple(sorted(tuple(self.options))))

    def opts(self) -> dict:
        return dict(self.options)


# ---------------------------------------------------------------------------
# input parsing helpers
# ---------------------------------------------------------------------------

def _parse_matrix(text: str) -> BinaryMatrix:
    rows = [r for r in text.strip().split(",") if r]
    if not rows:
        raise MalformedInput("empty matrix text")
    if any(ch not in "01" for row in rows for ch in row):
        raise MalformedInput(f"matrix rows must be 0/1 strings: {text!r}")
    return BinaryMatrix.from_strings(rows)


def _parse_pattern_matrix(text: str):
    return to_matrix(parse_permutation(text))


def _parse_ex_table(text: str) -> dict[int, int]:
    table = {}
    for item in text.strip().split(","):
        if not item:
            continue
        key, _, value = item.partition("=")
        try:
            table[int(key)] = int(value)
        except ValueError as exc:
            raise MalformedInput(f"ex-table entries look like n=value: {item!r}") from exc
    if not table:
        raise MalformedInput("empty ex-table")
    return table


# ---------------------------------------------------------------------------
# output rendering
# ---------------------------------------------------------------------------

def _norm(value):
    """Make a payload JSON-ready: fractions and oversized integers
    become decimal strings, tuples become lists."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value) if abs(value) >= 2**53 else value
    if isinstance(value, dict):
        return {str(k): _norm(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_norm(v) for v in value]
    return value


def _scalar_text(value) -> str:
    if value is True:
        return "true"
    if value is False:
        return "false"
    if value is None:
        return "null"
    return str(value)


def render(command: str, payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_norm(payload), sort_keys=True, separators=(",", ":")) + "\n"
    if fmt == "csv":
        return _render_csv(command, payload)
    return _render_text(command, payload)


def _render_csv(command: str, payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    table = CSV_TABLES.get(command)
    if table is not None:
        key, columns = table
        writer.writerow(columns)
        for row in payload.get(key, []):
            writer.writerow([_scalar_text(_norm(row.get(col))) for col in columns])
        return buf.getvalue()
    keys = [k for k in sorted(payload) if not isinstance(payload[k], (dict, list))]
    writer.writerow(keys)
    writer.writerow([_scalar_text(_norm(payload[k])) for k in keys])
    return buf.getvalue()


_TEXT_KEY = {
    "contains": "contains",
    "matrix-contains": "contains",
    "sum": "result",
    "skew": "result",
    "inflate": "result",
}


def _render_text(command: str, payload: dict) -> str:
    key = _TEXT_KEY.get(command)
    if key is not None:
        return _scalar_text(payload[key]) + "\n"
    lines = []
    for k in sorted(payload):
        v = _norm(payload[k])
        if isinstance(v, (dict, list)):
            lines.append(f"{k} = {json.dumps(v, sort_keys=True)}")
        else:
            lines.append(f"{k} = {_scalar_text(v)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# handlers: opts dict in, (payload, exit code) out
# ---------------------------------------------------------------------------

def _cmd_contains(opts, config):
    host = parse_permutation(opts["host"])
    pattern = parse_permutation(opts["pattern"])
    return {
        "host": str(host),
        "pattern": str(pattern),
        "contains": contains(host, pattern),
    }, EXIT_OK


def _cmd_matrix_contains(opts, config):
    host = _parse_matrix(opts["host"])
    pattern = _parse_matrix(opts["pattern"])
    return {"contains": matrix_contains(host, pattern)}, EXIT_OK


def _cmd_sum(opts, config):
    left = parse_permutation(opts["left"])
    right = parse_permutation(opts["right"])
    return {
        "left": str(left),
        "right": str(right),
        "result": str(direct_sum(left, right)),
    }, EXIT_OK


def _cmd_skew(opts, config):
    left = parse_permutation(opts["left"])
    right = parse_permutation(opts["right"])
    return {
        "left": str(left),
        "right": str(right),
        "result": str(skew_sum(left, right)),
    }, EXIT_OK


def _cmd_inflate(opts, config):
    skeleton = parse_permutation(opts["skeleton"])
    blocks = [parse_permutation(b) for b in opts["blocks"].split(",") if b]
    return {
        "skeleton": str(skeleton),
        "blocks": [str(b) for b in blocks],
        "result": str(inflate(skeleton, blocks)),
    }, EXIT_OK


def _cmd_decompose(opts, config):
    p = parse_permutation(opts["pattern"])
    decomps = blockable_decompositions(p, opts["c"])
    return {
        "pattern": str(p),
        "c": opts["c"],
        "count": len(decomps),
        "decompositions": [
            {"skeleton": str(d.skeleton), "blocks": " ".join(str(b) for b in d.blocks)}
            for d in decomps
        ],
    }, EXIT_OK


def _cmd_count_av(opts, config):
    p = parse_permutation(opts["pattern"])
    value = count_avoiders(p, opts["n"], node_budget=config.node_budget)
    return {"pattern": str(p), "n": opts["n"], "count": str(value)}, EXIT_OK


def _cmd_sw_estimate(opts, config):
    p = parse_permutation(opts["pattern"])
    seq = sw_estimate_sequence(p, opts["n_max"], node_budget=config.node_budget)
    return {
        "pattern": str(p),
        "sequence": [
            {"n": e.n, "count": str(e.count), "estimate": e.value} for e in seq
        ],
    }, EXIT_OK


def _cmd_merge_check(opts, config):
    red = parse_permutation(opts["red"])
    blue = parse_permutation(opts["blue"])
    report = merge_count_upper_check(
        red, blue, opts["n"], node_budget=config.node_budget
    )
    return report.to_jsonable(), EXIT_OK


def _cmd_verify_jv(opts, config):
    report = verify_jv_inclusion(
        parse_permutation(opts["a"]),
        parse_permutation(opts["b"]),
        parse_permutation(opts["c"]),
        opts["n"],
        node_budget=config.node_budget,
    )
    return report.to_jsonable(), EXIT_OK


def _cmd_exfn(opts, config):
    P = _parse_pattern_matrix(opts["pattern"])
    res = exfn_exact(P, opts["n"], budget=config.node_budget)
    return {"pattern": opts["pattern"], "n": opts["n"], **res.to_jsonable()}, EXIT_OK


def _cmd_fpts(opts, config):
    P = _parse_pattern_matrix(opts["pattern"])
    res = fpts_exact(
        P, opts["t"], opts["s"], n_cap=opts["n_cap"], budget=config.node_budget
    )
    return {
        "pattern": opts["pattern"],
        "t": opts["t"],
        "s": opts["s"],
        **res.to_jsonable(),
    }, EXIT_OK


def _cmd_gpts(opts, config):
    P = _parse_pattern_matrix(opts["pattern"])
    res = gpts_exact(
        P, opts["t"], opts["s"], n_cap=opts["n_cap"], budget=config.node_budget
    )
    return {
        "pattern": opts["pattern"],
        "t": opts["t"],
        "s": opts["s"],
        **res.to_jsonable(),
    }, EXIT_OK


def _cmd_check_lemma21(opts, config):
    P = _parse_pattern_matrix(opts["pattern"])
    report = check_lemma21(
        P,
        opts["a"],
        opts["t"],
        opts["s"],
        hypothesis_n=opts["hypothesis_n"],
        budget=config.node_budget,
    )
    return {"pattern": opts["pattern"], **report.to_jsonable()}, EXIT_OK


def _cmd_check_lemma22(opts, config):
    P = _parse_pattern_matrix(opts["pattern"])
    report = check_lemma22(
        P,
        opts["a"],
        opts["c"],
        opts["t"],
        opts["s"],
        opts["x"],
        opts["y"],
        budget=config.node_budget,
    )
    return {"pattern": opts["pattern"], **report.to_jsonable()}, EXIT_OK


def _cmd_bounds_mt(opts, config):
    return {"k": opts["k"], "bound": str(marcus_tardos_bound(opts["k"]))}, EXIT_OK


def _cmd_bounds_lemma21(opts, config):
    bound = lemma21_bound(opts["k"], opts["a"], opts["t"], opts["s"])
    return {
        "k": opts["k"],
        "a": opts["a"],
        "t": opts["t"],
        "s": opts["s"],
        "bound": bound,
    }, EXIT_OK


def _cmd_bounds_lemma22_rhs(opts, config):
    value = lemma22_rhs(
        opts["k"], opts["a"], opts["c"], opts["t"], opts["s"], opts["x"], opts["y"],
        opts["f_sub"],
    )
    return {
        "k": opts["k"],
        "a": opts["a"],
        "c": opts["c"],
        "t": opts["t"],
        "s": opts["s"],
        "x": opts["x"],
        "y": opts["y"],
        "f_sub": opts["f_sub"],
        "rhs": value,
    }, EXIT_OK


def _cmd_bounds_alpha(opts, config):
    a, c = opts["a"], opts["c"]
    return {
        "a": a,
        "c": c,
        "alpha": theorem24_alpha(a, c),
        "theorem12_exponent": theorem12_exponent(a, c),
    }, EXIT_OK


def _cmd_bounds_schedule(opts, config):
    params = BoundParams(opts["k"], opts["a"], opts["c"])
    schedule = build_schedule(params, apply_floors=opts["floors"])
    return schedule.to_jsonable(), EXIT_OK


def _cmd_bounds_certify(opts, config):
    params = BoundParams(opts["k"], opts["a"], opts["c"])
    schedule = build_schedule(params, apply_floors=opts["floors"])
    report = certify_schedule(schedule, params, tol=opts["tol"])
    return {
        "params": {"k": params.k, "a": params.a, "c": params.c},
        **report.to_jsonable(),
    }, EXIT_OK


def _cmd_bounds_crude(opts, config):
    params = BoundParams(opts["k"], opts["a"], opts["c"])
    schedule = build_schedule(params)
    return {
        "k": params.k,
        "a": params.a,
        "c": params.c,
        "log2_bound": crude_fpts_bound(schedule, params),
    }, EXIT_OK


def _cmd_bounds_fox_rhs(opts, config):
    table = _parse_ex_table(opts["ex_table"])
    value = fox_rhs(table, opts["t"], opts["s"], opts["f"], opts["g"], opts["n"])
    return {
        "t": opts["t"],
        "s": opts["s"],
        "f": opts["f"],
        "g": opts["g"],
        "n": opts["n"],
        "rhs": str(value),
    }, EXIT_OK


def _cmd_selftest(opts, config):
    from .selftest import run_selftest

    payload, all_pass = run_selftest(seed=config.seed)
    return payload, EXIT_OK if all_pass else EXIT_INTERNAL


HANDLERS = {
    "contains": _cmd_contains,
    "matrix-contains": _cmd_matrix_contains,
    "sum": _cmd_sum,
    "skew": _cmd_skew,
    "inflate": _cmd_inflate,
    "decompose": _cmd_decompose,
    "count-av": _cmd_count_av,
    "sw-estimate": _cmd_sw_estimate,
    "merge-check": _cmd_merge_check,
    "verify-jv": _cmd_verify_jv,
    "exfn": _cmd_exfn,
    "fpts": _cmd_fpts,
    "gpts": _cmd_gpts,
    "check-lemma21": _cmd_check_lemma21,
    "check-lemma22": _cmd_check_lemma22,
    "bounds mt": _cmd_bounds_mt,
    "bounds lemma21": _cmd_bounds_lemma21,
    "bounds lemma22-rhs": _cmd_bounds_lemma22_rhs,
    "bounds alpha": _cmd_bounds_alpha,
    "bounds schedule": _cmd_bounds_schedule,
    "bounds certify": _cmd_bounds_certify,
    "bounds crude": _cmd_bounds_crude,
    "bounds fox-rhs": _cmd_bounds_fox_rhs,
    "selftest": _cmd_selftest,
}


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one configuration and return (exit code, rendered
    report).  Raises domain errors for the caller to map to exit codes."""
    handler = HANDLERS.get(config.command)
    if handler is None:
        raise PreconditionViolated(f"unknown command {config.command!r}")
    payload, code = handler(config.opts(), config)
    return code, render(config.command, payload, config.output_format)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    budgeted = argparse.ArgumentParser(add_help=False)
    budgeted.add_argument("--budget", type=int, default=None,
                          help="node budget (default: PERMX_BUDGET or library default)")

    parser = argparse.ArgumentParser(
        prog="permx",
        description="pattern containment, avoidance enumeration, and extremal bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("contains", parents=[common])
    p.add_argument("--host", required=True)
    p.add_argument("--pattern", required=True)

    p = sub.add_parser("matrix-contains", parents=[common])
    p.add_argument("--host", required=True, help="rows as 0/1 strings joined by commas")
    p.add_argument("--pattern", required=True)

    for name in ("sum", "skew"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--left", required=True)
        p.add_argument("--right", required=True)

    p = sub.add_parser("inflate", parents=[common])
    p.add_argument("--skeleton", required=True)
    p.add_argument("--blocks", required=True, help="comma-separated block permutations")

    p = sub.add_parser("decompose", parents=[common])
    p.add_argument("--pattern", required=True)
    p.add_argument("--c", type=int, required=True)

    p = sub.add_parser("count-av", parents=[common, budgeted])
    p.add_argument("--pattern", required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("sw-estimate", parents=[common, budgeted])
    p.add_argument("--pattern", required=True)
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("merge-check", parents=[common, budgeted])
    p.add_argument("--red", required=True)
    p.add_argument("--blue", required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("verify-jv", parents=[common, budgeted])
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("exfn", parents=[common, budgeted])
    p.add_argument("--pattern", required=True)
    p.add_argument("--n", type=int, required=True)

    for name in ("fpts", "gpts"):
        p = sub.add_parser(name, parents=[common, budgeted])
        p.add_argument("--pattern", required=True)
        p.add_argument("--t", type=int, required=True)
        p.add_argument("--s", type=int, required=True)
        p.add_argument("--n-cap", type=int, default=DEFAULT_ROW_CAP)

    p = sub.add_parser("check-lemma21", parents=[common, budgeted])
    p.add_argument("--pattern", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--hypothesis-n", type=int, default=4)

    p = sub.add_parser("check-lemma22", parents=[common, budgeted])
    p.add_argument("--pattern", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)

    bounds = sub.add_parser("bounds")
    bsub = bounds.add_subparsers(dest="bounds_command", required=True)

    p = bsub.add_parser("mt", parents=[common])
    p.add_argument("--k", type=int, required=True)

    p = bsub.add_parser("lemma21", parents=[common])
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--s", type=float, required=True)

    p = bsub.add_parser("lemma22-rhs", parents=[common])
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--f-sub", type=int, default=0)

    p = bsub.add_parser("alpha", parents=[common])
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--c", type=float, required=True)

    for name in ("schedule", "certify"):
        p = bsub.add_parser(name, parents=[common])
        p.add_argument("--k", type=float, required=True)
        p.add_argument("--a", type=float, required=True)
        p.add_argument("--c", type=int, required=True)
        p.add_argument("--floors", action="store_true")
        if name == "certify":
            p.add_argument("--tol", type=float, default=1e-9)

    p = bsub.add_parser("crude", parents=[common])
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--c", type=int, required=True)

    p = bsub.add_parser("fox-rhs", parents=[common])
    p.add_argument("--ex-table", required=True, help="entries like 1=1,2=3,3=5")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("selftest", parents=[common])
    p.add_argument("--seed", type=int, default=None,
                   help="shuffles criterion execution order only, never results")

    return parser


_NON_OPTION_KEYS = {"command", "bounds_command", "format", "budget", "seed"}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    command = args.command
    if command == "bounds":
        command = f"bounds {args.bounds_command}"
    budget = getattr(args, "budget", None)
    if budget is None:
        env = os.environ.get("PERMX_BUDGET")
        if env is not None:
            try:
                budget = int(env)
            except ValueError as exc:
                raise MalformedInput(f"PERMX_BUDGET must be an integer: {env!r}") from exc
    if budget is None:
        budget = DEFAULT_NODE_BUDGET
    options = tuple(
        (key, value)
        for key, value in vars(args).items()
        if key not in _NON_OPTION_KEYS
    )
    return RunConfig(
        command=command,
        options=options,
        output_format=args.format,
        node_budget=budget,
        seed=getattr(args, "seed", None),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        code, out = run(config)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except PreconditionViolated as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except PermxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # last resort: anything unexpected is code 1
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
