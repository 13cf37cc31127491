"""Command-line front end.

    eulersums compute T 1 2            numeric value of T_{1,2}
    eulersums compute genocchi 12      exact value
    eulersums verify SYM_TS --m 3 --p 3 --q 3
    eulersums verify CONV_BGG --n 0..40 --q 2..40
    eulersums verify all --max-weight 11
    eulersums examples                 replay the worked identities

Exit status: 0 when everything passes, 1 when an identity fails, 2 on usage
or configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from . import exact_kernel as ek
from .const_ring import Atom, AtomKind, Family, SumIndex
from .series_engine import EvalContext, PrecisionUnreachable, eval_atom, eval_euler_sum
from .verifier import (
    SCHEMAS,
    IdentityId,
    VerificationRecord,
    VerifyConfig,
    default_grid,
    summary,
    verify_all,
    verify_examples,
    verify_grid,
    verify_one,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
PARAM_NAMES = ("m", "p", "q", "n", "k", "l", "alpha", "gamma", "delta", "epsilon", "family")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    precision_digits: int = 50
    output_format: str = "text"
    threads: int = 1
    max_weight: int = 11
    out: str | None = None
    timings: bool = False

    def __post_init__(self) -> None:
        if self.precision_digits < 15:
            raise UsageError("--prec must be at least 15")
        if self.output_format not in ("text", "json", "csv"):
            raise UsageError(f"unknown format {self.output_format!r}")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")
        if self.max_weight < 2:
            raise UsageError("--max-weight must be >= 2")

    def verify_config(self) -> VerifyConfig:
        return VerifyConfig(self.precision_digits, threads=self.threads, max_weight=self.max_weight)


def _default_prec() -> int:
    raw = os.environ.get("EULERSUM_PREC")
    if raw is None:
        return 50
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"EULERSUM_PREC must be an integer, got {raw!r}") from None


def parse_values(text: str) -> list:
    """``"3"``, ``"0..40"`` or ``"1,3,5"`` (ranges may appear inside lists)."""
    out: list = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, _, hi = part.partition("..")
            try:
                a, b = int(lo), int(hi)
            except ValueError:
                raise UsageError(f"bad range {part!r}") from None
            if b < a:
                raise UsageError(f"empty range {part!r}")
            out.extend(range(a, b + 1))
        else:
            try:
                out.append(int(part))
            except ValueError:
                out.append(part)  # symbolic values such as a family letter
    return out


# --------------------------------------------------------------------------
# compute
# --------------------------------------------------------------------------

_ATOMS = {
    "pi": Atom(AtomKind.PI),
    "ln2": Atom(AtomKind.LN2),
    "li4half": Atom(AtomKind.LI4HALF),
    "zeta51": Atom(AtomKind.AZETA51),
    "zeta71": Atom(AtomKind.AZETA71),
    "zeta62": Atom(AtomKind.ZETA62),
}
_SUMS = {"T": Family.T_SUM, "S": Family.S_SUM, "R": Family.R_SUM}


def _ints(args: Sequence[str], count: int, what: str) -> list[int]:
    if len(args) != count:
        raise UsageError(f"{what} takes {count} integer argument(s)")
    try:
        return [int(a) for a in args]
    except ValueError:
        raise UsageError(f"{what} takes integer arguments") from None


def compute_target(target: Sequence[str], digits: int) -> dict:
    """Evaluate a flat positional target; returns a render-ready dict."""
    if not target:
        raise UsageError("missing target")
    head, rest = target[0], list(target[1:])
    key = head.lower()
    label = " ".join(target)
    if key == "bernoulli":
        (n,) = _ints(rest, 1, head)
        return {"target": label, "value": str(ek.bernoulli(n)), "exact": True}
    if key == "genocchi":
        (n,) = _ints(rest, 1, head)
        return {"target": label, "value": str(ek.genocchi(n)), "exact": True}
    if key == "dpoly":
        (n,) = _ints(rest, 1, head)
        return {"target": label, "value": str(ek.derivative_poly(n)), "exact": True}
    if key == "rho":
        m, n, k = _ints(rest, 3, head)
        return {"target": label, "value": str(ek.rho(m, n, k)), "exact": True}

    ctx = EvalContext(digits)
    try:
        if head in _SUMS:
            p, q = _ints(rest, 2, head)
            value = eval_euler_sum(SumIndex(_SUMS[head], p, q), ctx)
        elif head in ("t", "TT"):
            s1, s2 = _ints(rest, 2, head)
            family = Family.DOUBLE_t if head == "t" else Family.DOUBLE_T
            value = eval_euler_sum(SumIndex(family, s2, s1), ctx)
        elif key in ("zeta", "tbar"):
            (s,) = _ints(rest, 1, head)
            if s < 2:
                raise UsageError(f"{head} needs s >= 2")
            value = eval_atom(Atom(AtomKind.ZETA if key == "zeta" else AtomKind.TBAR, s), ctx)
        elif key in _ATOMS:
            _ints(rest, 0, head)
            value = eval_atom(_ATOMS[key], ctx)
        else:
            raise UsageError(f"unknown target {head!r}")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return {
        "target": label,
        "value": value.nstr(digits),
        "exact": False,
        "digits": digits,
        "error": f"{value.error:.1e}",
    }


def _render_compute(result: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result, separators=(", ", ": ")) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(result), lineterminator="\n")
        w.writeheader()
        w.writerow(result)
        return buf.getvalue()
    if result["exact"]:
        return f"{result['target']} = {result['value']}\n"
    return f"{result['target']} = {result['value']}  ({result['digits']} digits, error <= {result['error']})\n"


# --------------------------------------------------------------------------
# verify / examples rendering
# --------------------------------------------------------------------------

CSV_FIELDS = (
    "identity", "label", "params", "weight", "exact", "lhs", "rhs",
    "residual", "tolerance", "passed", "marginal", "retried", "precision_bits", "note",
)


def render_records(records: Sequence[VerificationRecord], fmt: str, timings: bool = False) -> str:
    if fmt == "json":
        lines = [json.dumps(r.to_dict(timings=timings), separators=(", ", ": ")) for r in records]
        lines.append(json.dumps({"summary": summary(records)}, separators=(", ", ": ")))
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        fields = CSV_FIELDS + (("elapsed",) if timings else ())
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in records:
            row = r.to_dict(timings=timings)
            row["params"] = " ".join(f"{k}={v}" for k, v in row["params"].items())
            w.writerow(row)
        return buf.getvalue()
    lines = []
    for r in records:
        d = r.to_dict(timings=timings)
        status = "PASS" if r.passed else "FAIL"
        if r.marginal:
            status += "*"
        params = " ".join(f"{k}={v}" for k, v in d["params"].items())
        head = f"{status:5s} {d['identity']:<13s} {params}"
        if r.label:
            head += f"  [{r.label}]"
        tail = f"residual={d['residual']}"
        if not r.exact:
            tail += f" tol={d['tolerance']}"
        if timings:
            tail += f" {d['elapsed']:.3f}s"
        if r.note:
            tail += f"  ({r.note})"
        lines.append(f"{head}  {tail}")
    s = summary(records)
    lines.append(f"{s['passed']}/{s['total']} passed, {s['failed']} failed, {s['marginal']} marginal")
    return "\n".join(lines) + "\n"


def _grid_from_args(identity: IdentityId, ns: argparse.Namespace, cfg: CliConfig):
    """Either a single point (dict) or a grid (dict of lists)."""
    names = SCHEMAS[identity].params
    given = {n: parse_values(getattr(ns, n)) for n in PARAM_NAMES if getattr(ns, n) is not None}
    extra = set(given) - set(names)
    if extra:
        raise UsageError(f"{identity.value} takes parameters {list(names)}, not {sorted(extra)}")
    single = all(n in given and len(given[n]) == 1 for n in names)
    if single and not ns.grid:
        return {n: given[n][0] for n in names}, False
    grid = default_grid(identity, cfg.max_weight)
    grid.update(given)
    return grid, True


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _exit_for(records: Sequence[VerificationRecord]) -> int:
    return EXIT_OK if all(r.passed for r in records) else EXIT_FAIL


def cmd_compute(ns: argparse.Namespace, cfg: CliConfig) -> int:
    try:
        result = compute_target(ns.target, cfg.precision_digits)
    except PrecisionUnreachable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(_render_compute(result, cfg.output_format), cfg.out)
    return EXIT_OK


def cmd_verify(ns: argparse.Namespace, cfg: CliConfig) -> int:
    vc = cfg.verify_config()
    if ns.identity.lower() == "all":
        records = verify_all(vc)
    else:
        try:
            identity = IdentityId.parse(ns.identity)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        spec, is_grid = _grid_from_args(identity, ns, cfg)
        try:
            records = verify_grid(identity, spec, vc) if is_grid else [verify_one(identity, spec, vc)]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    _write(render_records(records, cfg.output_format, cfg.timings), cfg.out)
    return _exit_for(records)


def cmd_examples(ns: argparse.Namespace, cfg: CliConfig) -> int:
    records = verify_examples(cfg.verify_config())
    _write(render_records(records, cfg.output_format, cfg.timings), cfg.out)
    return _exit_for(records)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None, help="target decimal digits (default 50, or $EULERSUM_PREC)")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--max-weight", type=int, default=11, help="cap on the weight of numeric grid points")
    common.add_argument("--out", default=None, help="write the report to this file")
    common.add_argument("--timings", action="store_true", help="include per-record wall time")

    parser = argparse.ArgumentParser(prog="eulersums", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common], help="evaluate one quantity")
    c.add_argument("target", nargs="+", help='e.g. "T 1 2", "zeta 3", "genocchi 12", "dpoly 3"')
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", parents=[common], help="verify one identity, a grid, or all")
    v.add_argument("identity", help=f"one of {', '.join(i.value for i in IdentityId)}, or 'all'")
    v.add_argument("--grid", action="store_true", help="use the default grid for unspecified parameters")
    for name in PARAM_NAMES:
        v.add_argument(f"--{name}", default=None, metavar="V", help="value, a..b range, or comma list")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("examples", parents=[common], help="replay worked identities")
    e.set_defaults(func=cmd_examples)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = CliConfig(
            precision_digits=ns.prec if ns.prec is not None else _default_prec(),
            output_format=ns.format,
            threads=ns.threads,
            max_weight=ns.max_weight,
            out=ns.out,
            timings=ns.timings,
        )
        return ns.func(ns, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"usage: {parser.prog} {ns.command} --help", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
