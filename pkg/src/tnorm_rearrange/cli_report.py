"""Operator-spec grammar, table reproduction and the command-line entry point.

Operator specs::

    spec    := family [":" number]
             | "dual" "(" spec ")"
             | "ordinal" "(" summand ("," summand)* ")"
             | "gen" "(" ("luka" | "nlog" | "yager" ":" number) ")"
    summand := spec "@" number "-" number

Whitespace is ignored and names are case-insensitive.

The table rows are the 14 T-norm families plus the bounded sum used as
otimes; columns are the 14 T-conorm families plus the Lukasiewicz T-norm
used as oplus.  A cell carries "C" when no violation of the primal two-term
condition was found for any parameter sample, "D" likewise for the dual.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constructors import (
    OrdinalSummand,
    luka_generator,
    nlog_generator,
    ordinal_sum,
    tnorm_from_generator,
    yager_generator,
)
from .norm_catalog import (
    FAMILIES,
    PARAMETER_SAMPLES,
    NumericalError,
    Operator,
    make_operator,
    resolve_family,
    standard_dual,
)
from .properties import (
    GridSpec,
    check_archimedean,
    check_axioms,
    check_copula,
    check_property,
    check_zero_divisors,
)
from .rearrangement import (
    DUAL,
    PRIMAL,
    search_pair,
    sigma_m1,
    sigma_m2,
    transport_witness,
    verify_circular_extremes,
    verify_on_samples,
)

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<punct>[():,@-]))"
)


class SpecSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SpecSyntaxError("unexpected character", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise SpecSyntaxError(f"expected {want!r}, got {tok[1]!r}", self.text, tok[2])
        self.i += 1
        return tok

    def number(self) -> float:
        # a '-' token directly before a number is a sign (e.g. clayton:-1)
        if self.peek()[0] == "punct" and self.peek()[1] == "-":
            self.take()
            return -float(self.take("num")[1])
        return float(self.take("num")[1])

    def unsigned(self) -> float:
        tok = self.take("num")
        return float(tok[1])

    def spec(self) -> Operator:
        _, name, pos = self.take("name")
        name = name.lower()
        if name == "dual":
            self.take("punct", "(")
            inner = self.spec()
            self.take("punct", ")")
            return standard_dual(inner)
        if name == "ordinal":
            self.take("punct", "(")
            parts = [self.summand()]
            while self.peek()[1] == ",":
                self.take()
                parts.append(self.summand())
            self.take("punct", ")")
            return ordinal_sum(parts)
        if name == "gen":
            self.take("punct", "(")
            _, gname, gpos = self.take("name")
            gname = gname.lower()
            if gname == "luka":
                gen = luka_generator()
            elif gname == "nlog":
                gen = nlog_generator()
            elif gname == "yager":
                self.take("punct", ":")
                gen = yager_generator(self.number())
            else:
                raise SpecSyntaxError(f"unknown generator {gname!r}", self.text, gpos)
            self.take("punct", ")")
            return tnorm_from_generator(gen)
        alpha = None
        if self.peek()[1] == ":":
            self.take()
            alpha = self.number()
        try:
            return make_operator(name, alpha)
        except KeyError:
            raise SpecSyntaxError(f"unknown family {name!r}", self.text, pos) from None

    def summand(self) -> OrdinalSummand:
        op = self.spec()
        self.take("punct", "@")
        a = self.unsigned()
        self.take("punct", "-")
        b = self.unsigned()
        return OrdinalSummand(op, a, b)


def parse_operator_spec(text: str) -> Operator:
    """Build an operator from its textual spec, e.g. ``"frank:2"`` or ``"dual(product)"``."""
    p = _Parser(text)
    op = p.spec()
    tok = p.peek()
    if tok[0] != "end":
        raise SpecSyntaxError(f"trailing input {tok[1]!r}", text, tok[2])
    return op


def render(op: Operator) -> str:
    """Inverse of :func:`parse_operator_spec` for grammar-expressible operators."""
    kind = op.provenance[0]
    if kind == "closed_form":
        if op.family is None:
            raise ValueError(f"{op.label}: not a catalog operator")
        return op.family if op.alpha is None else f"{op.family}:{op.alpha!r}"
    if kind == "dual_of":
        _, base, neg = op.provenance
        if neg is not None:
            raise ValueError("duals under non-standard negations have no spec form")
        return f"dual({render(base)})"
    if kind == "ordinal_sum":
        parts = ", ".join(f"{render(s.op)}@{s.a!r}-{s.b!r}" for s in op.provenance[1])
        return f"ordinal({parts})"
    if kind == "generator":
        return f"gen({op.provenance[1].name})"
    raise ValueError(f"cannot render provenance {kind!r}")


# ---------------------------------------------------------------------------
# the (otimes, oplus) mark table

ROWS = [
    ("T_m", "minimum"), ("T_p", "product"), ("T_L", "lukasiewicz"), ("T_d", "drastic"),
    ("T_n", "nilpotent_minimum"), ("T_DP", "dubois_prade"), ("T_AMH", "ali_mikhail_haq"),
    ("T_C", "clayton"), ("T_F", "frank"), ("T_Y", "yager"), ("T_MT", "mayor_torrens"),
    ("T_SW", "sugeno_weber"), ("T_G", "gumbel"), ("T_J", "joe"), ("T_L'", "bounded_sum"),
]
COLUMNS = [(f"{sym}'", f"{fam}_conorm") for sym, fam in ROWS[:14]] + [("T_L", "lukasiewicz")]

_STD = ["CD", "CD", "CD", "CD", "C"] + ["CD"] * 9 + ["C"]
_NO_DRASTIC_RI = ["CD", "CD", "CD", "D", "C"] + ["CD"] * 9 + ["C"]

# Published reference marks (C = rearrangement inequality, D = its dual).
REFERENCE_TABLE = {
    "T_m": ["CD"] * 15,
    "T_p": _STD,
    "T_L": _NO_DRASTIC_RI,
    "T_d": ["CD", "CD", "C", "CD", "C", "CD", "CD", "C", "CD", "C", "C", "C", "CD", "CD", ""],
    "T_n": ["CD", "D", "D", "D", "CD"] + ["D"] * 9 + ["CD"],
    "T_DP": _STD,
    "T_AMH": _STD,
    "T_C": _NO_DRASTIC_RI,
    "T_F": _STD,
    "T_Y": _NO_DRASTIC_RI,
    "T_MT": _NO_DRASTIC_RI,
    "T_SW": _NO_DRASTIC_RI,
    "T_G": _STD,
    "T_J": _STD,
    "T_L'": ["CD", "D", "D", "", "CD"] + ["D"] * 9 + [""],
}


def reference_marks(row: str, col: str) -> str:
    return REFERENCE_TABLE[row][[c for c, _ in COLUMNS].index(col)]


# ---------------------------------------------------------------------------
# static encoding of the known sufficient conditions


def has_zero_divisors(family: str, alpha=None) -> bool:
    """Zero-divisor flag of a catalog T-norm family at ``alpha``."""
    name = resolve_family(family)[0].name
    if name in ("lukasiewicz", "drastic", "nilpotent_minimum", "yager", "sugeno_weber"):
        return True
    if name == "clayton":
        return alpha > 0
    if name == "mayor_torrens":
        return alpha > 0
    return False


def _norm_flags(family):
    """(A, B) for a row operator; the bounded sum satisfies A but not B."""
    if family == "bounded_sum":
        return True, False
    fam = FAMILIES[family]
    return fam.property_a, fam.property_b


def _conorm_flags(family):
    """(A', B') for a column operator; Lukasiewicz satisfies A' but not B'."""
    if family == "lukasiewicz":
        return True, False
    fam = resolve_family(family)[0]
    return fam.property_a, fam.property_b


def predicted_marks(row_family: str, row_alpha, col_family: str, col_alpha) -> str:
    """Marks implied by the known sufficient conditions at one parameter sample."""
    a, b = _norm_flags(row_family)
    a_p, b_p = _conorm_flags(col_family)
    row_is_tnorm = row_family in FAMILIES
    col_is_tconorm = col_family != "lukasiewicz"
    col_base = resolve_family(col_family)[0].name if col_is_tconorm else None

    ri = (b and a_p) or row_family == "minimum" or col_base == "minimum"
    dri = (a and b_p) or row_family == "minimum" or col_base == "minimum"

    # drastic minimum with any disjunctive oplus; drastic maximum with conjunctive otimes
    if row_family == "drastic" and col_is_tconorm:
        ri = True
        if not has_zero_divisors(col_base, col_alpha):
            dri = True
    if col_base == "drastic":
        if row_is_tnorm:
            dri = True
            if not has_zero_divisors(row_family, row_alpha):
                ri = True

    special = {("nilpotent_minimum", "lukasiewicz"), ("bounded_sum", "nilpotent_minimum_conorm"),
               ("nilpotent_minimum", "nilpotent_minimum_conorm")}
    if (row_family, col_family) in special:
        ri = dri = True
    return ("C" if ri else "") + ("D" if dri else "")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    resolution: int = 17
    budget: int = 20_000
    seed: int = 1
    samples: dict = field(default_factory=lambda: dict(PARAMETER_SAMPLES))
    clayton_negative: bool = True
    workers: int = 1
    out: Optional[str] = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        if self.resolution < 2:
            raise ValueError("resolution must be >= 2")
        if self.fmt not in ("csv", "jsonl"):
            raise ValueError("format must be csv or jsonl")

    def alphas(self, family: str) -> tuple:
        name = resolve_family(family)[0].name
        vals = tuple(self.samples.get(name, (None,)))
        if name == "clayton" and not self.clayton_negative:
            vals = tuple(v for v in vals if v > 0)
        return vals


@dataclass
class Table3Cell:
    row: str
    column: str
    marks: str
    reference: str
    evidence: dict  # direction -> "theorem_expected" | "search_clean" | "counterexample"
    witnesses: dict  # direction -> first witness record or None
    runs: list = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        """Search-clean where the reference table leaves the mark blank."""
        return any(m not in self.reference for m in self.marks)

    def to_json(self) -> str:
        return json.dumps({
            "row": self.row, "column": self.column, "marks": self.marks,
            "reference": self.reference, "flagged": self.flagged,
            "evidence": self.evidence, "witnesses": self.witnesses, "runs": self.runs,
        })


def _cell_seed(seed, i, j, k, d):
    return int(np.random.SeedSequence([seed, i, j, k, d]).generate_state(1)[0])


def run_cell(i: int, j: int, config: RunConfig) -> Table3Cell:
    row, row_family = ROWS[i]
    col, col_family = COLUMNS[j]
    grid = GridSpec(resolution=config.resolution, random_samples=0, seed=config.seed)
    combos = list(itertools.product(config.alphas(row_family), config.alphas(col_family)))
    clean = {PRIMAL: True, DUAL: True}
    expected = {PRIMAL: True, DUAL: True}
    witnesses = {PRIMAL: None, DUAL: None}
    runs = []
    for k, (ra, ca) in enumerate(combos):
        otimes = make_operator(row_family, ra)
        oplus = make_operator(col_family, ca)
        predicted = predicted_marks(row_family, ra, col_family, ca)
        for d, direction in enumerate((PRIMAL, DUAL)):
            seed = _cell_seed(config.seed, i, j, k, d)
            res = search_pair(otimes, oplus, direction, config.budget, seed, grid)
            rec = res.to_dict()
            rec.update(otimes_alpha=ra, oplus_alpha=ca, predicted=predicted)
            if res.violated and direction == PRIMAL:
                rec["transport_ok"] = transport_witness(res, otimes, oplus).violated
            runs.append(rec)
            expected[direction] &= ("C" if direction == PRIMAL else "D") in predicted
            if res.violated:
                clean[direction] = False
                if witnesses[direction] is None:
                    witnesses[direction] = rec
    marks = ("C" if clean[PRIMAL] else "") + ("D" if clean[DUAL] else "")
    evidence = {}
    for direction in (PRIMAL, DUAL):
        if not clean[direction]:
            evidence[direction] = "counterexample"
        elif expected[direction]:
            evidence[direction] = "theorem_expected"
        else:
            evidence[direction] = "search_clean"
    return Table3Cell(row, col, marks, reference_marks(row, col), evidence, witnesses, runs)


def _run_cell_packed(args):
    return run_cell(*args)


def reproduce_table3(config: RunConfig = RunConfig()) -> list:
    """All 15 x 15 cells in row-major order, independent of worker count."""
    jobs = [(i, j, config) for i in range(len(ROWS)) for j in range(len(COLUMNS))]
    if config.workers <= 1:
        return [run_cell(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(_run_cell_packed, jobs, chunksize=4))


def to_csv(cells) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["otimes"] + [c for c, _ in COLUMNS])
    by_row = {}
    for cell in cells:
        by_row.setdefault(cell.row, {})[cell.column] = cell.marks
    for row, _ in ROWS:
        writer.writerow([row] + [by_row[row][c] for c, _ in COLUMNS])
    return buf.getvalue()


def to_jsonl(cells) -> str:
    return "".join(cell.to_json() + "\n" for cell in cells)


def write_output(cells, path: str, fmt: str = "csv") -> None:
    text = to_csv(cells) if fmt == "csv" else to_jsonl(cells)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# command line


class _UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=False))


def _cmd_eval(args):
    op = parse_operator_spec(args.op)
    _emit({"operator": op.label, "kind": op.kind, "x": args.x, "y": args.y,
           "value": op(args.x, args.y)})


def _cmd_axioms(args):
    op = parse_operator_spec(args.op)
    for v in check_axioms(op, GridSpec(args.grid, args.samples, args.seed)):
        print(v.to_json())


def _cmd_property(args):
    op = parse_operator_spec(args.op)
    print(check_property(op, args.prop, GridSpec(args.grid, args.samples, args.seed)).to_json())


def _cmd_copula(args):
    op = parse_operator_spec(args.op)
    print(check_copula(op, GridSpec(args.grid, args.samples, args.seed)).to_json())


def _cmd_zerodiv(args):
    op = parse_operator_spec(args.op)
    print(check_zero_divisors(op, GridSpec(args.grid, args.samples, args.seed)).to_json())


def _cmd_archimedean(args):
    op = parse_operator_spec(args.op)
    print(check_archimedean(op, GridSpec(args.grid, 0, 0), args.nmax).to_json())


def _cmd_pair(args):
    otimes = parse_operator_spec(args.otimes)
    oplus = parse_operator_spec(args.oplus)
    res = search_pair(otimes, oplus, args.direction, args.budget, args.seed, GridSpec(args.grid, 0))
    print(res.to_json())


def _directions(arg):
    return (PRIMAL, DUAL) if arg == "both" else (arg,)


def _cmd_verify(args):
    otimes = parse_operator_spec(args.otimes)
    oplus = parse_operator_spec(args.oplus)
    for direction in _directions(args.direction):
        v = verify_on_samples(otimes, oplus, args.n, args.trials, args.seed, direction)
        w = v.witness
        _emit({"otimes": otimes.label, "oplus": oplus.label, "direction": direction,
               "n": args.n, "trials": args.trials, "seed": args.seed, "holds": v.holds,
               "witness": None if w is None else {
                   "xs": list(w.xs), "ys": list(w.ys), "sigma": list(w.sigma),
                   "value": w.value, "lower": w.lower, "upper": w.upper}})


def _cmd_circular(args):
    otimes = parse_operator_spec(args.otimes)
    oplus = parse_operator_spec(args.oplus)
    a = np.sort(np.random.default_rng(args.seed).random(args.n))
    for direction in _directions(args.direction):
        v = verify_circular_extremes(otimes, oplus, a, direction)
        _emit({"otimes": otimes.label, "oplus": oplus.label, "direction": direction,
               "a": a.tolist(), "sigma_m1": list(sigma_m1(args.n)),
               "sigma_m2": list(sigma_m2(args.n)), "holds": v.holds,
               "minimum": v.minimum, "maximum": v.maximum,
               "at_sigma_m1": v.at_m1, "at_sigma_m2": v.at_m2})


def _cmd_table3(args):
    config = RunConfig(resolution=args.grid, budget=args.budget, seed=args.seed,
                       workers=args.workers, out=args.out, fmt=args.format,
                       clayton_negative=not args.no_clayton_negative)
    cells = reproduce_table3(config)
    write_output(cells, args.out, args.format)
    flagged = [f"{c.row}/{c.column}" for c in cells if c.flagged]
    missing = [f"{c.row}/{c.column}" for c in cells if any(m not in c.marks for m in c.reference)]
    _emit({"out": args.out, "format": args.format, "cells": len(cells),
           "flagged_search_clean": flagged, "reference_marks_refuted": missing})


def build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="tnorm-rearrange",
                description="T-norm / T-conorm property checks and rearrangement inequalities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    def grid_opts(sp, resolution):
        sp.add_argument("--grid", type=int, default=resolution, help="grid resolution")
        sp.add_argument("--samples", type=int, default=10_000, help="random samples")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("eval", help="evaluate an operator at one point")
    sp.add_argument("--op", required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--y", type=float, required=True)
    sp.set_defaults(func=_cmd_eval)

    sp = sub.add_parser("axioms", help="commutativity, associativity, monotonicity, neutrality")
    sp.add_argument("--op", required=True)
    grid_opts(sp, 33)
    sp.set_defaults(func=_cmd_axioms)

    sp = sub.add_parser("property", help="decide property A, A', B or B'")
    sp.add_argument("--op", required=True)
    sp.add_argument("--prop", required=True, choices=["A", "A'", "B", "B'", "A_prime", "B_prime"])
    grid_opts(sp, 17)
    sp.set_defaults(func=_cmd_property)

    for name, func, text in (("copula", _cmd_copula, "copula check"),
                             ("zerodiv", _cmd_zerodiv, "search for zero divisors")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--op", required=True)
        grid_opts(sp, 17)
        sp.set_defaults(func=func)

    sp = sub.add_parser("archimedean", help="Archimedean property on the interior grid")
    sp.add_argument("--op", required=True)
    sp.add_argument("--nmax", type=int, default=2**40)
    sp.add_argument("--grid", type=int, default=17)
    sp.set_defaults(func=_cmd_archimedean)

    sp = sub.add_parser("pair", help="counterexample search for the two-term condition")
    sp.add_argument("--otimes", required=True)
    sp.add_argument("--oplus", required=True)
    sp.add_argument("--direction", choices=[PRIMAL, DUAL], default=PRIMAL)
    sp.add_argument("--budget", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--grid", type=int, default=17)
    sp.set_defaults(func=_cmd_pair)

    sp = sub.add_parser("verify", help="brute-force the permutation chain on random sequences")
    sp.add_argument("--otimes", required=True)
    sp.add_argument("--oplus", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--direction", choices=[PRIMAL, DUAL, "both"], default="both")
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("circular", help="check the circular extremes on a random sequence")
    sp.add_argument("--otimes", required=True)
    sp.add_argument("--oplus", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--direction", choices=[PRIMAL, DUAL, "both"], default="both")
    sp.set_defaults(func=_cmd_circular)

    sp = sub.add_parser("table3", help="reproduce the (otimes, oplus) table")
    sp.add_argument("--grid", type=int, default=17)
    sp.add_argument("--budget", type=int, default=20_000)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--out", required=True)
    sp.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--no-clayton-negative", action="store_true",
                    help="drop the negative Clayton parameter from the samples")
    sp.set_defaults(func=_cmd_table3)
    return p


def main(argv=None) -> int:
    """Exit codes: 0 completed, 1 usage error, 2 numerical error."""
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    return 0
