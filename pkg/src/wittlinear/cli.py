"""Command-line front end.

Subcommands map one-to-one onto the library surface: linlevel and range
report the tree invariants, cohomology and cokernel expose the explicit
cell computations, rccm prints the comparison-map ranges, stratify
rewrites stratifications as glue trees (or replays a realized one), and
venn decomposes a union of sets.

Exit codes by error class: 2 for unparseable or invalid input, 3 for a
missing capability (base field, smoothness, required shape), 4 for
queries outside the computed cases, 5 for internal consistency
failures.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import __version__
from .cells import (
    UnsupportedDifferentialError,
    h0_torus_cells,
    hc_proj_times_torus,
)
from .grammar import ParseError, parse_expr, pretty
from .ranges import (
    CapabilityError,
    RccmCase,
    SmoothnessRequiredError,
    TShapeRequiredError,
    lift_to_twisted_ideal,
    rccm_report,
    sheaf_range,
)
from .schemes import (
    FinitePosetRealization,
    InternalConsistencyError,
    ProjTimesTorus,
    SchemeError,
    Stratified,
    as_torus_cell,
    venn_stratification,
    SCHEMA_VERSION,
)
from .shifted import StepKind
from .witt import FINITE_FIELD, REAL, InvalidFormError

__all__ = ["main"]


class UnsupportedQueryError(RuntimeError):
    """Query outside the explicitly computed cases."""


_FIELDS = {"R": REAL, "Fq": FINITE_FIELD}


def _parse(text: str):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        tree = parse_expr(text)
    for w in caught:
        print("warning: %s" % w.message, file=sys.stderr)
    return tree


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        payload["schema_version"] = SCHEMA_VERSION
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _rules(provenance) -> list[dict]:
    return [
        {"node": r.node, "rule": r.rule, "inputs": list(r.inputs), "level": r.level}
        for r in provenance
    ]


def _smooth_note(args) -> str:
    return "smooth (asserted)" if args.smooth else "smooth (derived)"


def cmd_linlevel(args) -> None:
    from .schemes import j_linear_level_with_rules, range_level_with_rules

    tree = _parse(args.expr)
    jl, j_rules = j_linear_level_with_rules(tree)
    rl, r_rules = range_level_with_rules(tree)
    payload = {
        "command": "linlevel",
        "expr": pretty(tree),
        "dim": tree.dim,
        "j_linear_level": jl,
        "range_level": rl,
        "provenance": {"j_linear": _rules(j_rules), "range": _rules(r_rules)},
    }
    text = [
        "scheme: %s" % pretty(tree),
        "dim: %d" % tree.dim,
        "j-linear level: %d  [%s]" % (jl, ", ".join(r.rule for r in j_rules)),
        "range level: %d  [%s]" % (rl, ", ".join(r.rule for r in r_rules)),
    ]
    _emit(args, payload, text)


def _prepare_smooth(args):
    tree = _parse(args.expr)
    if args.smooth:
        tree = tree.assume_smooth()
    return tree


def cmd_range(args) -> None:
    tree = _prepare_smooth(args)
    field = _FIELDS[args.field]
    verdict = sheaf_range(tree, field)
    i = args.i
    iso_from = verdict.iso_from(i)
    inj_at = i + verdict.level - 1
    if inj_at >= iso_from:
        inj_at = None
    result = "ISO for j >= %d" % iso_from
    if inj_at is not None:
        result += "; INJECTIVE at j = %d" % inj_at
    payload = {
        "command": "range",
        "expr": pretty(tree),
        "assumptions": ["base field %s" % field.name, _smooth_note(args)],
        "degree_i": i,
        "dim": verdict.dim,
        "range_level": verdict.level,
        "iso_for_j_at_least": iso_from,
        "injective_at_j": inj_at,
        "dimension_cap_j": verdict.dim + 1,
        "not_surjective": sorted(list(p) for p in verdict.not_surjective
                                 if p[0] == i),
        "provenance": _rules(verdict.provenance),
        "result": result,
    }
    text = [
        "scheme: %s (dim %d, %s)" % (pretty(tree), verdict.dim, _smooth_note(args)),
        "range level: %d  [%s]" % (
            verdict.level, ", ".join(r.rule for r in verdict.provenance)),
        result,
    ]
    _emit(args, payload, text)


def _cell_cohomology(tree):
    """(degree, sum, model) for trees with explicit cohomology."""
    cell = as_torus_cell(tree)
    if cell is not None:
        return 0, h0_torus_cells(*cell), "torus-cell"
    if isinstance(tree, ProjTimesTorus):
        return tree.c, hc_proj_times_torus(tree.c, tree.e, tree.twist), "proj-times-torus"
    raise UnsupportedQueryError(
        "explicit cohomology is computed only for torus cells and "
        "projective-times-torus leaves"
    )


def cmd_cohomology(args) -> None:
    tree = _parse(args.expr)
    degree, total, model = _cell_cohomology(tree)
    payload = {
        "command": "cohomology",
        "expr": pretty(tree),
        "model": model,
        "degree": degree,
        "summands": [list(p) for p in total.summands],
        "rank": total.total_multiplicity,
    }
    text = [
        "scheme: %s" % pretty(tree),
        "cohomology in degree %d: shifts %s (rank %d)" % (
            degree,
            " ".join("%d^%d" % (s, m) if m > 1 else "%d" % s
                     for s, m in total.summands),
            total.total_multiplicity,
        ),
    ]
    if args.j is not None:
        verdict = total.step_verdict(args.j)
        payload["at_j"] = {
            "j": args.j,
            "group": total.describe_at(args.j),
            "step": verdict.kind.value,
            "step_cokernel": str(verdict.cokernel),
        }
        text.append("at level j = %d: %s" % (args.j, total.describe_at(args.j)))
        if verdict.kind is StepKind.ISO:
            text.append("step to level %d: ISO" % (args.j + 1))
        else:
            text.append("step to level %d: INJECTIVE_NOT_SURJECTIVE, cokernel %s"
                        % (args.j + 1, verdict.cokernel))
    _emit(args, payload, text)


def cmd_rccm(args) -> None:
    tree = _prepare_smooth(args)
    field = _FIELDS[args.field]
    verdict = rccm_report(tree, args.i, field)
    i = args.i
    j_lo = i - 2
    j_hi = max(verdict.iso_from(), i) + 1
    entries = []
    text_entries = []
    for j in range(j_lo, j_hi + 1):
        e = verdict.classify(j)
        entry = {"j": j, "case": e.case.value}
        line = "j = %d: %s" % (j, e.case.value)
        if e.image_contains_power is not None:
            entry["image_contains_power"] = e.image_contains_power
            line += "  image contains 2^%d * singular" % e.image_contains_power
        if e.image_equals_power is not None:
            entry["image_equals_power"] = e.image_equals_power
            line += "  image equals 2^%d * (grade-%d image)" % (
                e.image_equals_power, i)
        entries.append(entry)
        text_entries.append(line)
    payload = {
        "command": "rccm",
        "expr": pretty(tree),
        "assumptions": ["base field %s" % field.name, _smooth_note(args),
                        "valid for every line-bundle twist"],
        "degree_i": i,
        "dim": verdict.dim,
        "range_level": verdict.level,
        "iso_for_j_at_least": verdict.iso_from(),
        "entries": entries,
        "provenance": _rules(verdict.provenance),
    }
    text = [
        "scheme: %s (dim %d, %s)" % (pretty(tree), verdict.dim, _smooth_note(args)),
        "comparison map in degree %d (any line-bundle twist):" % i,
        "ISO for j >= %d" % verdict.iso_from(),
    ] + text_entries
    _emit(args, payload, text)


def cmd_cokernel(args) -> None:
    tree = _parse(args.expr)
    degree, total, model = _cell_cohomology(tree)
    if args.i != degree:
        raise UnsupportedQueryError(
            "cohomology of %s is computed in degree %d only, got --i %d"
            % (pretty(tree), degree, args.i)
        )
    j0 = args.j0
    max_shift = total.max_shift if total.max_shift is not None else j0
    j1 = args.j1 if args.j1 is not None else max(max_shift, j0)
    coker = total.composite_cokernel(j0, j1)
    stable_exponent = total.cokernel_exponent(j0)
    payload = {
        "command": "cokernel",
        "expr": pretty(tree),
        "model": model,
        "degree_i": degree,
        "j0": j0,
        "j1": j1,
        "summands": [list(p) for p in total.summands],
        "cokernel": {
            "free_rank": coker.free_rank,
            "torsion_orders": list(coker.torsion_orders),
        },
        "cokernel_str": str(coker),
        "exponent": coker.exponent,
        "stable_exponent": stable_exponent,
    }
    text = [
        "scheme: %s" % pretty(tree),
        "degree-%d cohomology shifts: %s" % (
            degree, " ".join("%d^%d" % (s, m) if m > 1 else "%d" % s
                             for s, m in total.summands)),
        "cokernel of the composite from level %d to level %d: %s" % (j0, j1, coker),
        "exponent: %d" % coker.exponent,
        "stable exponent from level %d: %d" % (j0, stable_exponent),
    ]
    _emit(args, payload, text)


def cmd_stratify(args) -> None:
    if (args.expr is None) == (args.file is None):
        raise UnsupportedQueryError("provide exactly one of EXPR or --file")
    if args.expr is not None:
        tree = _parse(args.expr)
        if not isinstance(tree, Stratified):
            raise UnsupportedQueryError("stratify needs a strat(...) expression")
        glue = tree.to_glue_tree()
        from .schemes import split_order

        order = split_order(tree.closure_order)
        payload = {
            "command": "stratify",
            "expr": pretty(tree),
            "split_order": list(order),
            "glue_tree": pretty(glue),
            "j_linear_level": glue.j_linear_level(),
            "range_level": glue.range_level(),
        }
        text = [
            "stratification: %s" % pretty(tree),
            "split order: %s" % " ".join(str(i) for i in order),
            "glue tree: %s" % pretty(glue),
            "j-linear level: %d" % glue.j_linear_level(),
            "range level: %d" % glue.range_level(),
        ]
    else:
        with open(args.file) as fh:
            data = json.load(fh)
        realization = FinitePosetRealization.from_json(data)
        order = realization.replay_split()
        payload = {
            "command": "stratify",
            "file": args.file,
            "pieces": [sorted(str(p) for p in piece)
                       for piece in realization.pieces],
            "split_order": list(order),
            "replay_check": "PASS",
        }
        text = [
            "realization: %d pieces over %d points" % (
                realization.size, len(realization.ground)),
            "split order: %s" % " ".join(str(i) for i in order),
            "replay check: PASS",
        ]
    _emit(args, payload, text)


def cmd_venn(args) -> None:
    with open(args.file) as fh:
        data = json.load(fh)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("unsupported schema_version in %s" % args.file)
    sets = [list(s) for s in data["sets"]]
    if len(sets) != args.n:
        raise ValueError(
            "expected %d sets, file has %d" % (args.n, len(sets)))
    report = venn_stratification(sets, data.get("ground"))
    strata_payload = []
    text_strata = []
    for s in report.strata:
        names = sorted(i + 1 for i in s.members)
        points = sorted(str(p) for p in s.points)
        strata_payload.append({"sets": names, "points": points})
        if points:
            text_strata.append("  {%s}: %s" % (
                ",".join("A%d" % i for i in names), " ".join(points)))
    payload = {
        "command": "venn",
        "n": args.n,
        "strata": strata_payload,
        "nonempty_strata": len(report.nonempty),
        "candidate_strata": len(report.strata),
        "partition_check": "PASS" if report.partition_ok else "FAIL",
        "boundary_check": "PASS" if report.boundary_ok else "FAIL",
        "irreducibility": "declared" if report.declared_irreducible else "not declared",
    }
    text = [
        "venn decomposition of %d sets:" % args.n,
        *text_strata,
        "nonempty strata: %d of %d candidates" % (
            len(report.nonempty), len(report.strata)),
        "partition check: PASS" if report.partition_ok else "partition check: FAIL",
        "boundary check: PASS" if report.boundary_ok else "boundary check: FAIL",
    ]
    _emit(args, payload, text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wittlinear",
        description="Witt-theoretic invariants of linear schemes over the reals",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("linlevel", help="construction levels of a scheme expression")
    p.add_argument("expr")
    add_format(p)
    p.set_defaults(func=cmd_linlevel)

    p = sub.add_parser("range", help="bijectivity range of the graded step")
    p.add_argument("expr")
    p.add_argument("--i", type=int, required=True, help="cohomological degree")
    p.add_argument("--smooth", action="store_true",
                   help="assert the scheme is smooth")
    p.add_argument("--field", choices=sorted(_FIELDS), default="R")
    add_format(p)
    p.set_defaults(func=cmd_range)

    p = sub.add_parser("cohomology", help="explicit cell cohomology as shifted sums")
    p.add_argument("expr")
    p.add_argument("--j", type=int, default=None, help="evaluate at this level")
    add_format(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("rccm", help="comparison map to singular cohomology")
    p.add_argument("expr")
    p.add_argument("--i", type=int, required=True, help="cohomological degree")
    p.add_argument("--smooth", action="store_true",
                   help="assert the scheme is smooth")
    p.add_argument("--field", choices=sorted(_FIELDS), default="R")
    add_format(p)
    p.set_defaults(func=cmd_rccm)

    p = sub.add_parser("cokernel", help="cokernel of iterated steps on cell cohomology")
    p.add_argument("expr")
    p.add_argument("--i", type=int, required=True, help="cohomological degree")
    p.add_argument("--j0", type=int, required=True, help="source level")
    p.add_argument("--j1", type=int, default=None,
                   help="target level (default: stable)")
    add_format(p)
    p.set_defaults(func=cmd_cokernel)

    p = sub.add_parser("stratify", help="rewrite a stratification as a glue tree")
    p.add_argument("expr", nargs="?", default=None)
    p.add_argument("--file", default=None,
                   help="JSON realization to replay instead of an expression")
    add_format(p)
    p.set_defaults(func=cmd_stratify)

    p = sub.add_parser("venn", help="intersection strata of a union of sets")
    p.add_argument("n", type=int, help="number of sets")
    p.add_argument("--file", required=True, help="JSON file with ground and sets")
    add_format(p)
    p.set_defaults(func=cmd_venn)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UnsupportedDifferentialError, UnsupportedQueryError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 4
    except (CapabilityError, SmoothnessRequiredError, TShapeRequiredError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 3
    except InternalConsistencyError as e:
        print("error: %s" % e, file=sys.stderr)
        return 5
    except (ParseError, SchemeError, InvalidFormError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    return 0
