"""The command line: validate, generate, run, trace-diff, neighbors, render.

Exit codes follow one convention across all verbs: 0 on success, 1 for a
domain failure (a rule conflict, a trace mismatch, a missing rule during
a run), 2 for a usage or file problem.  Standard output carries only the
requested artifact (a rules listing, a trace, a diff, an SVG); all
diagnostics go to standard error.

The --rules flag can be left out: the HYPCA_RULES environment variable
names a default file, and a catalog scenario falls back to the built-in
table for its own p and circuit kind.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import circuits, engine, genrules, render, rulecore, tiling


class Usage(Exception):
    """Bad invocation or unreadable input; exits 2."""


class Failure(Exception):
    """A domain-level failure with its message already printed; exits 1."""


def _say(message: str) -> None:
    print(message, file=sys.stderr)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise Usage(f"cannot read {path}: {err}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as err:
        raise Usage(f"cannot write {out}: {err}") from None


def _load_table(path: str) -> rulecore.RuleTable:
    text = _read(path)
    try:
        return rulecore.parse_rules(text)
    except rulecore.Conflict as err:
        raise Failure(f"{path}: {err}") from None
    except (SyntaxError, rulecore.LengthError) as err:
        raise Usage(f"{path}: {err}") from None


def _load_trace(path: str) -> engine.Trace:
    try:
        return engine.Trace.from_csv(_read(path))
    except (ValueError, IndexError) as err:
        raise Usage(f"{path}: not a trace file ({err})") from None


def _find_scenario(spec: str) -> circuits.Scenario:
    """Catalog name first, then a scenario file path."""
    for sc in circuits.scenario_catalog():
        if sc.name == spec:
            return sc
    path = Path(spec)
    if not path.exists():
        names = ", ".join(s.name for s in circuits.scenario_catalog())
        raise Usage(f"{spec!r} is neither a catalog scenario nor a file; "
                    f"catalog: {names}")
    try:
        return circuits.parse_scenario(_read(spec), name=path.stem)
    except (SyntaxError, ValueError) as err:
        raise Usage(f"{spec}: {err}") from None


# ------------------------------------------------------------------ verbs

def cmd_validate(args) -> int:
    table = _load_table(args.rules_file)
    _say(f"{args.rules_file}: p={table.p}, {len(table)} rule classes, "
         "conflict-free")
    return 0


_FAMILY_SETS = {
    "tracks": (genrules.generate_track_rules,),
    "crossing": (genrules.generate_crossing_rules,),
    "fixed": (genrules.generate_fixed_switch_rules,),
    "flipflop": (genrules.generate_flipflop_rules,),
    "memory": (genrules.generate_memory_rules,),
}
_FAMILY_SETS["all"] = tuple(
    g for makers in _FAMILY_SETS.values() for g in makers)


def cmd_generate(args) -> int:
    try:
        rules = set().union(*(make(args.p) for make in _FAMILY_SETS[args.family]))
    except genrules.TemplateError as err:
        raise Usage(str(err)) from None
    table = rulecore.RuleTable(args.p)
    for rule in sorted(rules, key=lambda r: r.prov):
        rulecore.insert_rule(table, rule)
    text = rulecore.format_table(
        table, header_comment=f"{args.family} families instantiated at p={args.p}")
    _emit(text, args.output)
    return 0


def _default_table(sc: circuits.Scenario) -> rulecore.RuleTable:
    if sc.template.p == 13:
        return genrules.packaged_p13_table()
    kind = sc.name.split("_")[0]
    if kind in ("crossing", "fixed", "flipflop", "memory"):
        return genrules.circuit_table(sc.template.p, kind)
    raise Usage("no rules given: pass --rules or set HYPCA_RULES")


def cmd_run(args) -> int:
    sc = _find_scenario(args.scenario)
    rules_path = args.rules or os.environ.get("HYPCA_RULES")
    table = _load_table(rules_path) if rules_path else _default_table(sc)
    if table.p != sc.template.p:
        raise Usage(f"rules are for p={table.p} but scenario {sc.name!r} "
                    f"runs at p={sc.template.p}")
    steps = sc.steps if args.steps is None else args.steps
    trace = engine.run(sc.template.region(), table, steps,
                       list(sc.watch), list(sc.injections))
    if args.trace:
        _emit(trace.to_csv(), args.trace)
    if args.expect:
        expected = _load_trace(args.expect)
        diffs = engine.trace_diff(trace, expected)
        if diffs:
            for t, cell, want, got in diffs:
                _say(f"t={t} {cell}: expected {want}, got {got}")
            raise Failure(f"{sc.name}: {len(diffs)} trace entries differ")
        _say(f"{sc.name}: trace matches {args.expect}")
    if args.trace is None and args.expect is None:
        sys.stdout.write(trace.to_csv())
    return 0


def cmd_trace_diff(args) -> int:
    left = _load_trace(args.left)
    right = _load_trace(args.right)
    diffs = engine.trace_diff(left, right)
    for t, cell, want, got in diffs:
        print(f"t={t} {cell}: {got} != {want}")
    return 1 if diffs else 0


def cmd_neighbors(args) -> int:
    try:
        cell = tiling.parse_cell(args.cell)
        row = tiling.neighbors(cell, args.p)
    except ValueError as err:
        raise Usage(str(err)) from None
    for k, coord in enumerate(row, start=1):
        print(f"{k} {coord}")
    return 0


def cmd_render(args) -> int:
    if args.scenario:
        sc = _find_scenario(args.scenario)
        svg = render.render_schematic(sc.template)
    else:
        if args.p is None or args.radius is None:
            raise Usage("render needs --p and --radius, or --scenario")
        if not 0 <= args.radius <= 5:
            raise Usage(f"drawn radius must be 0..5, got {args.radius}")
        try:
            layout = render.layout_ball(args.p, args.radius)
        except ValueError as err:
            raise Usage(str(err)) from None
        svg = render.render_svg(layout)
    _emit(svg + "\n", args.output)
    return 0


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypca",
        description="two-state railway automata on {p,3} hyperbolic tilings")
    sub = parser.add_subparsers(dest="command", required=True, metavar="verb")

    v = sub.add_parser("validate", help="check a rules file for conflicts")
    v.add_argument("rules_file")
    v.set_defaults(func=cmd_validate)

    g = sub.add_parser("generate", help="emit a rule table for some p")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--family", default="all", choices=sorted(_FAMILY_SETS))
    g.add_argument("-o", "--output", metavar="FILE")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="run a scenario, save or check its trace")
    r.add_argument("--scenario", required=True, metavar="NAME|FILE")
    r.add_argument("--rules", metavar="FILE")
    r.add_argument("--steps", type=int)
    r.add_argument("--trace", metavar="OUT.csv")
    r.add_argument("--expect", metavar="FILE")
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("trace-diff", help="compare two trace files")
    d.add_argument("left")
    d.add_argument("right")
    d.set_defaults(func=cmd_trace_diff)

    n = sub.add_parser("neighbors", help="list a tile's p neighbors in order")
    n.add_argument("--p", type=int, required=True)
    n.add_argument("--cell", required=True, metavar="SPEC",
                   help="C for the center, or s<sector>.<number>")
    n.set_defaults(func=cmd_neighbors)

    w = sub.add_parser("render", help="draw a ball, or a circuit schematic")
    w.add_argument("--p", type=int)
    w.add_argument("--radius", type=int)
    w.add_argument("--scenario", metavar="NAME|FILE")
    w.add_argument("-o", "--output", metavar="OUT.svg")
    w.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except Usage as err:
        _say(f"hypca {args.command}: {err}")
        return 2
    except Failure as err:
        _say(f"hypca {args.command}: {err}")
        return 1
    except rulecore.Conflict as err:
        _say(f"hypca {args.command}: conflict: {err}")
        return 1
    except rulecore.MissingRule as err:
        _say(f"hypca {args.command}: missing rule: {err}")
        return 1
    except engine.ColumnMismatch as err:
        _say(f"hypca {args.command}: columns differ: {err}")
        return 1
    except engine.SupportEscape as err:
        _say(f"hypca {args.command}: {err}")
        return 1
