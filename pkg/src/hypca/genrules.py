"""Rule tables from data: the p=13 transcription and the parametric families.

The p=13 railway rules are shipped verbatim as ``data/p13.rules``; loading
them is just parsing plus a sanity check.  For p >= 17 the rules come in
families written once with symbolic white runs and instantiated per p:

    family track.straight1
    1: W BWWBWWWBW^k -> W

``k`` always stands for the single free run of a track-cell word, so its
value is forced by the context length: k = p minus the written letters.
The switch and sensor families use two runs ``a`` and ``b``; the shipped
circuit layouts keep the short side at one cell and grow only the long
side, so a = 1 and b is again forced by the length.  Numeric exponents
are mere run-length shorthand and carry no parameter.

Every rule records its family and in-family number as provenance, which
is what a conflict report or a trace failure will show.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .rulecore import (
    B,
    Rule,
    RuleTable,
    W,
    insert_rule,
    parse_rules,
)

__all__ = [
    "Atom",
    "RuleTemplate",
    "TemplateError",
    "load_templates",
    "parse_templates",
    "load_p13_ruleset",
    "packaged_p13_table",
    "generate_track_rules",
    "generate_crossing_rules",
    "generate_fixed_switch_rules",
    "generate_flipflop_rules",
    "generate_memory_rules",
    "circuit_table",
]

# (state, exponent): exponent is a repeat count, or a run name from SPACERS
Atom = tuple[str, "int | str"]

SPACERS = ("a", "b", "k")

MIN_GENERIC_P = 17


class TemplateError(ValueError):
    """A family line that cannot be read or instantiated."""


@dataclass(frozen=True)
class RuleTemplate:
    """One family rule: a context word with symbolic white runs."""

    family: str
    number: int
    current: str
    atoms: tuple[Atom, ...]
    new: str

    @property
    def fixed(self) -> int:
        """Letters of the word that do not depend on p."""
        return sum(e for _, e in self.atoms if isinstance(e, int))

    @property
    def symbols(self) -> tuple[str, ...]:
        seen: list[str] = []
        for _, e in self.atoms:
            if isinstance(e, str) and e not in seen:
                seen.append(e)
        return tuple(seen)

    def spacer_values(self, p: int) -> dict[str, int]:
        """Run lengths at this p; the context must come out p long.

        One symbol takes all the slack.  With both a and b, a stays at
        its minimal value 1 (the layouts never widen the short side) and
        b absorbs the rest.
        """
        names = self.symbols
        slack = p - self.fixed
        if not names:
            if slack != 0:
                raise TemplateError(
                    f"{self.family} {self.number}: fixed word of length "
                    f"{self.fixed} cannot serve p={p}")
            return {}
        if len(names) == 1:
            values = {names[0]: slack}
        elif set(names) == {"a", "b"}:
            values = {"a": 1, "b": slack - 1}
        else:
            raise TemplateError(
                f"{self.family} {self.number}: unsupported run names {names}")
        if any(v < 1 for v in values.values()):
            raise TemplateError(
                f"{self.family} {self.number}: p={p} leaves no room for "
                f"runs {names} after {self.fixed} fixed letters")
        return values

    def context(self, p: int) -> str:
        values = self.spacer_values(p)
        parts = []
        for state, e in self.atoms:
            parts.append(state * (e if isinstance(e, int) else values[e]))
        return "".join(parts)

    def instantiate(self, p: int) -> Rule:
        return Rule(self.current, self.context(p), self.new,
                    prov=f"{self.family} {self.number}")


# ------------------------------------------------------------- family file

_FAMILY_LINE = re.compile(r"family\s+(\S+)\s*$")
_TEMPLATE_LINE = re.compile(
    r"(\d+):\s*([WB])\s+((?:[WB](?:\^(?:\d+|[abk]))?)+)\s*->\s*([WB])\s*$")
_ATOM = re.compile(r"([WB])(?:\^(\d+|[abk]))?")


def _parse_atoms(word: str) -> tuple[Atom, ...]:
    atoms: list[Atom] = []
    pos = 0
    for m in _ATOM.finditer(word):
        if m.start() != pos:
            raise TemplateError(f"cannot read context word {word!r}")
        pos = m.end()
        state, e = m.group(1), m.group(2)
        if e is None:
            atoms.append((state, 1))
        elif e.isdigit():
            if int(e) < 1:
                raise TemplateError(f"zero run in {word!r}")
            atoms.append((state, int(e)))
        else:
            atoms.append((state, e))
    if pos != len(word):
        raise TemplateError(f"cannot read context word {word!r}")
    return tuple(atoms)


def parse_templates(text: str) -> tuple[RuleTemplate, ...]:
    """Read a family file: ``family <name>`` headers, numbered rules."""
    templates: list[RuleTemplate] = []
    family: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _FAMILY_LINE.match(line)
        if m:
            family = m.group(1)
            continue
        m = _TEMPLATE_LINE.match(line)
        if m is None:
            raise TemplateError(f"line {lineno}: cannot parse {line!r}")
        if family is None:
            raise TemplateError(f"line {lineno}: rule before any family header")
        templates.append(RuleTemplate(
            family=family,
            number=int(m.group(1)),
            current=m.group(2),
            atoms=_parse_atoms(m.group(3)),
            new=m.group(4),
        ))
    return tuple(templates)


@lru_cache(maxsize=1)
def load_templates() -> tuple[RuleTemplate, ...]:
    text = resources.files("hypca").joinpath("data/families.rules").read_text()
    return parse_templates(text)


def _generate(prefixes: tuple[str, ...], p: int) -> set[Rule]:
    if p < MIN_GENERIC_P:
        raise TemplateError(f"parametric families need p >= {MIN_GENERIC_P}, "
                            f"got p={p}")
    return {t.instantiate(p) for t in load_templates()
            if t.family.startswith(prefixes)}


def generate_track_rules(p: int) -> set[Rule]:
    """Plain-track families: straight and corner cells, both directions,
    plus the two-particle convoy words."""
    return _generate(("track.",), p)


def generate_crossing_rules(p: int) -> set[Rule]:
    """Round-about families: fork B, ring cell C, sensors BF, BC, CE, and
    the two special track words that only occur beside a round-about."""
    return _generate(("cross.",), p)


def generate_fixed_switch_rules(p: int) -> set[Rule]:
    """The five rules of the passive merge cell O."""
    return _generate(("fixed.",), p)


def generate_flipflop_rules(p: int) -> set[Rule]:
    """Flip-flop families: legs B and C, controller D, marks H and K, and
    the fork cell O."""
    return _generate(("flipflop.",), p)


def generate_memory_rules(p: int) -> set[Rule]:
    """Both halves of the memory switch.

    The active half reuses the flip-flop words for B, C, O, H and K; only
    its controller D differs, by watching the signal cell D1.  The passive
    merge cell T reuses the fixed-switch words.  So those families ride
    along and the set stands on its own next to the track rules.
    """
    return (_generate(("memory.",), p)
            | _generate(("flipflop.B", "flipflop.C", "flipflop.H",
                         "flipflop.K", "flipflop.O"), p)
            | _generate(("fixed.",), p))


_CIRCUIT_RULES = {
    "crossing": generate_crossing_rules,
    "fixed": generate_fixed_switch_rules,
    "flipflop": generate_flipflop_rules,
    "memory": generate_memory_rules,
}


def _insert_all(table: RuleTable, rules) -> RuleTable:
    for rule in sorted(rules, key=lambda r: r.prov):
        insert_rule(table, rule)
    return table


def circuit_table(p: int, kind: str) -> RuleTable:
    """A table sufficient to run one circuit kind at this p.

    At p=13 that is always the full shipped rule set; at p >= 17 the
    track families plus the circuit's own families.
    """
    if kind not in _CIRCUIT_RULES:
        raise ValueError(f"unknown circuit kind {kind!r}")
    if p == 13:
        return packaged_p13_table()
    table = RuleTable(p)
    _insert_all(table, generate_track_rules(p))
    _insert_all(table, _CIRCUIT_RULES[kind](p))
    return table


# --------------------------------------------------------------- p=13 data

_NUMBERED = re.compile(r"(.*?)#\s*(\d+)\s*$")


def load_p13_ruleset(data: str) -> RuleTable:
    """Parse the shipped p=13 transcription, keeping the audit numbers.

    Rule lines may end in ``# <n>``; the number becomes the provenance so
    a conflict or a failing trace points back into the numbered listing.
    """
    renumbered: list[str] = []
    provs: list[str] = []
    for raw in data.splitlines():
        m = _NUMBERED.match(raw)
        if m and "->" in m.group(1):
            renumbered.append(m.group(1))
            provs.append(f"rule {m.group(2)}")
        else:
            renumbered.append(raw)
            provs.append("")
    table = parse_rules("\n".join(renumbered))
    if table.p != 13:
        raise ValueError(f"expected a p=13 rule file, got p={table.p}")
    retagged = RuleTable(13)
    by_line = dict(zip(range(1, len(provs) + 1), provs))
    for rule in table:
        line = int(rule.prov.split()[-1]) if rule.prov.startswith("line") else 0
        prov = by_line.get(line) or rule.prov
        insert_rule(retagged, Rule(rule.current, rule.context, rule.new, prov))
    return retagged


@lru_cache(maxsize=1)
def packaged_p13_table() -> RuleTable:
    text = resources.files("hypca").joinpath("data/p13.rules").read_text()
    return load_p13_ruleset(text)
