"""Rules, rotation canonicalisation, and rule tables.

A rule says: a cell in state ``current`` whose p neighbours read
``context`` (a word over W/B, neighbour 1 first, then counterclockwise)
goes to state ``new``.  The automaton is rotation invariant, so two rules
whose contexts are circular permutations of each other are the same rule.
Tables store one representative per class: the lexicographically least
rotation of the context, with B sorting before W.

Rules files are plain text:

    p=13
    # milestones never change
    B W^13 -> B
    W BBWBWBW^7 -> W    # straight track cell, idle

The context uses atoms W, B, W^k, B^k, concatenated without spaces.
Any neighbourhood with at most two black cells leaves the cell state
unchanged by default; tables only need rules beyond that region.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

W = "W"
B = "B"

DEFAULT_MAX_BLACKS = 2


class LengthError(ValueError):
    """Context length does not match the table's p."""


class Conflict(ValueError):
    """Two rules share a rotation class but disagree on the new state."""


class MissingRule(KeyError):
    """No stored rule and no default applies to the looked-up context."""

    def __str__(self):
        return self.args[0] if self.args else ""


@dataclass(frozen=True)
class Rule:
    current: str
    context: str
    new: str
    prov: str = ""

    @property
    def p(self) -> int:
        return len(self.context)


def _check_states(word: str) -> None:
    bad = set(word) - {W, B}
    if bad:
        raise SyntaxError(f"invalid state letters {sorted(bad)} in {word!r}")


def _least_rotation(s: str) -> int:
    """Booth's algorithm: index of the least rotation of s."""
    n = len(s)
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j % n]
        i = f[j - k - 1]
        while i != -1 and sj != s[(k + i + 1) % n]:
            if sj < s[(k + i + 1) % n]:
                k = j - i - 1
            i = f[i]
        if sj != s[(k + i + 1) % n]:
            if sj < s[k % n]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def canonical_form(current: str, context: str) -> str:
    """Least rotation of the context (the class representative).

    The current state takes no part in the rotation; it is passed so the
    signature reads like the rule itself and to keep the call sites honest
    about what identifies a rule class: the (current, canonical) pair.
    """
    _check_states(current)
    _check_states(context)
    k = _least_rotation(context)
    return context[k:] + context[:k]


def default_next(current: str, context: str):
    """State given by the quiescence default, or None outside its region.

    Any context with at most two black neighbours conserves the state.
    """
    if context.count(B) <= DEFAULT_MAX_BLACKS:
        return current
    return None


class RuleTable:
    """Rotation classes -> stored rules, for one fixed p."""

    def __init__(self, p: int):
        self.p = p
        self._rules: dict[tuple[str, str], Rule] = {}

    def __len__(self) -> int:
        return len(self._rules)

    def __iter__(self):
        return iter(self._rules.values())

    def __contains__(self, key) -> bool:
        current, context = key
        return (current, canonical_form(current, context)) in self._rules

    def get(self, current: str, context: str):
        return self._rules.get((current, canonical_form(current, context)))


def insert_rule(table: RuleTable, rule: Rule) -> Rule:
    """Add a rule to the table; returns the stored canonical rule.

    Re-inserting a rotation of an existing rule with the same outcome is a
    no-op.  A differing outcome raises Conflict.
    """
    if len(rule.context) != table.p:
        raise LengthError(
            f"context length {len(rule.context)} != p={table.p}"
            f" in rule {format_rule(rule)} ({rule.prov or 'no provenance'})"
        )
    canon = canonical_form(rule.current, rule.context)
    key = (rule.current, canon)
    stored = table._rules.get(key)
    if stored is None:
        stored = replace(rule, context=canon)
        table._rules[key] = stored
        return stored
    if stored.new != rule.new:
        raise Conflict(
            f"CONFLICT {rule.current} {condense(canon)} : "
            f"{stored.new} vs {rule.new} "
            f"({stored.prov or '?'}, {rule.prov or '?'})"
        )
    return stored


def lookup(table: RuleTable, current: str, context: str) -> str:
    """New state for a cell, from the table or the quiescence default."""
    if len(context) != table.p:
        raise LengthError(f"context length {len(context)} != p={table.p}")
    stored = table.get(current, context)
    if stored is not None:
        return stored.new
    dflt = default_next(current, context)
    if dflt is not None:
        return dflt
    raise MissingRule(f"no rule for {current} {condense(context)}")


# ------------------------------------------------------------------ text form

_ATOM = re.compile(r"([WB])(?:\^(\d+))?")


def expand(word: str) -> str:
    """'BW^3B' -> 'BWWWB'."""
    out = []
    pos = 0
    for m in _ATOM.finditer(word):
        if m.start() != pos:
            raise SyntaxError(f"bad context word {word!r} at offset {pos}")
        letter, exp = m.group(1), m.group(2)
        n = int(exp) if exp else 1
        if n < 1:
            raise SyntaxError(f"bad exponent in {word!r}")
        out.append(letter * n)
        pos = m.end()
    if pos != len(word):
        raise SyntaxError(f"bad context word {word!r} at offset {pos}")
    return "".join(out)


def condense(word: str) -> str:
    """'BWWWB' -> 'BW^3B'; single letters stay bare."""
    _check_states(word)
    out = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        n = j - i
        out.append(word[i] if n == 1 else f"{word[i]}^{n}")
        i = j
    return "".join(out)


def format_rule(rule: Rule) -> str:
    return f"{rule.current} {condense(rule.context)} -> {rule.new}"


_RULE_LINE = re.compile(
    r"^\s*([WB])\s+([WB^\d]+)\s*->\s*([WB])\s*$"
)


def parse_rules(text: str) -> RuleTable:
    """Read a rules file.  See the module docstring for the format."""
    table = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if table is None:
            m = re.fullmatch(r"p\s*=\s*(\d+)", line)
            if not m:
                raise SyntaxError(f"line {lineno}: expected 'p=<int>' header")
            table = RuleTable(int(m.group(1)))
            continue
        m = _RULE_LINE.match(line)
        if not m:
            raise SyntaxError(f"line {lineno}: cannot parse rule {line!r}")
        current, word, new = m.groups()
        context = expand(word)
        insert_rule(
            table, Rule(current, context, new, prov=f"line {lineno}")
        )
    if table is None:
        raise SyntaxError("empty rules file: missing 'p=<int>' header")
    return table


def format_table(table: RuleTable, header_comment: str = "") -> str:
    """Deterministic text dump: canonical rules, sorted."""
    lines = [f"p={table.p}"]
    if header_comment:
        lines[1:1] = [f"# {line}" for line in header_comment.splitlines()]
    for rule in sorted(table, key=lambda r: (r.current, r.context)):
        entry = format_rule(rule)
        if rule.prov:
            entry += f"  # {rule.prov}"
        lines.append(entry)
    return "\n".join(lines) + "\n"
