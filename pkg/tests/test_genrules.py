"""The rule generator: family grammar, spacer policy, and the shipped data.

The structural tests here pin down what makes the families work at any p:
black letters never grow, the milestone pattern of a word decides which
kind of cell it can govern, and the whole union stays conflict-free.
"""

from collections import Counter
from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from hypca import circuits, engine
from hypca import rulecore as rc
from hypca.genrules import (
    MIN_GENERIC_P,
    RuleTemplate,
    TemplateError,
    circuit_table,
    generate_crossing_rules,
    generate_fixed_switch_rules,
    generate_flipflop_rules,
    generate_memory_rules,
    generate_track_rules,
    load_templates,
    packaged_p13_table,
    parse_templates,
)

ps = st.integers(min_value=MIN_GENERIC_P, max_value=60)


def one(family, number):
    for t in load_templates():
        if (t.family, t.number) == (family, number):
            return t
    raise LookupError(f"{family} {number}")


def class_key(rule):
    return rule.current, rc.canonical_form(rule.current, rule.context), rule.new


# ---------------------------------------------------------------- grammar

SAMPLE = """\
# toy family file
family demo.one
1: W BW^2BW^k -> B
2: B B^2W^aBW^b -> W   # trailing comment

family demo.two
1: W W^k -> W
"""


def test_parse_templates_reads_headers_numbers_and_atoms():
    ts = parse_templates(SAMPLE)
    assert [(t.family, t.number) for t in ts] == [
        ("demo.one", 1), ("demo.one", 2), ("demo.two", 1)]
    first = ts[0]
    assert first.current == "W" and first.new == "B"
    assert first.atoms == (("B", 1), ("W", 2), ("B", 1), ("W", "k"))
    assert ts[1].symbols == ("a", "b")


@pytest.mark.parametrize("text", [
    "1: W BW^k -> W",                      # rule before any family header
    "family demo\n1: W BW^0 -> W",         # zero-length run
    "family demo\n1: W BXW -> W",          # letter outside the alphabet
    "family demo\nW BW^k -> W",            # missing number
    "family demo\n1: W BW^k => W",         # wrong arrow
])
def test_parse_templates_rejects_malformed_lines(text):
    with pytest.raises(TemplateError):
        parse_templates(text)


# ---------------------------------------------------------- spacer policy

def tpl(word, current="W", new="W"):
    return parse_templates(f"family demo.x\n1: {current} {word} -> {new}")[0]


def test_one_symbol_takes_all_the_slack():
    t = tpl("BW^2BW^k")
    assert t.spacer_values(17) == {"k": 13}
    assert t.spacer_values(19) == {"k": 15}
    assert t.context(17) == "B" + "WW" + "B" + "W" * 13


def test_pair_keeps_the_short_run_at_one_cell():
    t = tpl("BW^aBW^b")
    assert t.spacer_values(17) == {"a": 1, "b": 14}
    assert t.spacer_values(23) == {"a": 1, "b": 20}


def test_fixed_word_serves_exactly_its_own_length():
    t = tpl("BW^16")
    assert t.spacer_values(17) == {}
    assert len(t.context(17)) == 17
    with pytest.raises(TemplateError):
        t.context(19)


def test_crowded_word_leaves_no_room():
    t = tpl("B^15WW^aW^b")  # 16 fixed letters plus two runs
    with pytest.raises(TemplateError):
        t.spacer_values(17)
    assert t.spacer_values(19) == {"a": 1, "b": 2}


def test_mixed_run_names_are_refused():
    t = tpl("W^aBW^k")
    with pytest.raises(TemplateError):
        t.spacer_values(17)


def test_instantiate_tags_provenance_with_family_and_number():
    r = tpl("BW^2BW^k", new="B").instantiate(19)
    assert isinstance(r, rc.Rule)
    assert len(r.context) == 19
    assert r.prov == "demo.x 1"


# ------------------------------------------------------- shipped families

FAMILY_SIZES = {
    "track.straight1": 7, "track.straight2": 7,
    "track.corner1": 4, "track.corner2": 4,
    "track.convoy1": 4, "track.convoy2": 4,
    "cross.B": 9, "cross.C": 8, "cross.BF": 7, "cross.BC": 5,
    "cross.CE": 4, "cross.track": 2,
    "fixed.O": 5,
    "flipflop.B": 7, "flipflop.C": 7, "flipflop.D": 6,
    "flipflop.H": 5, "flipflop.K": 5, "flipflop.O": 5,
    "memory.D": 10, "memory.BC": 2,
    "memory.X": 10, "memory.Y": 10, "memory.Z": 10,
    "memory.I": 6, "memory.J": 6, "memory.Z1": 4, "memory.D1": 4,
}


def test_shipped_family_census():
    ts = load_templates()
    assert len(ts) == 167
    assert Counter(t.family for t in ts) == FAMILY_SIZES
    keys = [(t.family, t.number) for t in ts]
    assert len(set(keys)) == len(keys)
    for family, size in FAMILY_SIZES.items():
        numbers = sorted(n for f, n in keys if f == family)
        assert numbers == list(range(1, size + 1))


@settings(max_examples=25)
@given(ps)
def test_every_template_fills_any_large_p(p):
    for t in load_templates():
        word = t.context(p)
        assert len(word) == p
        assert word.count("B") == t.context(MIN_GENERIC_P).count("B")


def test_growth_from_p17_to_p19_is_two_white_cells():
    for t in load_templates():
        v17, v19 = t.spacer_values(17), t.spacer_values(19)
        if not v17:
            continue
        if set(v17) == {"a", "b"}:
            assert v17["a"] == v19["a"] == 1
            assert v19["b"] == v17["b"] + 2
        else:
            (name,) = v17
            assert v19[name] == v17[name] + 2


@pytest.mark.parametrize("p", [17, 19, 23])
def test_whole_union_is_conflict_free(p):
    table = rc.RuleTable(p)
    for t in load_templates():
        rc.insert_rule(table, t.instantiate(p))
    assert len(table) == 163


def test_the_four_collapsed_pairs_agree_on_outcome():
    # 167 instances, 163 classes: these rotations coincide, harmlessly.
    pairs = [
        (("track.straight1", 4), ("track.straight2", 4)),
        (("track.corner1", 4), ("track.corner2", 4)),
        (("track.convoy1", 2), ("track.convoy1", 4)),
        (("track.convoy2", 2), ("track.convoy2", 4)),
    ]
    for left, right in pairs:
        a = one(*left).instantiate(17)
        b = one(*right).instantiate(17)
        assert class_key(a) == class_key(b)
    keys = {class_key(t.instantiate(17)) for t in load_templates()}
    assert len(keys) == 163


# ------------------------------------------------------------ word shapes

def black_runs(word):
    """Lengths of the maximal cyclic runs of B, sorted."""
    if "B" not in word:
        return []
    if "W" not in word:
        return [len(word)]
    cut = word.index("W")
    rot = word[cut:] + word[:cut]
    return sorted(len(r) for r in rot.split("W") if r)


def shape_class(family):
    if family.startswith("track.") or family == "cross.track":
        return "track"
    if family in ("fixed.O", "flipflop.O"):
        return "center"
    return "anchored"


def test_milestone_runs_sort_the_families_into_three_shapes():
    # Track words carry only short milestone runs; the two switch-center
    # families carry a pair of length-3 runs; every other family anchors
    # its word with a run of at least 4 so the cell knows its own role.
    doubly_anchored = []
    for t in load_templates():
        runs = black_runs(t.context(17))
        cls = shape_class(t.family)
        if cls == "track":
            assert max(runs) <= 3, (t.family, t.number, runs)
        elif cls == "center":
            assert runs.count(3) == 2 and max(runs) <= 3, (t.family, runs)
        else:
            long = [r for r in runs if r >= 4]
            assert long, (t.family, t.number, runs)
            if len(long) > 1:
                doubly_anchored.append((t.family, t.number))
    # the convoy-refusal word at the fork reads two anchors at once
    assert doubly_anchored == [("cross.B", 9)]


def test_rule_one_of_each_family_conserves_its_state():
    for family in FAMILY_SIZES:
        t = one(family, 1)
        if family == "cross.track":
            assert t.new != t.current
        else:
            assert t.new == t.current, family


def test_role_words_spell_out_the_cell_kind():
    words = {f: one(f, 1).context(17)[:9]
             for f in ("cross.B", "cross.C", "cross.BC")}
    assert words["cross.B"] == "BBBBWWBWW"
    assert words["cross.C"] == "BBBBWWWBW"
    assert words["cross.BC"] == "BBBBWWBBW"


def test_idle_track_words_come_out_as_written():
    table = circuit_table(17, "crossing")
    straight = rc.expand("BWWBWWWBW^9")
    r = table.get(rc.W, straight)
    assert r is not None and r.new == rc.W and r.prov == "track.straight1 1"
    corner = rc.expand("BBWWWBW^8BWW")
    r = table.get(rc.W, corner)
    assert r is not None and r.new == rc.W and r.prov == "track.corner1 1"


# --------------------------------------------------------- circuit tables

KINDS = ("crossing", "fixed", "flipflop", "memory")


@pytest.mark.parametrize("kind", KINDS)
def test_circuit_tables_have_p_independent_size(kind):
    t17 = circuit_table(17, kind)
    t19 = circuit_table(19, kind)
    assert t17.p == 17 and t19.p == 19
    assert len(t17) == len(t19)


def test_memory_kind_rides_on_the_flipflop_and_fixed_families():
    provs = {r.prov for r in generate_memory_rules(17)}
    assert "flipflop.B 1" in provs and "fixed.O 1" in provs
    assert not any(p.startswith(("flipflop.D", "cross.")) for p in provs)


def test_p13_kind_requests_get_the_shipped_listing():
    table = circuit_table(13, "flipflop")
    assert table.p == 13 and len(table) == 159


def test_small_p_is_refused():
    with pytest.raises(TemplateError):
        generate_track_rules(13)
    with pytest.raises(TemplateError):
        circuit_table(15, "crossing")


def test_unknown_circuit_kind_is_refused():
    with pytest.raises(ValueError):
        circuit_table(17, "bogus")


@pytest.mark.parametrize("gen", [
    generate_track_rules, generate_crossing_rules,
    generate_fixed_switch_rules, generate_flipflop_rules,
    generate_memory_rules,
])
def test_each_generator_is_internally_conflict_free(gen):
    table = rc.RuleTable(19)
    for rule in gen(19):
        rc.insert_rule(table, rule)
    assert len(table) > 0


# ------------------------------------------------------ shipped p=13 data

def test_p13_table_keeps_the_audit_numbers():
    table = packaged_p13_table()
    assert table.p == 13
    assert len(table) == 159
    kinds = Counter(r.prov.split()[0] for r in table)
    assert kinds == {"rule": 146, "line": 13}
    numbers = sorted(int(r.prov.split()[1]) for r in table
                     if r.prov.startswith("rule"))
    assert numbers[0] == 2 and numbers[-1] == 189


def test_p13_table_matches_a_plain_parse_of_the_file():
    text = resources.files("hypca").joinpath("data/p13.rules").read_text()
    plain = rc.parse_rules(text)
    assert {class_key(r) for r in plain} == \
        {class_key(r) for r in packaged_p13_table()}


# -------------------------------------------------- a missing rule is loud

def test_dropping_the_idle_word_stops_the_very_first_step():
    p = 17
    doomed = class_key(one("track.straight1", 1).instantiate(p))
    table = rc.RuleTable(p)
    for t in load_templates():
        if not t.family.startswith(("track.", "cross.")):
            continue
        r = t.instantiate(p)
        if class_key(r) == doomed:
            continue
        rc.insert_rule(table, r)
    region = engine.make_region(circuits.build_track(p, 6).cells)
    with pytest.raises(rc.MissingRule):
        engine.run(region, table, steps=3, watch=["t1"])
