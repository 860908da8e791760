from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import corpus_text, random_doc, restyle
from gripcheck.catalog import builtin_catalog, catalog_text
from gripcheck.dsl import SpecSyntaxError, parse_spec, print_spec
from gripcheck.model import Kind, Method
from gripcheck.units import Quantity
from oracles import CATALOG_IDS, CATALOG_LITERALS, TABLE_METHODS

DATA = Path(__file__).parent / "data"

BASE = """req A
  category safety
  kind threshold
  signal grip_force max 2 N
  method functional-test
end
"""


def errors_of(text):
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec(text)
    return info.value.errors


def test_minimal_document():
    doc = parse_spec(BASE)
    r = doc.get("A")
    assert r.kind is Kind.THRESHOLD
    assert r.params.bounds[0].hi == Quantity.of(2, "N")
    assert r.methods[0].method is Method.FUNCTIONAL_TEST


def test_end_is_optional_and_comments_ignored():
    text = "# leading\n" + BASE.replace("end\n", "") + "req B  # trailing\n" + BASE.splitlines(True)[1]
    text += "  kind manual\n  method observation\n"
    assert parse_spec(text).ids() == ["A", "B"]


def test_header_directives():
    doc = parse_spec("#@ name = demo\n#@ owner = x = y\n" + BASE)
    assert doc.name == "demo"
    assert doc.metadata == (("owner", "x = y"),)


def test_minutes_after_for():
    text = BASE.replace("kind threshold", "kind hold-duration").replace(
        "signal grip_force max 2 N", "for 1 min\n  fraction 95 %")
    assert parse_spec(text).get("A").params.duration.value == 60.0


@pytest.mark.parametrize("text,line,fragment", [
    (BASE.replace("  method functional-test\n", ""), 1, "missing a method"),
    (BASE.replace("2 N", "2 furlong"), 4, "unknown unit 'furlong'"),
    (BASE.replace("2 N", "2"), 5, "missing unit after 2"),
    (BASE.replace("grip_force max 2 N", "pressure in [4 psi, 3 psi]"), 4, "empty interval"),
    (BASE.replace("kind threshold", "kind bogus"), 3, "unknown kind"),
    (BASE + BASE, 1, "duplicate id A"),
    ("", 1, "empty document"),
])
def test_errors_carry_spans(text, line, fragment):
    errs = errors_of(text)
    assert any(fragment in str(e) and e.span.line == line for e in errs), [str(e) for e in errs]


def test_non_utf8_is_a_syntax_error():
    (err,) = errors_of(b"req \xff\xfe")
    assert "not UTF-8" in err.message


def test_all_errors_are_reported():
    text = BASE.replace("2 N", "2 furlong") + BASE.replace("req A", "req B").replace("kind threshold", "kind x")
    assert len(errors_of(text)) >= 2


def test_catalog_contents():
    doc = parse_spec(catalog_text())
    assert doc == builtin_catalog()
    assert doc.ids() == CATALOG_IDS
    blocks = {b.split("\n", 1)[0][4:]: b for b in catalog_text().split("\n\n") if b.startswith("req ")}
    for rid, literals in CATALOG_LITERALS.items():
        for lit in literals:
            assert lit in blocks[rid], (rid, lit)


def test_catalog_methods_follow_the_table():
    doc = builtin_catalog()
    for rid, rows in TABLE_METHODS.items():
        got = [(m.method.value, m.detail) for m in doc.get(rid).methods if m.method is not Method.BY_DESIGN]
        assert got == rows, rid
    assert doc.get("RQ4.1").by_design


def test_checked_in_catalog_is_current():
    assert (DATA / "catalog.gspec").read_text("utf-8") == catalog_text()


@pytest.mark.parametrize("path", sorted((DATA / "corpus" / "gspec").glob("*.gspec")), ids=lambda p: p.name)
def test_corpus_round_trip(path):
    doc = parse_spec(path.read_text("utf-8"))
    assert parse_spec(print_spec(doc)) == doc


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_print_parse_round_trip(seed):
    doc = random_doc(seed)
    text = print_spec(doc)
    assert parse_spec(text) == doc
    assert print_spec(parse_spec(text)) == text


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_layout_does_not_change_meaning(seed):
    doc = random_doc(seed)
    assert parse_spec(restyle(print_spec(doc), seed)) == doc


def test_corpus_generator_is_stable():
    assert corpus_text(3) == corpus_text(3)


@pytest.mark.parametrize("i", range(49))
def test_checked_in_corpus_is_current(i):
    assert (DATA / "corpus" / "gspec" / f"doc_{i:02d}.gspec").read_text("utf-8") == corpus_text(i)
