"""Dimension-measure catalogs: parsing, axiom checks, normalization."""

from __future__ import annotations

from fractions import Fraction

import pytest

from amalgam.msmeasure import (
    CatalogParseError,
    HValue,
    check_axiom_family,
    check_axiom_finite,
    check_axiom_fubini,
    check_product_pushforward,
    counting_catalog,
    nu_normalize,
    parse_catalog,
    run_all_checks,
)

BASE_CATALOG = """\
# six points fibred over three, two per fibre
set X 0 6 explicit 6
set Y 0 3 explicit 3
set A 1 2
set B 1 2
map f from X to Y
fibre f over Y value 0 2 count 3
family G = A,B
"""


def all_items(catalog):
    return [item for report in run_all_checks(catalog) for item in report.items]


def failing_names(catalog):
    return [item.name for item in all_items(catalog) if not item.passed]


# ---------------------------------------------------------------------------
# parsing


def test_parse_base_catalog():
    catalog = parse_catalog(BASE_CATALOG)
    assert set(catalog.sets) == {"X", "Y", "A", "B"}
    assert catalog.sets["X"].explicit == 6
    assert catalog.sets["A"].explicit is None
    assert catalog.h("Y") == HValue(0, Fraction(3))
    assert catalog.maps["f"].source == "X"
    assert catalog.maps["f"].fibres[0].count == 3
    assert catalog.families["G"].pieces == (("A", "B"),)


def test_parse_family_lines_accumulate_pieces():
    catalog = parse_catalog("set A 1 2\nset B 1 3\nfamily G = A\nfamily G = B\n")
    assert catalog.families["G"].pieces == (("A",), ("B",))
    report = check_axiom_family(catalog)
    assert [item.name for item in report.items] == ["family:G[0]", "family:G[1]"]
    assert report.all_pass  # each piece is constant on its own


def test_parse_product_line():
    catalog = parse_catalog(
        "set A 0 2 explicit 2\nset B 0 3 explicit 3\nset P 0 6 explicit 6\n"
        "product P = A x B\n"
    )
    assert catalog.products["P"].factors == ("A", "B")


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("frobnicate x", 1, "unknown directive"),
        ("set X 0", 1, "expected: set"),
        ("set X 0 6\nset X 0 6", 2, "duplicate set"),
        ("set X 0 1/0", 1, "bad rational"),
        ("set X a 1", 1, "bad dimension"),
        ("set X 0 -1", 1, "measure must be positive"),
        ("set X -1 1", 1, "dimension must be non-negative"),
        ("set X 0 6 sized 6", 1, "expected 'explicit'"),
        ("set S 1 1\nsubset D for S", 2, "expected: subset"),
        ("set X 0 1\nmap f of X to X", 2, "expected: map"),
        ("set X 0 1\nmap f from X to X\nfibre f on X value 0 1 count 1", 3, "expected: fibre"),
        ("set X 0 1\nfibre g over X value 0 1 count 1", 2, "unknown map"),
        ("family G =", 1, "empty family piece"),
        ("set A 0 1\nproduct P = A", 2, "expected: product"),
        ("set A 0 1\nset B 0 1\nset P 0 1\nproduct P = A y B", 4, "expected: product"),
        ("subset D of S", 1, "undeclared set"),
        ("set X 0 1\nmap f from X to Yonder", 2, "undeclared set"),
        ("set A 0 1\nfamily G = A,Ghost", 2, "undeclared set"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(CatalogParseError) as err:
        parse_catalog(text)
    assert err.value.line == line
    assert fragment in str(err.value)
    assert f"line {line}:" in str(err.value)


def test_hvalue_str():
    assert str(HValue(1, Fraction(2, 3))) == "(1, 2/3)"


# ---------------------------------------------------------------------------
# the axioms on the base catalog


def test_base_catalog_passes_every_check():
    catalog = parse_catalog(BASE_CATALOG)
    reports = run_all_checks(catalog)
    assert [r.title for r in reports] == [
        "axiom_finite",
        "axiom_family",
        "axiom_fubini:f",
        "product_pushforward",
    ]
    assert all(r.all_pass for r in reports)
    names = [item.name for item in all_items(catalog)]
    assert "fubini:f:count:Y" in names
    assert "fubini:f:formula" in names
    assert "fubini:f:cardinality" in names  # dim-0 fibres over an explicit source


def test_report_text_shape():
    catalog = parse_catalog(BASE_CATALOG)
    report = check_axiom_finite(catalog)
    lines = report.text_lines()
    assert lines[0] == "[axiom_finite]"
    assert all(line.startswith(("PASS ", "FAIL ")) for line in lines[1:])
    data = report.to_json()
    assert data["title"] == "axiom_finite" and data["pass"] is True


def test_fubini_with_positive_fibre_dimension():
    catalog = parse_catalog(
        "set X 2 2\nset Y 1 2\nmap g from X to Y\nfibre g over Y value 1 1 count 2\n"
    )
    report = check_axiom_fubini(catalog, "g")
    assert report.all_pass  # combined (1+1, 1*2) matches the declared (2, 2)


def test_fubini_two_piece_maximum():
    text = (
        "set X 2 {mu}\nset Y 1 4\nset Y1 1 3\nset Y2 1 1\n"
        "map g from X to Y\n"
        "fibre g over Y1 value 1 1 count 3\n"
        "fibre g over Y2 value 0 5 count 1\n"
    )
    good = check_axiom_fubini(parse_catalog(text.format(mu=3)), "g")
    assert good.all_pass  # c = max(2, 1) = 2, only the first class contributes
    bad = check_axiom_fubini(parse_catalog(text.format(mu=8)), "g")
    assert [i.name for i in bad.items if not i.passed] == ["fubini:g:formula"]


def test_fubini_bijection_forces_equal_h():
    text = "set X 1 {mu}\nset Y 1 5\nmap b from X to Y\nfibre b over Y value 0 1 count 5\n"
    assert check_axiom_fubini(parse_catalog(text.format(mu=5)), "b").all_pass
    assert not check_axiom_fubini(parse_catalog(text.format(mu=4)), "b").all_pass


def test_fubini_errors():
    catalog = parse_catalog(BASE_CATALOG)
    with pytest.raises(ValueError, match="unknown map"):
        check_axiom_fubini(catalog, "ghost")
    bare = parse_catalog("set X 0 1\nset Y 0 1\nmap f from X to Y\n")
    with pytest.raises(ValueError, match="no declared fibre classes"):
        check_axiom_fubini(bare, "f")


# ---------------------------------------------------------------------------
# doctored catalogs: each must fail exactly its targeted check


def test_doctored_finite_value():
    catalog = parse_catalog(BASE_CATALOG + "set Z 0 4 explicit 5\n")
    assert failing_names(catalog) == ["finite:Z"]


def test_doctored_family_value():
    doctored = BASE_CATALOG.replace("set B 1 2", "set B 1 3")
    catalog = parse_catalog(doctored)
    assert failing_names(catalog) == ["family:G[0]"]


def test_doctored_fubini_sum():
    doctored = BASE_CATALOG.replace("set X 0 6 explicit 6", "set X 0 5")
    catalog = parse_catalog(doctored)
    assert failing_names(catalog) == ["fubini:f:formula"]


# ---------------------------------------------------------------------------
# normalized measure


def test_nu_normalize_cases():
    catalog = parse_catalog(
        "set S 1 4\nset D 1 1\nset E0 0 3\nset U 1 2\n"
        "subset D of S\nsubset E0 of S\n"
    )
    assert nu_normalize(catalog, "S", "D") == Fraction(1, 4)
    assert nu_normalize(catalog, "S", "E0") == 0  # strictly smaller dimension
    assert nu_normalize(catalog, "S", "S") == 1
    with pytest.raises(ValueError, match="not declared a subset"):
        nu_normalize(catalog, "S", "U")
    with pytest.raises(ValueError, match="unknown catalog set"):
        nu_normalize(catalog, "S", "Ghost")


def test_nu_additive_over_full_dimension_partition():
    catalog = parse_catalog(
        "set S 1 6\nset P1 1 2\nset P2 1 3\nset P3 1 1\n"
        "subset P1 of S\nsubset P2 of S\nsubset P3 of S\n"
    )
    total = sum(nu_normalize(catalog, "S", p) for p in ("P1", "P2", "P3"))
    assert total == 1


# ---------------------------------------------------------------------------
# products


def test_product_pushforward_exact():
    catalog = counting_catalog(
        {"Z7": 7, "E": 3},
        subsets=[("E", "Z7")],
        products=[("P", "Z7", "Z7")],
    )
    reports = run_all_checks(catalog)
    assert all(r.all_pass for r in reports)
    push = check_product_pushforward(catalog)
    row = next(i for i in push.items if i.name == "product:P:pushforward:E")
    assert "3/7" in row.detail
    assert nu_normalize(catalog, "Z7", "E") == Fraction(3, 7)
    assert catalog.h("P") == HValue(0, Fraction(49))
    assert "pi_P_Z7" in catalog.maps


def test_doctored_product_measure():
    catalog = parse_catalog(
        "set A1 0 2 explicit 2\nset A2 0 3 explicit 3\n"
        "set P 0 7 explicit 7\nset D 0 1 explicit 1\n"
        "subset D of A1\nproduct P = A1 x A2\n"
    )
    failing = failing_names(catalog)
    assert failing == ["product:P:mu", "product:P:pushforward:D"]


def test_counting_catalog_validation():
    with pytest.raises(ValueError, match="positive cardinality"):
        counting_catalog({"X": 0})
    with pytest.raises(ValueError, match="unknown set"):
        counting_catalog({"X": 2}, subsets=[("X", "Y")])
    with pytest.raises(ValueError, match="unknown factor"):
        counting_catalog({"X": 2}, products=[("P", "X", "Y")])
