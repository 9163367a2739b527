import pytest

from groups.exceptions import PresentationFormatError
from groups.fp import STRING
from polytopes.catalog import CATALOG
from polytopes.parsers import format_presentation, load_presentation, parse_presentation

from .conftest import PRESENTATIONS


def test_orders_expand_to_standard_relators():
    """Test that an orders line emits the standard relators"""
    p = parse_presentation("orders 3 5\n")
    assert p.rank == 3
    assert p.orders == (3, 5)
    assert len(p.all_relators) == 3


def test_explicit_relators_and_comments():
    """Test a presentation written out in full"""
    p = load_presentation(PRESENTATIONS / "tetrahedron_full.pres")
    assert p.rank == 3
    assert p.orders is None
    assert p.format() == ["s1^3", "s2^3", "s1 s2 s1 s2"]


def test_extra_relators():
    """Test relators added to a Schlaefli type"""
    p = load_presentation(PRESENTATIONS / "s6_rank5.pres")
    assert p.rank == 5
    assert p.format()[-1] == "s2^-1 s3 s2^-1 s3 s2 s3^-1"


def test_string_group_directive():
    """Test involution letters under 'group string'"""
    p = load_presentation(PRESENTATIONS / "eleven_cell.pres")
    assert p.kind == STRING
    assert p.rank == 4
    assert len(p.extra) == 2


def test_format_round_trip():
    """Test that formatted presentations parse back to the same relators"""
    p = load_presentation(PRESENTATIONS / "torus44_2_1.pres")
    again = parse_presentation(format_presentation(p))
    assert again.all_relators == p.all_relators


@pytest.mark.parametrize(
    "text, line",
    [
        ("orders 3 3\nrelator s1 s2^x\n", 2),
        ("orders 3 3\ngenerators s1 s2\n", 2),
        ("rank one\n", 1),
        ("rank 4\norders 3 3\n", None),
        ("relator s1\n", None),
        ("orders 3 1\n", 1),
        ("group dihedral\n", 1),
        ("orders 3 3\nrelator\n", 2),
    ],
)
def test_format_errors(text, line):
    """Test that malformed files raise with the offending line"""
    with pytest.raises(PresentationFormatError) as excinfo:
        parse_presentation(text)
    assert excinfo.value.line == line


def test_word_error_keeps_position():
    """Test that word syntax errors report the column"""
    with pytest.raises(PresentationFormatError) as excinfo:
        load_presentation(PRESENTATIONS / "malformed.pres")
    assert "position 6" in str(excinfo.value)


def test_missing_file(tmp_path):
    """Test an unreadable path"""
    with pytest.raises(PresentationFormatError):
        load_presentation(tmp_path / "missing.pres")


@pytest.mark.parametrize("name", sorted(name for name, entry in CATALOG.items() if entry.presentation is not None))
def test_catalog_presentations_round_trip(name):
    """Test that every catalog presentation survives formatting and parsing"""
    entry = CATALOG[name]
    p = entry.presentation(*([2, 1] if entry.params else []))
    again = parse_presentation(format_presentation(p))
    assert again.kind == p.kind
    assert again.rank == p.rank
    assert again.all_relators == p.all_relators
