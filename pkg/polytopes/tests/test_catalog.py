import pytest

from groups.exceptions import ConsistencyError
from groups.fp import parse_word
from polytopes.catalog import (
    CATALOG,
    CatalogEntry,
    _Lattice,
    l2,
    named,
    search_tuples,
    string_group,
    string_rotation,
    torus_36,
    torus_44,
    torus_63,
)
from polytopes.chirality import chirality_analysis
from polytopes.rotation import enantiomorph_word, is_equivalent, is_reflexible, rotation_system

TORUS_PARAMS = [(b, c) for b in range(1, 6) for c in range(0, b + 1)]


def test_string_rotation_relators():
    """Test the standard relators of [p1, ..., p_{n-1}]+"""
    p = string_rotation(3, 4, 3)
    assert p.rank == 4
    assert p.orders == (3, 4, 3)
    assert p.format() == ["s1^3", "s2^4", "s3^3", "s1 s2 s1 s2", "s1 s2 s3 s1 s2 s3", "s2 s3 s2 s3"]
    with pytest.raises(ValueError):
        string_rotation(3, 1)


def test_mirror_relators():
    """Test that regular quotients carry the mirror image of each extra relator"""
    r = parse_word("(s1 s3 s2^-1)^3", 4)
    p = string_rotation(5, 3, 5, extra=[r], regular=True)
    assert p.extra == (r, enantiomorph_word(r))
    assert string_rotation(5, 3, 5, extra=[r]).extra == (r,)


def test_string_group():
    """Test the full string Coxeter presentation"""
    p = string_group(4, 3)
    assert p.kind == "string"
    assert p.format() == ["r0^2", "r1^2", "r2^2", "r0 r1 r0 r1 r0 r1 r0 r1", "r1 r2 r1 r2 r1 r2", "r0 r2 r0 r2"]


@pytest.mark.parametrize("b, c", TORUS_PARAMS)
def test_torus_44(b, c):
    """Test order, chirality and both construction routes of {4,4}_(b,c)"""
    sys = named("torus44", b, c)
    assert sys.order == 4 * (b * b + c * c)
    assert sys.type_vector == (4, 4)
    assert sys.metadata["handedness"] in ("direct", "mirror")
    assert sys.metadata["lattice_size"] == b * b + c * c
    X, agreement = chirality_analysis(sys)
    assert agreement is True
    assert (X.order > 1) == (b * c * (b - c) != 0)


@pytest.mark.parametrize("b, c", TORUS_PARAMS)
def test_torus_36(b, c):
    """Test order, chirality and both construction routes of {3,6}_(b,c)"""
    sys = named("torus36", b, c)
    assert sys.order == 6 * (b * b + b * c + c * c)
    assert sys.type_vector == (3, 6)
    X, agreement = chirality_analysis(sys)
    assert agreement is True
    assert (X.order > 1) == (b * c * (b - c) != 0)


def test_torus_63_is_dual():
    """Test the hexagonal maps"""
    sys = torus_63(2, 1)
    assert sys.order == 42
    assert sys.type_vector == (6, 3)
    assert sys.name == "{6,3}_(2,1)"
    assert not is_reflexible(sys)


@pytest.mark.parametrize("v1, v2, size", [((2, 1), (-1, 2), 5), ((3, 0), (0, 3), 9), ((2, 1), (-1, 3), 7)])
def test_lattice_normal_form(v1, v2, size):
    """Test the quotient of Z^2 by a sublattice"""
    lattice = _Lattice(v1, v2)
    assert lattice.size == size
    assert lattice.reduce(*v1) == 0
    assert lattice.reduce(*v2) == 0
    assert lattice.reduce(v1[0] + v2[0] + 1, v1[1] + v2[1]) == lattice.reduce(1, 0)
    assert sorted(lattice.reduce(x, y) for x, y in lattice.points()) == list(range(size))


def test_torus_parameters():
    """Test invalid lattice parameters"""
    with pytest.raises(ValueError):
        torus_44(0, 0)
    with pytest.raises(ValueError):
        torus_36(-1, 2)


def test_torus_handedness_is_consistent():
    """Test that a torus and its mirror parameters are enantiomorphic"""
    assert not is_equivalent(torus_44(2, 1), torus_44(1, 2))
    assert torus_44(2, 1).order == torus_44(1, 2).order


@pytest.mark.parametrize("p, order", [(5, 60), (7, 168), (11, 660), (13, 1092)])
def test_l2(p, order):
    """Test PSL(2, p) on the projective line"""
    G = l2(p)
    assert G.order == order
    assert G.degree == p + 1


@pytest.mark.parametrize("p", [2, 4, 9])
def test_l2_rejects_non_odd_primes(p):
    """Test that p must be an odd prime"""
    with pytest.raises(ValueError):
        l2(p)


def test_search_l2_7():
    """Test generating pairs of L2(7) of type (3,7)"""
    results = search_tuples(l2(7), (3, 7))
    assert results
    for sys in results:
        assert sys.order == 168
        assert sys.type_vector == (3, 7)
        assert sys.metadata["reflexible"]
        assert is_reflexible(sys)
    keys = [tuple(s.key() for s in sys.sigma) for sys in results]
    assert keys == sorted(keys)


def test_search_l2_11_finds_eleven_cell(eleven_cell):
    """Test that the tuple search recovers the 11-cell"""
    results = search_tuples(l2(11), (3, 5, 3))
    assert any(is_equivalent(sys, eleven_cell) for sys in results)
    assert any(not sys.metadata["intersection_property"] for sys in results)


def test_search_limit_and_empty_result():
    """Test the result cap and a type no tuple can have"""
    assert len(search_tuples(l2(7), (3, 7), limit=1)) == 1
    assert search_tuples(l2(5), (2, 2)) == []


def test_named_entries(s6_system):
    """Test certified named constructions"""
    assert s6_system.order == 720
    assert s6_system.metadata["expected"] == {"order": 720, "type": [3, 4, 4, 3], "reflexible": False}
    cube = named("cube")
    assert cube.name == "cube"
    assert cube.order == 24
    assert named("simplex4").order == 60
    with pytest.raises(ValueError):
        named("hypercube")
    with pytest.raises(ValueError):
        named("torus44", 1)


def test_universal_443_entry():
    """Test that the {4,4}_(3,0) universal entry is certified or flagged"""
    sys = named("univ_443_m3")
    assert sys.type_vector == (4, 4, 3)
    assert sys.order == 720 or sys.metadata.get("flagged")


def test_strict_entry_failure():
    """Test that a failed metadata check raises for strict entries"""
    entry = CatalogEntry(
        "wrong",
        lambda: rotation_system(string_rotation(3, 3)),
        expected=lambda: {"order": 13},
    )
    with pytest.raises(ConsistencyError) as excinfo:
        entry.build()
    assert excinfo.value.diagnostics["order"] == {"expected": 13, "actual": 12}
    lenient = CatalogEntry("wrong", entry.builder, expected=entry.expected, strict=False)
    assert lenient.build().metadata["flagged"]


def test_catalog_names():
    """Test the registry"""
    assert {"torus44", "torus36", "torus63", "s6_rank5", "eleven_cell", "star_535", "univ_443_m3"} <= set(CATALOG)


@pytest.mark.slow
def test_star_535():
    """Test the rank-4 quotient of [5,3,5]+ by a mirror-closed relator pair"""
    sys = named("star_535")
    assert sys.order == 7200
    assert is_reflexible(sys)
