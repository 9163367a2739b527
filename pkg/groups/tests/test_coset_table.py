import pytest

from groups.exceptions import CosetLimitError, WordSyntaxError
from groups.fp import STRING, Presentation, Word, coset_enumerate, evaluate, parse_word, perm_rep
from groups.perm import PermGroup, Permutation


def rotation_presentation(p, q, *extra):
    """[p,q]+ with optional extra relator texts."""
    words = [f"s1^{p}", f"s2^{q}", "(s1 s2)^2", *extra]
    return Presentation(3, tuple(parse_word(w, 3) for w in words), orders=(p, q))


@pytest.fixture
def icosahedral():
    return rotation_presentation(3, 5)


def test_icosahedral_rotation_group(icosahedral):
    """Test that [3,5]+ has exactly 60 cosets of the trivial subgroup"""
    table = coset_enumerate(icosahedral)
    assert table.is_complete()
    assert table.index == 60
    assert table.scans_closed()
    assert table.stats["index"] == 60
    assert table.stats["defined"] >= 60


def test_table_is_standardized(icosahedral):
    """Test that cosets are numbered in order of first appearance"""
    table = coset_enumerate(icosahedral)
    seen = [0]
    for row in table.rows:
        for b in row:
            if b not in seen:
                seen.append(b)
    assert seen == list(range(table.index))


def test_subgroup_index(icosahedral):
    """Test indices of cyclic subgroups of A5"""
    assert coset_enumerate(icosahedral, [parse_word("s1", 3)]).index == 20
    assert coset_enumerate(icosahedral, [parse_word("s2", 3)]).index == 12


def test_collapse_to_trivial_group():
    """Test coincidence processing when a relator kills everything"""
    table = coset_enumerate(rotation_presentation(3, 5, "s1 s2"))
    assert table.index == 1


@pytest.mark.parametrize("p, q, order", [(3, 3, 12), (3, 4, 24), (4, 3, 24), (5, 3, 60), (2, 2, 4)])
def test_platonic_orders(p, q, order):
    """Test the orders of small rotation groups"""
    assert coset_enumerate(rotation_presentation(p, q)).index == order


def test_perm_rep(icosahedral):
    """Test the regular permutation action of the enumerated group"""
    table = coset_enumerate(icosahedral)
    perms = perm_rep(table)
    assert len(perms) == 2
    assert [g.order() for g in perms] == [3, 5]
    assert PermGroup(perms).order == 60
    for w in icosahedral.all_relators:
        assert evaluate(w, perms).is_identity()


def test_string_group():
    """Test enumeration over involutory generators"""
    words = ["r0^2", "r1^2", "r2^2", "(r0 r1)^3", "(r1 r2)^3", "(r0 r2)^2"]
    p = Presentation(3, tuple(parse_word(w, 3, STRING) for w in words), STRING)
    table = coset_enumerate(p)
    assert table.index == 24
    perms = perm_rep(table)
    assert all(g.order() == 2 for g in perms)


def test_coset_limit(icosahedral):
    """Test that a small cap raises with statistics"""
    with pytest.raises(CosetLimitError) as excinfo:
        coset_enumerate(icosahedral, max_cosets=10)
    stats = excinfo.value.stats
    assert stats["cap"] == 10
    assert stats["defined"] >= 10
    assert stats["lookaheads"] >= 1


def test_invalid_cap(icosahedral):
    """Test that a non-positive cap is refused"""
    with pytest.raises(ValueError):
        coset_enumerate(icosahedral, max_cosets=0)


def test_evaluate():
    """Test left-to-right evaluation of words"""
    a = Permutation.from_cycles([(0, 1)], 3)
    b = Permutation.from_cycles([(1, 2)], 3)
    assert evaluate(Word(((1, 1), (2, 1))), [a, b]) == a * b
    assert evaluate(Word(((1, -1),)), [a, b]) == a
    assert evaluate(Word(), [a, b]).is_identity()
    with pytest.raises(WordSyntaxError):
        evaluate(Word.generator(3), [a, b])


def petrie_presentation(r):
    """[3,7] with Petrie polygons of length r."""
    words = ["r0^2", "r1^2", "r2^2", "(r0 r1)^3", "(r1 r2)^7", "(r0 r2)^2", f"(r0 r1 r2)^{r}"]
    return Presentation(3, tuple(parse_word(w, 3, STRING) for w in words), STRING)


def test_klein_map_group():
    """Test the full group of order 336 of {3,7} with Petrie polygons of length 8"""
    assert coset_enumerate(petrie_presentation(8)).index == 336


@pytest.mark.slow
def test_petrie_17_collapse():
    """Test that [3,7] with Petrie polygons of length 17 is trivial"""
    p = petrie_presentation(17)
    assert coset_enumerate(p, [parse_word("r0 r1", 3, STRING)], max_cosets=2_000_000).index == 1
    assert coset_enumerate(p, max_cosets=2_000_000).index == 1
