import random

import pytest

from groups.exceptions import ConsistencyError, RelationViolationError
from groups.fp import Word, parse_word
from groups.perm import Permutation
from polytopes.catalog import string_group, string_rotation
from polytopes.mix import mix
from polytopes.rotation import (
    GAMMA_UNION_NOTE,
    coset_poset,
    covers,
    dual,
    enantiomorph,
    enantiomorph_word,
    face_lattice,
    find_period_witness,
    gamma_I,
    intersection_conditions,
    intersection_property,
    is_equivalent,
    is_reflexible,
    is_self_dual,
    quotient_criterion,
    rotation_system,
    self_duality,
    string_rotation_system,
    system_from_generators,
    word_period_pair,
)


def test_icosahedral_system():
    """Test the regular action of [3,5]+"""
    sys = rotation_system(string_rotation(3, 5), name="icosahedron")
    assert sys.order == 60
    assert sys.degree == 60
    assert sys.rank == 3
    assert sys.type_vector == (3, 5)
    assert sys.degenerate_indices() == []


def test_degenerate_type_is_noted():
    """Test that a collapsed generator order is flagged"""
    sys = rotation_system(string_rotation(4, 4), [parse_word("s1^2", 3)])
    assert sys.order == 8
    assert sys.type_vector == (2, 4)
    assert sys.degenerate_indices() == [1]
    assert any("degenerate" in n for n in sys.notes)


def test_relation_violation():
    """Test that generators breaking (s1 s2)^2 = 1 are refused"""
    g = Permutation.from_cycles([(0, 1, 2)], 3)
    with pytest.raises(RelationViolationError) as excinfo:
        system_from_generators([g, g])
    assert excinfo.value.diagnostics == {"i": 1, "j": 2}


def test_string_rotation_system():
    """Test rotations read off a full string group"""
    sys = string_rotation_system(string_group(3, 3))
    assert sys.full_order == 24
    assert sys.order == 12
    assert "rotation subgroup of index 2" in sys.notes


def test_intersection_conditions():
    """Test the number of subgroup pairs checked per rank"""
    assert len(intersection_conditions(3)) == 1
    assert len(intersection_conditions(4)) == 3
    assert len(intersection_conditions(5)) == 6
    assert len(intersection_conditions(6)) == 10
    assert intersection_conditions(6)[-1] == ((1, 2, 3, 4), (5,))


def test_gamma_I(tetrahedron):
    """Test face stabilizers of the tetrahedron"""
    full = set(range(-1, 4))
    assert gamma_I(tetrahedron, full).order == 12
    assert gamma_I(tetrahedron, full - {0}).order == 3
    assert gamma_I(tetrahedron, full - {1}).order == 2
    assert gamma_I(tetrahedron, full - {2}).order == 3
    with pytest.raises(ValueError):
        gamma_I(tetrahedron, {7})


def test_intersection_property_holds(tetrahedron, torus21):
    """Test polytopal rank-3 systems"""
    for sys in (tetrahedron, torus21):
        verdict = intersection_property(sys)
        assert verdict.holds
        assert verdict.witness is None
        assert len(verdict.checks) == 1


def test_subsystems(cube):
    """Test facet and vertex-figure systems"""
    assert cube.facet().order == 4
    assert cube.vertex_figure().order == 3
    with pytest.raises(ValueError):
        cube.subsystem([1, 3])


def test_reflexibility(tetrahedron, torus21, torus30):
    """Test the mirror test on regular and chiral maps"""
    assert is_reflexible(tetrahedron)
    assert is_reflexible(torus30)
    assert not is_reflexible(torus21)
    assert is_equivalent(enantiomorph(enantiomorph(torus21)), torus21)
    assert not is_equivalent(enantiomorph(torus21), torus21)


def test_enantiomorph_of_rank_two_is_refused():
    """Test that mirror images need rank 3"""
    sys = system_from_generators([Permutation.from_cycles([(0, 1, 2)], 3)])
    with pytest.raises(ValueError):
        enantiomorph(sys)


def test_duality(tetrahedron, cube, torus21):
    """Test duals and the self-duality classes"""
    assert dual(cube).type_vector == (3, 4)
    assert is_equivalent(dual(dual(cube)), cube)
    assert is_self_dual(tetrahedron)
    assert self_duality(tetrahedron) == "self-dual"
    assert self_duality(cube) == "none"
    assert not is_self_dual(torus21)
    assert self_duality(torus21) == "improperly"
    assert is_equivalent(dual(torus21), enantiomorph(torus21))


def test_equivalence_across_domains(torus21):
    """Test that presentation and lattice realizations are identified"""
    other = rotation_system(string_rotation(4, 4), [parse_word("(s2 s1^-1)^2 s1 s2 s1^-2", 3)])
    assert is_equivalent(other, torus21)
    assert covers(torus21, torus21)


def test_period_witness(torus21, torus30):
    """Test words whose period differs from that of their mirror image"""
    w = find_period_witness(torus21, 6)
    assert w is not None
    first, second = word_period_pair(torus21, w)
    assert first != second
    assert find_period_witness(torus30, 4) is None


def test_enantiomorph_word_examples():
    """Test the mirror substitution on explicit words"""
    w = parse_word("s2 s3^-1 s1", 4)
    assert enantiomorph_word(w) == parse_word("s1^2 s2 s3^-1 s1^-1", 4)
    omega = parse_word("(s2^-1 s3)^2 s2 s3^-1", 4)
    assert enantiomorph_word(omega) == parse_word("(s2^-1 s1^-2 s3)^2 s1^2 s2 s3^-1", 4)
    for word in (w, omega, parse_word("s1^3 s2^-2 s3", 4)):
        assert enantiomorph_word(enantiomorph_word(word)) == word


@pytest.mark.parametrize("name", ["tetrahedron", "cube", "torus30"])
def test_reflexible_systems_have_equal_period_pairs(request, name):
    """Test that random words and their mirror images share a period"""
    sys = request.getfixturevalue(name)
    rng = random.Random(3)
    letters = [(g, e) for g in range(1, sys.rank) for e in (1, -1)]
    for _ in range(120):
        w = Word(tuple(rng.choice(letters) for _ in range(rng.randint(1, 10))))
        first, second = word_period_pair(sys, w)
        assert first == second


def test_quotient_criterion(torus21, torus30, tetrahedron):
    """Test the facet criterion on mixes projected to a component"""
    chiral_mix = mix(torus21, torus30)
    assert quotient_criterion(chiral_mix.base, torus21, side="facet")
    assert quotient_criterion(chiral_mix.base, torus21, side="vertex", require_target_property=True)
    coprime = mix(torus21, tetrahedron)
    assert not quotient_criterion(coprime.base, torus21, side="facet")
    with pytest.raises(ValueError):
        quotient_criterion(torus21, tetrahedron)
    with pytest.raises(ValueError):
        quotient_criterion(chiral_mix.base, torus21, side="edge")


@pytest.mark.parametrize(
    "orders, f_vector",
    [((3, 3), (4, 6, 4)), ((4, 3), (8, 12, 6)), ((3, 4), (6, 12, 8))],
)
def test_platonic_face_lattices(orders, f_vector):
    """Test face counts, flags and the diamond condition"""
    sys = rotation_system(string_rotation(*orders))
    lattice = face_lattice(sys)
    assert lattice.f_vector == f_vector
    assert lattice.flag_count == 2 * sys.order
    assert lattice.diamond_ok
    assert GAMMA_UNION_NOTE in lattice.notes


def test_torus_face_lattice(torus21):
    """Test the face lattice of a chiral map"""
    lattice = face_lattice(torus21)
    assert lattice.counts == (5, 10, 5)
    assert lattice.flag_count == 40
    assert len(lattice.incidences[(0, 1)]) == 20


def test_face_lattice_refuses_non_polytopes(eleven_cell):
    """Test that a failed intersection property stops lattice extraction"""
    with pytest.raises(ValueError):
        face_lattice(eleven_cell)


def test_lattice_cap(tetrahedron):
    """Test the lattice size cap"""
    from groups.exceptions import EnumerationLimitError

    with pytest.raises(EnumerationLimitError):
        coset_poset(tetrahedron, limit=5)


def test_reflexibility_oracle_disagreement(torus21):
    """Test that conflicting mirror tests raise"""
    from dataclasses import replace

    bogus = replace(torus21, provenance=string_rotation(4, 4))
    with pytest.raises(ConsistencyError):
        is_reflexible(bogus)
